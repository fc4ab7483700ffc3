import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.main import create_app
from app.models.matrix_model import ComplexUnitary
from app.services.symplectic_service import random_unitary


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def half_beamsplitter():
    return ComplexUnitary(dim=2, entries=np.array([[1.0, 1.0j], [1.0j, 1.0]]) / np.sqrt(2))


@pytest.fixture
def unitary_4():
    return random_unitary(4, seed=11)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON-serialisable object to a file under tmp_path and return the path."""

    def _write(name, payload):
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
        return str(path)

    return _write
