import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import ParseError, ValidationError
from app.models.matrix_model import BogoliubovPair, ComplexUnitary, ShearMatrix, SymplecticMap
from app.services.io_service import (
    format_float,
    load_json,
    parse_schedule,
    parse_target,
    parse_verify_target,
    random_target,
    read_text,
)


def test_format_float_keeps_full_precision():
    assert float(format_float(0.1)) == 0.1
    assert format_float(0.0) == "0.00000000000000000e+00"


def test_load_json_errors():
    with pytest.raises(ParseError) as excinfo:
        load_json("{not json")
    assert excinfo.value.exit_code == 2
    with pytest.raises(ParseError):
        load_json("[1, 2]")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_text(str(tmp_path / "absent.json"))


def test_parse_unitary_nested_and_flat():
    nested = {"dim": 1, "entries": [[[0.0, 1.0]]]}
    flat = {"dim": 1, "entries": [[0.0, 1.0]]}
    assert parse_target(nested, "unitary").entries[0, 0] == 1j
    assert parse_target(flat, "unitary").entries[0, 0] == 1j


@pytest.mark.parametrize(
    "data,kind",
    [
        ({"dim": 2, "entries": [[1.0, 0.0]]}, "unitary"),
        ({"modes": 1, "A": [[1.0, 0.0]]}, "bogoliubov"),
        ({"modes": 2, "entries": [1.0, 2.0]}, "shear"),
        ({"dim": 1, "entries": [[1.0, 0.0]]}, "tensor"),
    ],
)
def test_parse_target_errors(data, kind):
    with pytest.raises(ParseError):
        parse_target(data, kind)


def test_verify_target_detection():
    assert isinstance(parse_verify_target({"modes": 1, "entries": [1.0, 0.0, 0.0, 1.0]}, None), SymplecticMap)
    assert isinstance(parse_verify_target({"dim": 1, "entries": [[1.0, 0.0]]}, None), ComplexUnitary)
    assert isinstance(
        parse_verify_target({"modes": 1, "A": [[1.0, 0.0]], "B": [[0.0, 0.0]]}, None), BogoliubovPair
    )
    assert isinstance(parse_verify_target({"modes": 2, "entries": [0.0, 1.0, 1.0, 0.0]}, None), ShearMatrix)


def test_schedule_parse_error():
    with pytest.raises(ParseError, match="invalid schedule"):
        parse_schedule('{"modes": 0, "lattice_period": 1, "input_wires": [], "output_wires": []}')


@pytest.mark.parametrize("kind", ["unitary", "bogoliubov", "shear"])
def test_random_targets_are_seeded(kind):
    first = random_target(kind, 3, seed=9).to_json_dict()
    second = random_target(kind, 3, seed=9).to_json_dict()
    assert first == second


def test_random_target_round_trip_through_parser():
    target = random_target("bogoliubov", 2, seed=1)
    parsed = parse_target(target.to_json_dict(), "bogoliubov")
    assert_allclose(parsed.matA, target.matA)
    assert_allclose(parsed.matB, target.matB)


def test_unknown_random_kind():
    with pytest.raises(ValidationError):
        random_target("tensor", 2, seed=0)
    assert np.isfinite(random_target("shear", 1, seed=0).entries).all()
