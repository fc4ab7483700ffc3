import json

import numpy as np

from app.utils.logger import numpy_to_builtin


def test_numpy_values_become_builtins():
    event = numpy_to_builtin(
        None,
        "info",
        {"event": "x", "n": np.int64(3), "tau": np.float64(0.5), "row": np.array([1.0, 2.0]), "k": 1},
    )
    assert event == {"event": "x", "n": 3, "tau": 0.5, "row": [1.0, 2.0], "k": 1}
    assert type(event["n"]) is int
    json.dumps(event)
