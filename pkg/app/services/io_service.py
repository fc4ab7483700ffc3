"""Reading and writing targets, schedules and reports."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pydantic

from app.core.config import settings
from app.core.exceptions import ParseError, ValidationError
from app.models.matrix_model import BogoliubovPair, ComplexUnitary, ShearMatrix, SymplecticMap
from app.models.schedule_model import Schedule
from app.services.symplectic_service import random_bogoliubov, random_shear, random_unitary

Target = Union[ComplexUnitary, BogoliubovPair, ShearMatrix]

_TARGET_TYPES = {
    "unitary": ComplexUnitary,
    "bogoliubov": BogoliubovPair,
    "shear": ShearMatrix,
}


def format_float(value: float) -> str:
    """Full double precision, scientific notation."""
    return f"{value:.17e}"


def read_text(path: Optional[str]) -> str:
    if path is None:
        raise ParseError("no input file given")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=path) from exc


def write_text(path: Optional[str], text: str) -> None:
    """Write to ``path``, or to stdout when no path is given."""
    if path is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot write {path}: {exc.strerror}", path=path) from exc


def load_json(text: str) -> Dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object at the top level")
    return data


def parse_target(data: Dict[str, Any], kind: str) -> Target:
    """Build a target matrix of ``kind`` from its JSON form.

    Raises:
        ParseError: missing keys or entries of the wrong shape.
    """
    if kind not in _TARGET_TYPES:
        raise ParseError(f"unknown target kind {kind}", kind=kind)
    try:
        return _TARGET_TYPES[kind].from_json_dict(data)
    except (KeyError, TypeError, ValueError, pydantic.ValidationError) as exc:
        raise ParseError(f"cannot read {kind} target: {exc}", kind=kind) from exc


def parse_verify_target(data: Dict[str, Any], kind: Optional[str]) -> Union[Target, SymplecticMap]:
    """A verify target is either a SymplecticMap or one of the compile targets.

    A ``{"modes", "entries"}`` object with (2N)^2 entries is read as a
    SymplecticMap; anything else follows ``kind``.
    """
    entries = data.get("entries")
    if "modes" in data and isinstance(entries, list) and "dim" not in data:
        try:
            modes = int(data["modes"])
        except (TypeError, ValueError) as exc:
            raise ParseError("modes must be an integer") from exc
        if len(entries) == (2 * modes) ** 2:
            try:
                return SymplecticMap.from_json_dict(data)
            except (ValueError, pydantic.ValidationError) as exc:
                raise ParseError(f"cannot read symplectic map: {exc}") from exc
    if kind is None:
        if "dim" in data:
            kind = "unitary"
        elif "A" in data:
            kind = "bogoliubov"
        else:
            kind = "shear"
    return parse_target(data, kind)


def target_to_json(target: Union[Target, SymplecticMap]) -> str:
    return json.dumps(target.to_json_dict(), indent=2) + "\n"


def parse_schedule(text: str) -> Schedule:
    load_json(text)
    try:
        return Schedule.from_json(text)
    except pydantic.ValidationError as exc:
        raise ParseError(
            f"invalid schedule: {exc.error_count()} problem(s)",
            errors=[error["msg"] for error in exc.errors()],
        ) from exc


def random_target(kind: str, modes: int, seed: int) -> Target:
    """Seeded random target of the given kind."""
    if kind == "unitary":
        return random_unitary(modes, seed)
    if kind == "bogoliubov":
        return random_bogoliubov(modes, seed, settings.RANDOM_MAX_R)
    if kind == "shear":
        return random_shear(modes, seed)
    raise ValidationError(f"unknown target kind {kind}", kind=kind)
