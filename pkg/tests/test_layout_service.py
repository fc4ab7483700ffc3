import xml.etree.ElementTree as ET

import pytest

from app.models.schedule_model import Schedule
from app.services.compile_service import compile_bs_rectangular, compile_bs_triangular
from app.services.layout_service import render, render_ascii, render_svg
from app.services.symplectic_service import random_unitary


def _grid_lines(text):
    return text.splitlines()[1:]


def test_triangle_has_phases_on_the_diagonal():
    schedule = compile_bs_triangular(random_unitary(3, seed=0))
    text = render_ascii(schedule)
    assert text.splitlines()[0].startswith(f"modes=3 lattice_period={schedule.lattice_period}")
    lines = _grid_lines(text)
    for row in range(3):
        assert lines[2 * row][2 * row] == "P"
    assert sum(line.count("B") for line in lines) == 3
    assert sum(line.count("P") for line in lines) == 3


def test_ascii_marks_wire_directions():
    schedule = compile_bs_triangular(random_unitary(2, seed=1))
    lines = _grid_lines(render_ascii(schedule))
    glyphs = "".join(lines[0::2])
    wires = "".join(lines[1::2])
    assert glyphs.count("-") + wires.count("|") == sum(len(i.wires_out) for i in schedule.instructions)


@pytest.mark.parametrize("modes", [3, 6])
def test_rectangular_beamsplitter_count(modes):
    schedule = compile_bs_rectangular(random_unitary(modes, seed=modes))
    lines = _grid_lines(render(schedule, "ascii"))
    assert sum(line.count("B") for line in lines) == modes * (modes - 1) // 2


def _svg_ids(text):
    root = ET.fromstring(text.encode())
    assert root.tag.rsplit("}", 1)[-1] == "svg"
    return [element.get("id", "") for element in root.iter()]


def test_svg_glyphs():
    schedule = compile_bs_triangular(random_unitary(4, seed=2))
    ids = _svg_ids(render_svg(schedule))
    assert sum(i.startswith("node-beamsplitter-") for i in ids) == 6
    assert sum(i.startswith("node-phase-") for i in ids) == 4
    assert sum(i.startswith("wire-") for i in ids) == sum(len(i.wires_out) for i in schedule.instructions)


def test_empty_schedule_renders():
    schedule = Schedule(modes=1, lattice_period=1, instructions=[], input_wires=[0], output_wires=[0])
    assert not any(i.startswith("node-") for i in _svg_ids(render(schedule, "svg")))
    assert len(render_ascii(schedule).splitlines()) == 1
