"""ASCII and SVG renderings of a schedule on the lattice grid.

Macronode t is drawn at column t mod N_lat and row t div N_lat; horizontal
wires go to t + 1, vertical wires to t + N_lat.
"""

import io
from typing import Dict, Tuple

import matplotlib
from matplotlib.axes import Axes
from matplotlib.figure import Figure
from matplotlib.patches import Circle, Rectangle, RegularPolygon

from app.models.schedule_model import MacronodeInstruction, Schedule

GLYPHS: Dict[str, str] = {
    "beamsplitter": "B",
    "phase": "P",
    "squeeze": "S",
    "shear-pair": "X",
    "shear": "H",
    "identity": "I",
    "input": ">",
    "output": "<",
}
EMPTY = "."

_CELL_INCHES = 0.5
_RADIUS = 0.3
_COLOURS: Dict[str, str] = {
    "beamsplitter": "#1f77b4",
    "phase": "#ff7f0e",
    "squeeze": "#2ca02c",
    "shear-pair": "#9467bd",
    "shear": "#8c564b",
    "identity": "#7f7f7f",
    "input": "#17becf",
    "output": "#bcbd22",
}


def _grid(schedule: Schedule) -> Tuple[Dict[Tuple[int, int], MacronodeInstruction], int, int]:
    cells = {schedule.position(i.site): i for i in schedule.instructions}
    rows = max((row for row, _ in cells), default=-1) + 1
    return cells, rows, schedule.lattice_period


def render_ascii(schedule: Schedule) -> str:
    """One text row per lattice row; '-' marks a t+1 wire and '|' a t+N wire."""
    cells, rows, columns = _grid(schedule)
    lines = []
    for row in range(rows):
        top, below = [], []
        for col in range(columns):
            instruction = cells.get((row, col))
            if instruction is None:
                top.append(EMPTY + " ")
                below.append("  ")
                continue
            directions = {link.direction for link in instruction.wires_out}
            top.append(GLYPHS[instruction.role] + ("-" if "horizontal" in directions else " "))
            below.append("| " if "vertical" in directions else "  ")
        lines.append("".join(top).rstrip())
        lines.append("".join(below).rstrip())
    legend = ", ".join(f"{glyph}={role}" for role, glyph in GLYPHS.items())
    header = f"modes={schedule.modes} lattice_period={schedule.lattice_period} ({legend})"
    return "\n".join([header] + lines) + "\n"


def _glyph(ax: Axes, role: str, site: int, cx: float, cy: float) -> None:
    colour = _COLOURS[role]
    if role == "beamsplitter":
        patch = Circle((cx, cy), _RADIUS, color=colour)
    elif role == "squeeze":
        patch = RegularPolygon((cx, cy), 4, radius=_RADIUS * 1.4, color=colour)
    else:
        patch = Rectangle((cx - _RADIUS, cy - _RADIUS), 2 * _RADIUS, 2 * _RADIUS, color=colour)
    patch.set_gid(f"node-{role}-{site}")
    ax.add_patch(patch)
    ax.text(cx, cy, GLYPHS[role], color="white", ha="center", va="center", fontsize=9)


def render_svg(schedule: Schedule) -> str:
    """Standalone SVG document; an empty schedule gives an empty canvas.

    Every node is a patch with gid ``node-<role>-<site>`` and every wire a line
    with gid ``wire-<wire>``.
    """
    cells, rows, columns = _grid(schedule)
    width, height = max(columns, 1), max(rows, 1)
    fig = Figure(figsize=(width * _CELL_INCHES, height * _CELL_INCHES))
    ax = fig.add_axes((0.0, 0.0, 1.0, 1.0))
    ax.set_xlim(0, width)
    ax.set_ylim(height, 0)
    ax.set_aspect("equal")
    ax.axis("off")

    for (row, col), instruction in sorted(cells.items()):
        cx, cy = col + 0.5, row + 0.5
        for link in instruction.wires_out:
            dx, dy = (1, 0) if link.direction == "horizontal" else (0, 1)
            (wire,) = ax.plot([cx, cx + dx], [cy, cy + dy], color="black", linewidth=2, zorder=1)
            wire.set_gid(f"wire-{link.wire}")
        _glyph(ax, instruction.role, instruction.site, cx, cy)

    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.fonttype": "none", "svg.hashsalt": "qrl"}):
        fig.savefig(buffer, format="svg")
    return buffer.getvalue()


def render(schedule: Schedule, output_format: str) -> str:
    if output_format == "svg":
        return render_svg(schedule)
    return render_ascii(schedule)
