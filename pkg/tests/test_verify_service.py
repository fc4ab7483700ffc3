import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import SingularBasisError, StructuralError, ToleranceExceededError
from app.models.angles_model import MacronodeAngles, MeasurementPair
from app.models.matrix_model import ComplexUnitary, SymplecticMap
from app.models.schedule_model import MacronodeInstruction, Schedule, WireLink, WirePort
from app.services import teleport_service as tp
from app.services.compile_service import compile_bs_triangular
from app.services.symplectic_service import random_unitary
from app.services.verify_service import (
    path_length_spread,
    require_within,
    schedule_graph,
    verify_against,
    verify_schedule,
)

IDENTITY_PAIR = MeasurementPair(theta_b=np.pi / 2, theta_a=0.0)


def _node(site, wires_in, wires_out, angles=None, role="identity", swap=False):
    return MacronodeInstruction(
        site=site,
        role=role,
        angles=angles or tp.angles_for_identity(),
        swap=swap,
        wires_in=[WirePort(wire=w, arm=a) for w, a in wires_in],
        wires_out=[WireLink(wire=w, direction=d) for w, d in wires_out],
    )


def _schedule(modes, instructions, inputs, outputs, period=3):
    return Schedule(
        modes=modes,
        lattice_period=period,
        instructions=instructions,
        input_wires=inputs,
        output_wires=outputs,
    )


def test_empty_schedule_is_identity():
    S = verify_schedule(_schedule(2, [], [0, 1], [0, 1]))
    assert_allclose(S.entries, np.eye(4))
    assert path_length_spread(_schedule(2, [], [0, 1], [0, 1])) == (0, 0)


def test_swapped_identity_exchanges_modes():
    node = _node(
        0,
        [(0, "b"), (1, "d")],
        [(2, "horizontal"), (3, "vertical")],
        angles=tp.angles_for_swap(IDENTITY_PAIR, IDENTITY_PAIR),
        swap=True,
    )
    S = verify_schedule(_schedule(2, [node], [0, 1], [2, 3])).entries
    expected = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float)
    assert_allclose(S, expected, atol=1e-15)


def test_chain_of_phases_composes():
    first = _node(0, [(0, "b")], [(1, "horizontal")], angles=tp.angles_for_phase(0.2), role="phase")
    second = _node(1, [(1, "b")], [(2, "horizontal")], angles=tp.angles_for_phase(0.5), role="phase")
    schedule = _schedule(1, [first, second], [0], [2])
    target = ComplexUnitary(dim=1, entries=[[np.exp(0.7j)]])
    assert verify_against(schedule, target, tol=1e-12).within_tolerance
    assert list(schedule_graph(schedule).edges) == [(0, 1)]


@pytest.mark.parametrize(
    "instructions,inputs,outputs",
    [
        # wire consumed twice
        ([_node(0, [(0, "b")], [(1, "horizontal")]), _node(3, [(0, "d")], [(2, "vertical")])], [0], [1]),
        # wire never produced
        ([_node(0, [(5, "b")], [(1, "horizontal")])], [0], [1]),
        # horizontal wire skipping a site
        ([_node(0, [(0, "b")], [(1, "horizontal")]), _node(2, [(1, "b")], [(2, "horizontal")])], [0], [2]),
        # vertical wire arriving on arm b
        ([_node(0, [(0, "b")], [(1, "vertical")]), _node(3, [(1, "b")], [(2, "horizontal")])], [0], [2]),
        # both outputs in the same direction
        ([_node(0, [(0, "b"), (1, "d")], [(2, "horizontal"), (3, "horizontal")])], [0, 1], [2, 3]),
        # output wire that nothing produces
        ([_node(0, [(0, "b")], [(1, "horizontal")])], [0], [7]),
        # output wire consumed by an instruction
        ([_node(0, [(0, "b")], [(1, "horizontal")]), _node(1, [(1, "b")], [(2, "horizontal")])], [0], [1]),
        # wire lists shorter than the mode count
        ([_node(0, [(0, "b")], [(1, "horizontal")])], [0], []),
    ],
)
def test_structural_errors(instructions, inputs, outputs):
    with pytest.raises(StructuralError) as excinfo:
        verify_schedule(_schedule(len(inputs), instructions, inputs, outputs))
    assert excinfo.value.exit_code == 2


def test_duplicate_site_rejected():
    nodes = [_node(0, [(0, "b")], [(1, "horizontal")]), _node(0, [(1, "d")], [(2, "vertical")])]
    with pytest.raises(StructuralError):
        schedule_graph(_schedule(1, nodes, [0], [2]))


def test_unwired_input_leak_is_a_deviation():
    node = _node(0, [(0, "b")], [(1, "horizontal")], angles=tp.angles_for_beamsplitter(1.0, 0.0), role="beamsplitter")
    report = verify_against(_schedule(1, [node], [0], [1]), ComplexUnitary(dim=1, entries=[[1.0]]), tol=1e-8)
    assert not report.within_tolerance
    assert report.max_deviation > 0.1
    with pytest.raises(ToleranceExceededError):
        require_within(report)


def test_outputs_must_follow_the_swap_flag():
    straight = _node(0, [(0, "b")], [(1, "horizontal")], swap=True)
    with pytest.raises(StructuralError, match="swap flag"):
        schedule_graph(_schedule(1, [straight], [0], [1]))
    crossed = _node(0, [(0, "b")], [(1, "vertical")], swap=True)
    assert list(schedule_graph(_schedule(1, [crossed], [0], [1])).nodes) == [0]


def test_compiled_schedules_agree_with_their_swap_flags():
    schedule = compile_bs_triangular(random_unitary(4, seed=3))
    victim = next(i for i, ins in enumerate(schedule.instructions) if len(ins.wires_in) == 1)
    flipped = [
        instruction.model_copy(update={"swap": not instruction.swap}) if i == victim else instruction
        for i, instruction in enumerate(schedule.instructions)
    ]
    with pytest.raises(StructuralError, match="swap flag"):
        verify_schedule(schedule.model_copy(update={"instructions": flipped}))


def test_singular_angles_rejected():
    angles = MacronodeAngles(theta_a=0.4, theta_b=0.4, theta_c=0.0, theta_d=np.pi / 2)
    node = _node(0, [(0, "b")], [(1, "horizontal")], angles=angles)
    with pytest.raises(SingularBasisError):
        verify_schedule(_schedule(1, [node], [0], [1]))


def test_perturbed_angle_fails_tolerance():
    U = random_unitary(3, seed=12)
    schedule = compile_bs_triangular(U)
    victim = next(i for i, ins in enumerate(schedule.instructions) if ins.role == "beamsplitter")
    instructions = list(schedule.instructions)
    angles = instructions[victim].angles.as_list()
    angles[0] += 1e-3
    instructions[victim] = instructions[victim].model_copy(update={"angles": MacronodeAngles.from_list(angles)})
    perturbed = schedule.model_copy(update={"instructions": instructions})

    report = verify_against(perturbed, U, tol=1e-8)
    assert not report.within_tolerance
    assert report.max_deviation > 1e-5
    with pytest.raises(ToleranceExceededError):
        require_within(report)
    assert require_within(verify_against(schedule, U, tol=1e-8)).within_tolerance


def test_symplectic_target_and_mode_mismatch():
    schedule = _schedule(2, [], [0, 1], [0, 1])
    assert verify_against(schedule, SymplecticMap.from_array(np.eye(4))).max_deviation == 0.0
    with pytest.raises(StructuralError):
        verify_against(schedule, SymplecticMap.from_array(np.eye(6)))


def test_instruction_order_does_not_matter():
    U = random_unitary(4, seed=5)
    schedule = compile_bs_triangular(U)
    shuffled = list(schedule.instructions)
    np.random.default_rng(0).shuffle(shuffled)
    reordered = schedule.model_copy(update={"instructions": shuffled})
    assert_allclose(verify_schedule(reordered).entries, verify_schedule(schedule).entries, atol=1e-10)
