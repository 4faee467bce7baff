import json
from itertools import permutations

import pytest

from bnb import (
    BranchAndBound,
    CheckpointError,
    CheckpointState,
    OpenNode,
    SolveReport,
    SolverConfig,
    SolveStatus,
    checkpoint_load,
    checkpoint_save,
    make_root,
    oracle_qap,
    read_checkpoint,
    solve_bnb,
)
from bnb.node import Incumbent
from instances import CapacityError, estimate_memory, evaluate, instance_digest
from rlt import init_dual

from conftest import random_instance, zero_instance

FAST = dict(restarts=2, max_iters=30)


def worse_than_optimal(inst):
    opt, _ = oracle_qap(inst)
    return next(p for p in permutations(range(inst.n)) if evaluate(inst, p) > opt)


def test_oracle_zero_and_two():
    assert oracle_qap(zero_instance(4)) == (0, (0, 1, 2, 3))
    inst = random_instance(0, 2)
    expected = min(evaluate(inst, (0, 1)), evaluate(inst, (1, 0)))
    assert oracle_qap(inst)[0] == expected


def test_oracle_refuses_large():
    with pytest.raises(ValueError):
        oracle_qap(random_instance(0, 9))


@pytest.mark.parametrize("n", [5, 6, 7])
@pytest.mark.parametrize("seed", range(20))
def test_solve_matches_oracle(n, seed):
    inst = random_instance(seed, n)
    report = solve_bnb(inst, SolverConfig(workers=1, seed=seed, **FAST))
    opt, _ = oracle_qap(inst)
    assert report.status is SolveStatus.OPTIMAL
    assert report.value == opt
    assert evaluate(inst, [j - 1 for j in report.permutation]) == opt
    assert report.root_lb <= opt + 1e-6


@pytest.mark.parametrize("seed", range(5))
def test_solve_from_poor_incumbent_explores_the_tree(seed):
    inst = random_instance(100 + seed, 6)
    report = solve_bnb(inst, SolverConfig(workers=1, initial_perm=worse_than_optimal(inst), **FAST))
    assert report.value == oracle_qap(inst)[0]
    assert report.nodes_expanded >= 1
    assert report.max_depth >= 1


@pytest.mark.parametrize("warm_depth", [0, 1, 3])
def test_warm_depth_does_not_change_the_optimum(warm_depth):
    inst = random_instance(41, 6)
    cfg = SolverConfig(workers=1, warm_depth=warm_depth, initial_perm=worse_than_optimal(inst), **FAST)
    assert solve_bnb(inst, cfg).value == oracle_qap(inst)[0]


def test_zero_instance_is_fathomed_at_the_root():
    report = solve_bnb(zero_instance(5), SolverConfig(workers=1, **FAST))
    assert report.status is SolveStatus.OPTIMAL
    assert report.value == 0
    assert report.root_lb == 0
    assert report.nodes_expanded == 0
    assert report.peak_tensor_bytes == init_dual(zero_instance(5)).nbytes
    assert report.peak_tensor_bytes <= estimate_memory(5).bytes_for_level(2)


def test_two_by_two_instance():
    inst = random_instance(3, 2)
    report = solve_bnb(inst, SolverConfig(workers=1, **FAST))
    assert report.value == oracle_qap(inst)[0]


def test_external_upper_bound_without_permutation():
    inst = random_instance(7, 6)
    opt, _ = oracle_qap(inst)
    found = solve_bnb(inst, SolverConfig(workers=1, ub=opt, **FAST))
    assert found.status is SolveStatus.OPTIMAL
    assert found.value == opt
    missing = solve_bnb(inst, SolverConfig(workers=1, ub=opt - 1, **FAST))
    assert missing.status is SolveStatus.UB_ONLY
    assert missing.value is None or missing.value >= opt


@pytest.mark.parametrize("seed", range(3))
def test_worker_count_does_not_change_the_result(seed):
    inst = random_instance(200 + seed, 7)
    start = worse_than_optimal(inst)
    one = solve_bnb(inst, SolverConfig(workers=1, initial_perm=start, **FAST))
    many = solve_bnb(inst, SolverConfig(workers=4, initial_perm=start, **FAST))
    assert one.value == many.value == oracle_qap(inst)[0]
    assert evaluate(inst, [j - 1 for j in many.permutation]) == many.value


def test_single_worker_runs_are_reproducible():
    inst = random_instance(9, 7)
    cfg = SolverConfig(workers=1, initial_perm=worse_than_optimal(inst), **FAST)
    a = solve_bnb(inst, cfg)
    b = solve_bnb(inst, cfg)
    assert (a.value, a.permutation, a.nodes_expanded, a.nodes_fathomed) == \
           (b.value, b.permutation, b.nodes_expanded, b.nodes_fathomed)
    assert a.root_lb == b.root_lb


def test_make_root_respects_mem_cap():
    inst = random_instance(0, 8)
    with pytest.raises(CapacityError):
        make_root(inst, Incumbent(inst, tuple(range(8))), SolverConfig(mem_cap=1024))


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(workers=0)
    with pytest.raises(ValueError):
        SolverConfig(sb_iters=0)
    with pytest.raises(ValueError):
        SolverConfig(K=2.0)


def test_node_limit_caps_and_resume_finishes(tmp_path):
    inst = random_instance(55, 7)
    path = str(tmp_path / "run.ckpt")
    cfg = SolverConfig(workers=1, initial_perm=worse_than_optimal(inst), node_limit=1,
                       checkpoint_path=path, **FAST)
    capped = solve_bnb(inst, cfg)
    assert capped.status is SolveStatus.CAPPED
    state = read_checkpoint(path, inst)
    assert state.open_nodes
    assert state.stats["nodes_expanded"] == 1
    resumed = solve_bnb(inst, SolverConfig(workers=2, **FAST), resume=state)
    assert resumed.status is SolveStatus.OPTIMAL
    assert resumed.value == oracle_qap(inst)[0]
    assert resumed.nodes_expanded >= 1


def test_requested_stop_leaves_a_checkpoint(tmp_path):
    inst = random_instance(55, 7)
    path = tmp_path / "stop.ckpt"
    solver = BranchAndBound(inst, SolverConfig(workers=2, checkpoint_path=str(path), **FAST))
    solver.request_stop()
    report = solver.solve()
    assert report.status is SolveStatus.CAPPED
    assert report.nodes_expanded == 0
    state = read_checkpoint(str(path), inst)
    assert [node.fixed for node in state.open_nodes] == [()]
    assert state.stats["peak_tensor_bytes"] == report.peak_tensor_bytes > 0


def test_snapshot_round_trip():
    inst = random_instance(8, 6)
    solver = BranchAndBound(inst, SolverConfig(workers=1, initial_perm=worse_than_optimal(inst),
                                               node_limit=1, **FAST))
    solver.solve()
    state = solver.snapshot()
    back = checkpoint_load(checkpoint_save(state), inst)
    assert back.open_nodes == state.open_nodes
    assert back.incumbent_perm == state.incumbent_perm
    assert back.incumbent_value == state.incumbent_value


def make_state(inst):
    return CheckpointState(
        n=inst.n,
        digest=instance_digest(inst),
        incumbent_perm=(1, 0, 2, 3),
        incumbent_value=evaluate(inst, (1, 0, 2, 3)),
        known_value=None,
        open_nodes=[OpenNode(((0, 2),), 12.5), OpenNode(((0, 3), (1, 1)), 20.0)],
        stats={"nodes_expanded": 3, "nodes_fathomed": 4, "elapsed": 1.5},
    )


def test_checkpoint_save_load_identity():
    inst = random_instance(1, 4)
    state = make_state(inst)
    assert checkpoint_load(checkpoint_save(state), inst) == state


def test_checkpoint_refuses_other_instance():
    inst = random_instance(1, 4)
    data = checkpoint_save(make_state(inst))
    with pytest.raises(CheckpointError, match="another instance"):
        checkpoint_load(data, random_instance(2, 4))


def test_checkpoint_refuses_truncated_stream():
    inst = random_instance(1, 4)
    data = checkpoint_save(make_state(inst))
    with pytest.raises(CheckpointError, match="truncated"):
        checkpoint_load(data[: len(data) // 2], inst)


def test_checkpoint_refuses_other_version():
    inst = random_instance(1, 4)
    data = checkpoint_save(make_state(inst)).replace(b'"format_version": 1', b'"format_version": 99')
    with pytest.raises(CheckpointError, match="version"):
        checkpoint_load(data, inst)


def test_report_json_round_trip_and_text():
    inst = random_instance(5, 5)
    report = solve_bnb(inst, SolverConfig(workers=1, **FAST))
    back = SolveReport.from_dict(json.loads(report.to_json()))
    assert back == report
    text = report.to_text()
    assert str(report.value) in text
    assert report.status.value in text
    assert report.trajectory
    assert report.config["workers"] == 1


@pytest.mark.slow
@pytest.mark.parametrize("name, value", [
    ("nug12", 578),
    ("had12", 1652),
    ("chr12a", 9552),
    ("tai12a", 224416),
])
def test_qaplib_small_instances(qaplib, name, value):
    inst, declared, _, _ = qaplib(name)
    assert declared == value
    report = solve_bnb(inst, SolverConfig(workers=1))
    assert report.value == value
    assert report.status is SolveStatus.OPTIMAL


@pytest.mark.slow
def test_nug12_parallel_and_resume(qaplib, tmp_path):
    inst, value, _, _ = qaplib("nug12")
    assert solve_bnb(inst, SolverConfig(workers=4)).value == value
    path = str(tmp_path / "nug12.ckpt")
    capped = solve_bnb(inst, SolverConfig(workers=1, node_limit=20, checkpoint_path=path))
    if capped.status is SolveStatus.CAPPED:
        resumed = solve_bnb(inst, SolverConfig(workers=1), resume=read_checkpoint(path, inst))
        assert resumed.value == value


@pytest.mark.desk
def test_nug20(qaplib):
    inst, value, _, _ = qaplib("nug20")
    assert value == 2570
    assert solve_bnb(inst, SolverConfig()).value == 2570
