import json

import pytest

import cli
from bnb import oracle_qap
from instances import evaluate, format_instance, format_solution

from conftest import fixture_paths, random_instance, zero_instance


@pytest.fixture
def instance_file(tmp_path):
    def write(inst):
        path = tmp_path / f"{inst.name}.dat"
        path.write_text(format_instance(inst))
        return str(path)
    return write


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_prints_optimal_json(capsys, instance_file):
    inst = random_instance(2, 6)
    code, out, _ = run(capsys, "solve", instance_file(inst), "--workers", 1, "--restarts", 2)
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["status"] == "optimal"
    assert report["value"] == oracle_qap(inst)[0]
    assert evaluate(inst, [j - 1 for j in report["permutation"]]) == report["value"]


def test_solve_node_limit_exits_capped_and_resumes(capsys, instance_file, tmp_path):
    inst = random_instance(55, 7)
    path = instance_file(inst)
    ckpt = tmp_path / "run.ckpt"
    opt = oracle_qap(inst)[0]
    code, out, _ = run(capsys, "solve", path, "--workers", 1, "--ub", opt + 50,
                       "--node-limit", 1, "--checkpoint", ckpt)
    assert code == cli.EXIT_CAPPED
    assert json.loads(out)["status"] == "capped"
    assert ckpt.exists()
    code, out, _ = run(capsys, "solve", path, "--workers", 1, "--resume", ckpt)
    assert code == cli.EXIT_OK
    assert json.loads(out)["value"] == opt


def test_solve_time_cap_exits_capped_with_checkpoint(capsys, instance_file, tmp_path):
    inst = random_instance(55, 7)
    ckpt = tmp_path / "timed.ckpt"
    code, out, _ = run(capsys, "solve", instance_file(inst), "--workers", 1,
                       "--ub", oracle_qap(inst)[0] + 50, "--time-cap", 0, "--checkpoint", ckpt)
    assert code == cli.EXIT_CAPPED
    assert json.loads(out)["status"] == "capped"
    assert ckpt.exists()


def test_solve_text_report(capsys, instance_file):
    code, out, _ = run(capsys, "solve", instance_file(zero_instance(4)), "--report", "text")
    assert code == cli.EXIT_OK
    assert "optimal" in out


def test_solve_refuses_above_mem_cap(capsys, instance_file):
    code, _, err = run(capsys, "solve", instance_file(random_instance(0, 8)), "--mem-cap", "1K")
    assert code == cli.EXIT_CAPACITY
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "capacity"
    assert payload["estimate"]["n"] == 8


def test_malformed_instance_is_an_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.dat"
    bad.write_text("3\n1 2 3\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == cli.EXIT_INPUT
    assert "error" in err


def test_missing_file_is_an_input_error(capsys, tmp_path):
    code, _, _ = run(capsys, "bound", tmp_path / "absent.dat")
    assert code == cli.EXIT_INPUT


def test_verify_accepts_and_rejects(capsys, instance_file, tmp_path):
    inst = random_instance(4, 5)
    path = instance_file(inst)
    perm = (4, 2, 0, 1, 3)
    value = evaluate(inst, perm)
    good = tmp_path / "good.sln"
    good.write_text(format_solution(value, perm))
    code, out, _ = run(capsys, "verify", path, good)
    assert code == cli.EXIT_OK
    assert f"declared {value}" in out
    assert f"computed {value}" in out

    # an off-by-one declared value matches neither orientation
    wrong = tmp_path / "wrong.sln"
    wrong.write_text(format_solution(value + 1, perm))
    code, out, _ = run(capsys, "verify", path, wrong)
    assert code == cli.EXIT_MISMATCH
    assert "mismatch" in out


def test_verify_size_mismatch_is_an_input_error(capsys, instance_file, tmp_path):
    short = tmp_path / "short.sln"
    short.write_text(format_solution(0, (2, 0, 1)))
    code, out, err = run(capsys, "verify", instance_file(random_instance(4, 5)), short)
    assert code == cli.EXIT_INPUT
    assert "mismatch" not in out
    assert "3 entries" in err


@pytest.mark.slow
@pytest.mark.parametrize("name, value", [("tai35b", 283315445), ("tai40b", 637250948)])
def test_verify_shipped_fixtures(capsys, name, value):
    code, out, _ = run(capsys, "verify", *fixture_paths(name))
    assert code == cli.EXIT_OK
    assert f"declared {value}" in out
    assert f"computed {value}" in out


def test_verify_distance_first_orientation(capsys, instance_file, tmp_path):
    inst = random_instance(6, 5)
    perm = (1, 0, 4, 3, 2)
    swapped_value = evaluate(inst.swapped(), perm)
    if swapped_value == evaluate(inst, perm):
        pytest.skip("orientation indistinguishable for this draw")
    sln = tmp_path / "swapped.sln"
    sln.write_text(format_solution(swapped_value, perm))
    code, out, _ = run(capsys, "verify", instance_file(inst), sln)
    assert code == cli.EXIT_OK
    assert f"computed {swapped_value}" in out


@pytest.mark.parametrize("n, entries_d", [(3, 18), (12, 871200), (30, 296704800)])
def test_capacity_by_size(capsys, n, entries_d):
    code, out, _ = run(capsys, "capacity", n, "--report", "json")
    assert code == cli.EXIT_OK
    assert json.loads(out)["entries_D"] == entries_d


def test_capacity_of_instance_file(capsys, instance_file):
    code, out, _ = run(capsys, "capacity", instance_file(random_instance(0, 5)))
    assert code == cli.EXIT_OK
    assert "entries D  1,800" in out


def test_heuristic_is_deterministic(capsys, instance_file):
    path = instance_file(random_instance(3, 8))
    _, first, _ = run(capsys, "heuristic", path, "--restarts", 5, "--seed", 11)
    _, second, _ = run(capsys, "heuristic", path, "--restarts", 5, "--seed", 11, "--workers", 3)
    assert first == second
    value = int(first.splitlines()[0])
    assert value >= oracle_qap(random_instance(3, 8))[0]


def test_bound_on_zero_instance(capsys, instance_file):
    code, out, _ = run(capsys, "bound", instance_file(zero_instance(4)), "--ub", 1)
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["lb"] == 0
    assert payload["gap"] == 1.0
    assert payload["status"] == "converged"


def test_bound_on_zero_instance_with_heuristic_ub(capsys, instance_file):
    code, out, _ = run(capsys, "bound", instance_file(zero_instance(4)), "--restarts", 2)
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["ub"] == 0
    assert payload["lb"] == 0
    assert payload["gap"] == 0


def test_bound_reports_a_valid_lower_bound(capsys, instance_file):
    inst = random_instance(8, 6)
    opt = oracle_qap(inst)[0]
    for level in (1, 2):
        code, out, _ = run(capsys, "bound", instance_file(inst), "--level", level,
                           "--ub", opt, "--max-iters", 20)
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["level"] == level
        assert payload["lb"] <= opt + 1e-6
        assert 0 <= payload["gap"] <= 1
