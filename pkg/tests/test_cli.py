import csv

import pytest

from scavhunt.cli import main


@pytest.fixture
def env_file(tmp_path):
    path = tmp_path / "env.json"
    assert main(["gen", "--nodes", "5", "--seed", "2", "-o", str(path)]) == 0
    return path


def read(path):
    return path.read_bytes()


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["gen", "--nodes", "6", "--seed", "1", "-o", str(p)]) == 0
    assert read(a) == read(b)
    fixture = tmp_path / "robot.json"
    assert main(["gen", "--robot-fixture", "-o", str(fixture)]) == 0


def test_run_and_trace(env_file, tmp_path):
    out = tmp_path / "run.csv"
    traces = tmp_path / "traces"
    args = ["run", "--env", str(env_file), "--alg", "probprox,exhaustive,optimal",
            "--hunts", "5", "--seed", "3", "--csv", str(out), "--trace-dir", str(traces)]
    assert main(args) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 15 and rows[0]["env_id"] == "5"
    assert len(list(traces.iterdir())) == 15
    first = read(out)
    assert main(args) == 0
    assert read(out) == first


def test_usage_errors_exit_1(env_file, tmp_path):
    out = str(tmp_path / "x.csv")
    assert main(["run", "--env", str(env_file), "--alg", "bogus", "--csv", out]) == 1
    assert main(["run", "--env", str(env_file), "--alg", "dqn", "--csv", out]) == 1
    assert main(["sweep", "--nodes", "abc", "--csv", out]) == 1
    assert main(["gen", "-o", out]) == 1
    assert main(["nonsense"]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,results,file\n")
    assert main(["report", "--csv", str(bad), "-o", str(tmp_path / "r")]) == 1


def test_infeasible_exits_2(tmp_path):
    assert main(["gen", "--nodes", "2", "-o", str(tmp_path / "e.json")]) == 2
    one = tmp_path / "one.json"
    one.write_text('{"cost_matrix": [[0]], "objects": [{"name": "a", "locations": {"0": 1}}],'
                   ' "start": 0}')
    assert main(["train-dqn", "--env", str(one), "-o", str(tmp_path / "p.bin")]) == 2


def test_sweep_identical_across_workers(tmp_path):
    base = ["sweep", "--nodes", "3..5", "--trials", "2", "--hunts", "3", "--seed", "7"]
    one, two = tmp_path / "w1.csv", tmp_path / "w2.csv"
    assert main(base + ["--workers", "1", "--csv", str(one)]) == 0
    assert main(base + ["--workers", "2", "--csv", str(two)]) == 0
    assert read(one) == read(two)


def test_train_run_report_pipeline(env_file, tmp_path):
    policy, curve = tmp_path / "p.bin", tmp_path / "curve.csv"
    train = ["train-dqn", "--env", str(env_file), "--map", "--epochs", "2",
             "--steps-per-epoch", "100", "--test-episodes", "5", "--seed", "1",
             "-o", str(policy), "--curve", str(curve)]
    assert main(train) == 0
    first_policy, first_curve = read(policy), read(curve)
    assert main(train) == 0
    assert read(policy) == first_policy and read(curve) == first_curve
    assert curve.read_text().splitlines()[0] == "epoch,mean_test_return,epsilon,lr"

    out = tmp_path / "run.csv"
    assert main(["run", "--env", str(env_file), "--alg", "dqnmap,optimal", "--hunts", "4",
                 "--policy", str(policy), "--csv", str(out)]) == 0
    # a map-trained policy cannot drive the no-map planner
    assert main(["run", "--env", str(env_file), "--alg", "dqn", "--hunts", "1",
                 "--policy", str(policy), "--csv", str(out)]) == 1

    report_dir = tmp_path / "report"
    assert main(["report", "--csv", str(out), "-o", str(report_dir)]) == 0
    names = sorted(p.name for p in report_dir.iterdir())
    assert names == ["decision_time_by_size.csv", "mean_cost_by_size.csv",
                     "ratio_to_optimal.csv", "welch_tests.csv"]
    again = tmp_path / "report2"
    assert main(["report", "--csv", str(out), "-o", str(again)]) == 0
    for name in names:
        assert read(report_dir / name) == read(again / name)
