"""Command-line entry point: ``scavhunt gen | run | sweep | train-dqn | report``.

Exit codes: 0 success, 1 usage error, 2 infeasible configuration.
"""

import csv
import logging
import os
import sys

import click

from .belief import sample_arrangement
from .bench.environments import generate_environment, hunt_seed, robot_fixture
from .bench.experiment import (
    PLANNER_NAMES,
    ExperimentSpec,
    make_planner,
    read_results,
    run_environment,
    run_experiment,
    write_results,
)
from .bench.report import write_report
from .dqn import DQNPlanner, TrainConfig, train
from .envfile import load_environment, save_environment
from .hunt import HuntInstance, run_hunt, write_trace
from .nn import save_network
from .validation import InfeasibleConfigurationError

log = logging.getLogger("scavhunt")


def _parse_nodes(text):
    """'3..10' or '3,5,8' -> list of ints."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            nodes = list(range(lo, hi + 1))
        else:
            nodes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a range like 3..10 or a list like 3,5,8, got {text!r}")
    if not nodes or min(nodes) < 1:
        raise click.BadParameter(f"no valid node counts in {text!r}")
    return nodes


def _parse_algs(text):
    algs = [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in algs if a not in PLANNER_NAMES]
    if bad or not algs:
        raise click.BadParameter(
            f"unknown planner(s) {', '.join(bad) or text!r}; choose from {', '.join(PLANNER_NAMES)}")
    return algs


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """Plan and benchmark scavenger hunts on weighted graphs."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")


@cli.command()
@click.option("--nodes", type=int, help="Number of nodes.")
@click.option("--objects", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--env-id", type=int, default=0, show_default=True)
@click.option("--robot-fixture", "use_fixture", is_flag=True, help="Write the fixed lab-robot environment.")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
def gen(nodes, objects, seed, env_id, use_fixture, output):
    """Generate a random environment file."""
    if use_fixture:
        env = robot_fixture()
    else:
        if nodes is None:
            raise click.UsageError("--nodes is required unless --robot-fixture is given")
        env = generate_environment(nodes, objects, seed, env_id)
    save_environment(env, output)


def _load_env(path):
    try:
        return load_environment(path)
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"cannot load environment {path}: {exc}")


def _planner_for_run(name, env, policy):
    if name not in ("dqn", "dqnmap"):
        return make_planner(name)
    if policy is None:
        raise click.UsageError(f"--policy is required for {name}")
    with open(policy, "rb") as fh:
        try:
            planner = DQNPlanner.load(fh, env)
        except ValueError as exc:
            raise click.UsageError(f"cannot use policy {policy}: {exc}")
    if planner.with_map != (name == "dqnmap"):
        raise click.UsageError(f"policy {policy} was not trained for {name}")
    return planner


@cli.command()
@click.option("--env", "env_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--alg", "algs", required=True, help="Planner name, or a comma-separated list.")
@click.option("--hunts", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--csv", "csv_path", required=True, type=click.Path(dir_okay=False))
@click.option("--env-id", type=int, default=None, help="Defaults to the node count.")
@click.option("--policy", type=click.Path(exists=True, dir_okay=False),
              help="Trained policy file for dqn / dqnmap.")
@click.option("--timing", is_flag=True,
              help="Record planner wall time (makes the CSV non-reproducible).")
@click.option("--trace-dir", type=click.Path(file_okay=False),
              help="Write one trajectory CSV per hunt and planner.")
def run(env_path, algs, hunts, seed, csv_path, env_id, policy, timing, trace_dir):
    """Run sampled hunts of one environment through the chosen planners."""
    env = _load_env(env_path)
    names = _parse_algs(algs)
    if hunts < 1:
        raise click.BadParameter("--hunts must be positive")
    env_id = env.node_count if env_id is None else env_id
    planners = {name: _planner_for_run(name, env, policy) for name in names}
    results = run_environment(env, planners, env_id, 0, hunts, seed, timing)
    with open(csv_path, "w", newline="") as fh:
        write_results(results, fh)
    if trace_dir:
        os.makedirs(trace_dir, exist_ok=True)
        for hunt_id in range(hunts):
            truth = sample_arrangement(env.prior, hunt_seed(seed, env_id, 0, hunt_id))
            instance = HuntInstance.from_environment(env, truth)
            for name, planner in planners.items():
                path = os.path.join(trace_dir, f"hunt{hunt_id:05d}_{name}.csv")
                with open(path, "w", newline="") as fh:
                    write_trace(run_hunt(instance, planner), fh)


@cli.command()
@click.option("--nodes", "nodes_text", default="3..10", show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--hunts", type=int, default=50, show_default=True)
@click.option("--algs", default="optimal,exhaustive,probprox,probability,proximity,salesman",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--csv", "csv_path", required=True, type=click.Path(dir_okay=False))
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--timing", is_flag=True,
              help="Record planner wall time (makes the CSV non-reproducible).")
@click.option("--exhaustive-max-nodes", type=int, default=8, show_default=True)
@click.option("--objects", type=int, default=4, show_default=True)
@click.option("--dqn-epochs", type=int, default=40, show_default=True)
def sweep(nodes_text, trials, hunts, algs, seed, csv_path, workers, timing,
          exhaustive_max_nodes, objects, dqn_epochs):
    """Run every planner over random environments of increasing size."""
    nodes = _parse_nodes(nodes_text)
    if trials < 1 or hunts < 1 or workers < 1 or objects < 1:
        raise click.BadParameter("--trials, --hunts, --workers and --objects must be positive")
    spec = ExperimentSpec(nodes, trials, hunts, _parse_algs(algs), seed, objects,
                          exhaustive_max_nodes, {"epochs": dqn_epochs, "random_state": seed})
    results = run_experiment(spec, workers=workers, timing=timing)
    with open(csv_path, "w", newline="") as fh:
        write_results(results, fh)


@cli.command("train-dqn")
@click.option("--env", "env_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--map/--no-map", "with_map", default=False,
              help="Include travel costs from the current node in the observation.")
@click.option("--epochs", type=int, default=40, show_default=True)
@click.option("--steps-per-epoch", type=int, default=2000, show_default=True)
@click.option("--test-episodes", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--no-normalize", is_flag=True, help="Feed raw travel costs to the network.")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--curve", "curve_path", type=click.Path(dir_okay=False))
def train_dqn(env_path, with_map, epochs, steps_per_epoch, test_episodes, seed, no_normalize,
              output, curve_path):
    """Train a DQN policy for one environment."""
    env = _load_env(env_path)
    if env.node_count < 2:
        raise InfeasibleConfigurationError("training needs at least two nodes")
    if min(epochs, steps_per_epoch, test_episodes) < 1:
        raise click.BadParameter("--epochs, --steps-per-epoch and --test-episodes must be positive")
    config = TrainConfig(epochs=epochs, steps_per_epoch=steps_per_epoch,
                         test_episodes=test_episodes, normalize=not no_normalize, seed=seed)
    net, curve = train(env, config, with_map,
                       callback=lambda e, r, eps, lr: log.info(
                           "epoch %d mean test return %.3f", e, r))
    with open(output, "wb") as fh:
        save_network(net, fh, with_map, config.normalize)
    if curve_path:
        with open(curve_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["epoch", "mean_test_return", "epsilon", "lr"])
            for epoch, ret, eps, lr in curve:
                writer.writerow([epoch, repr(ret), repr(eps), repr(lr)])


@cli.command()
@click.option("--csv", "csv_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(file_okay=False))
def report(csv_path, output):
    """Summarize a results CSV into plot-ready tables."""
    try:
        with open(csv_path, newline="") as fh:
            results = read_results(fh)
    except ValueError as exc:
        raise click.UsageError(f"malformed results file: {exc}")
    try:
        write_report(results, output)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def main(argv=None):
    try:
        rv = cli.main(args=argv, prog_name="scavhunt", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except InfeasibleConfigurationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
