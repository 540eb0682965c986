from __future__ import annotations

import json
import logging
import sys
from dataclasses import replace
from typing import Any, List, Optional, Sequence, Tuple

import click

from packages.core.adaptation.config import AdaptationConfig, MutationKind, SearchStrategy
from packages.core.adaptation.evolution import evolve_rules
from packages.core.adaptation.log import format_adaptation_log
from packages.core.ann.embedding import ann_to_system_model, learn_model, with_inputs
from packages.core.ann.files import read_dataset
from packages.core.ann.network import ActivationKind, feed_forward_network, ring_threshold_network
from packages.core.ca.automaton import (
    ca_to_system_model,
    elementary_automaton,
    life_automaton,
    pattern_grid,
    random_cells,
)
from packages.core.ca.bitmap import trajectory_frames, trajectory_to_pbm
from packages.core.ca.milieus import BOUNDARIES
from packages.core.config import load_engine_settings
from packages.core.equivalence.checks import EquivalenceConfig, check_equivalence
from packages.core.equivalence.render import ERROR_STATUS, exit_status, render_table, report_to_document
from packages.core.metamodel.engine import actualize
from packages.core.metamodel.errors import FormatError, MetamodelError, RangeError
from packages.core.metamodel.models import AdaptationEnd, Regime, SystemModel
from packages.core.metamodel.serialization import (
    dumps_document,
    format_trajectory,
    load_model,
    model_to_document,
    parse_state_line,
    read_text,
)


logger = logging.getLogger(__name__)

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_SOFTWARE = 70
EX_CONFIG = 78

STRATEGIES = {"hill": SearchStrategy.HILL_CLIMB, "exhaustive": SearchStrategy.EXHAUSTIVE}
STEPS = click.IntRange(min=1)


@click.group()
def cli() -> None:
    """Create, run, adapt and compare system models."""


@cli.command("create-ca")
@click.option("--rule", type=int, required=True, help="Wolfram rule number.")
@click.option("--width", type=click.IntRange(min=1), required=True)
@click.option("--radius", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--boundary", type=click.Choice(BOUNDARIES), default="ring", show_default=True)
@click.option("--init", "init", type=click.Choice(["random", "single"]), default="random", show_default=True)
@click.option("--steps", type=STEPS, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def create_ca(
    rule: int, width: int, radius: int, boundary: str, init: str, steps: int, seed: int, out: Optional[str]
) -> int:
    if init == "single":
        cells = tuple(1 if index == width // 2 else 0 for index in range(width))
    else:
        cells = random_cells(width, seed)
    ca = elementary_automaton(rule, cells, radius=radius, boundary=boundary)
    _emit(dumps_document(model_to_document(ca_to_system_model(ca, steps=steps))), out)
    return EX_OK


@cli.command("create-life")
@click.option("--width", type=click.IntRange(min=3), required=True)
@click.option("--height", type=click.IntRange(min=3), required=True)
@click.option("--pattern", type=click.Choice(["blinker", "glider", "random"]), default="glider", show_default=True)
@click.option("--boundary", type=click.Choice(BOUNDARIES), default="ring", show_default=True)
@click.option("--steps", type=STEPS, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def create_life(
    width: int, height: int, pattern: str, boundary: str, steps: int, seed: int, out: Optional[str]
) -> int:
    if pattern == "random":
        cells = random_cells(width * height, seed)
        grid = [cells[row * width:(row + 1) * width] for row in range(height)]
    else:
        grid = pattern_grid(pattern, width, height)
    model = ca_to_system_model(life_automaton(grid, boundary=boundary), steps=steps)
    _emit(dumps_document(model_to_document(model)), out)
    return EX_OK


@cli.command("create-ann")
@click.option("--layers", default=None, help="Layer sizes, e.g. 2,2,1.")
@click.option(
    "--activation",
    type=click.Choice([kind.value for kind in ActivationKind]),
    default=ActivationKind.LOGISTIC.value,
    show_default=True,
)
@click.option("--ring", type=click.IntRange(min=1), default=None, help="Cellular threshold net of this width.")
@click.option("--radius", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--weights", default=None, help="Ring weights left..., self, right..., e.g. 1,1,1.")
@click.option("--theta", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def create_ann(
    layers: Optional[str],
    activation: str,
    ring: Optional[int],
    radius: int,
    weights: Optional[str],
    theta: Optional[float],
    seed: int,
    out: Optional[str],
) -> int:
    if (layers is None) == (ring is None):
        raise click.UsageError("pass exactly one of --layers or --ring")
    if ring is not None:
        if weights is None or theta is None:
            raise click.UsageError("--ring needs --weights and --theta")
        net = ring_threshold_network(
            ring, radius, _numbers(weights, "--weights"), theta, units=random_cells(ring, seed)
        )
        model = ann_to_system_model(net)
    else:
        sizes = [int(size) for size in _numbers(layers, "--layers")]
        model = ann_to_system_model(feed_forward_network(sizes, ActivationKind(activation), seed))
    _emit(dumps_document(model_to_document(model)), out)
    return EX_OK


@cli.command("run")
@click.option("--model", "model_path", required=True)
@click.option("--steps", type=STEPS, default=None, help="Defaults to the model's t.")
@click.option("--inputs", default=None, help="Input unit values for a layered network.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--pbm", type=click.Path(dir_okay=False), default=None)
@click.option("--grid", default=None, help="WxH; writes one P1 frame per step.")
def run(
    model_path: str,
    steps: Optional[int],
    inputs: Optional[str],
    out: Optional[str],
    pbm: Optional[str],
    grid: Optional[str],
) -> int:
    model = _metastable(load_model(model_path))
    if inputs is not None:
        model = with_inputs(model, _numbers(inputs, "--inputs"))
    actual = actualize(model, steps)
    _emit(format_trajectory(actual.trajectory, actual.params.state_set), out)
    if pbm is not None:
        if grid is not None:
            width, height = _grid(grid)
            text = "".join(trajectory_frames(actual.trajectory, width, height))
        else:
            text = trajectory_to_pbm(actual.trajectory)
        _write(pbm, text)
    return EX_OK


@cli.command("adapt")
@click.option("--model", "model_path", required=True)
@click.option("--target", "target_path", required=True)
@click.option("--strategy", type=click.Choice(sorted(STRATEGIES)), default="hill", show_default=True)
@click.option("--g", "g", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--l", "l", type=click.FloatRange(min=0), default=0.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--flips", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--steps", type=STEPS, default=None, help="Defaults to the model's t.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None)
def adapt(
    model_path: str,
    target_path: str,
    strategy: str,
    g: int,
    l: float,
    seed: int,
    flips: int,
    steps: Optional[int],
    out: Optional[str],
    log_path: Optional[str],
) -> int:
    settings = load_engine_settings()
    model = _metastable(load_model(model_path))
    targets = parse_state_line(read_text(target_path))
    cfg = AdaptationConfig(
        g=g,
        l=l,
        seed=seed,
        mutation=MutationKind.SINGLE_BIT_FLIP if flips == 1 else MutationKind.K_BIT_FLIP,
        flips=flips,
        strategy=STRATEGIES[strategy],
        workers=settings.workers,
        exhaustive_limit=settings.exhaustive_limit,
    )
    adapted, log = evolve_rules(model, AdaptationEnd(targets=targets), cfg, steps)
    _emit(dumps_document(model_to_document(adapted)), out)
    if log_path is not None:
        _write(log_path, format_adaptation_log(log))
    best = min(log, key=lambda record: record.loss)
    logger.info("adapt_done best=%s loss=%r", adapted.params.rules.update_rules[0].label(), best.loss)
    return EX_OK


@cli.command("train")
@click.option("--model", "model_path", required=True)
@click.option("--data", "data_path", required=True)
@click.option("--g", "g", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--l", "l", type=click.FloatRange(min=0), default=0.0, show_default=True)
@click.option("--rate", type=click.FloatRange(min=0, min_open=True), default=0.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None)
def train(
    model_path: str,
    data_path: str,
    g: int,
    l: float,
    rate: float,
    seed: int,
    out: Optional[str],
    log_path: Optional[str],
) -> int:
    model = _metastable(load_model(model_path))
    trained, log = learn_model(model, read_dataset(data_path), g=g, l=l, learning_rate=rate, seed=seed)
    _emit(dumps_document(model_to_document(trained)), out)
    if log_path is not None:
        _write(log_path, format_adaptation_log(log))
    logger.info("train_done epochs=%s loss=%r", len(log), log[-1].loss)
    return EX_OK


@cli.command("check-eq")
@click.option("--left", "left_path", required=True)
@click.option("--right", "right_path", required=True)
@click.option("--tolerance", type=click.FloatRange(min=0), default=None)
@click.option("--samples", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None)
def check_eq(
    left_path: str,
    right_path: str,
    tolerance: Optional[float],
    samples: Optional[int],
    seed: int,
    report_path: Optional[str],
) -> int:
    try:
        settings = load_engine_settings()
        defaults = EquivalenceConfig.from_settings(settings, seed=seed)
        cfg = EquivalenceConfig(
            tolerance=defaults.tolerance if tolerance is None else tolerance,
            sample_budget=defaults.sample_budget if samples is None else samples,
            seed=seed,
            enumeration_cap=defaults.enumeration_cap,
            workers=defaults.workers,
        )
        report = check_equivalence(load_model(left_path), load_model(right_path), cfg)
    except (MetamodelError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return ERROR_STATUS
    click.echo(render_table(report), nl=False)
    if report_path is not None:
        _write(report_path, json.dumps(report_to_document(report), indent=2) + "\n")
    return exit_status(report)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and map failures to sysexits-style statuses."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        status = cli.main(args=args, prog_name="metamodel", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EX_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EX_SOFTWARE
    except FileNotFoundError as exc:
        click.echo(f"error: no such file {exc.filename}", err=True)
        return EX_NOINPUT
    except FormatError as exc:
        click.echo(f"error: {exc}", err=True)
        return EX_DATAERR
    except RangeError as exc:
        click.echo(f"error: {exc}", err=True)
        return EX_USAGE
    except MetamodelError as exc:
        logger.debug("command_failed args=%s", args, exc_info=True)
        click.echo(f"error: {exc}", err=True)
        return EX_SOFTWARE
    return status if isinstance(status, int) else EX_OK


def main() -> None:
    from packages.core.logging_config import configure_logging

    from .observability import init_observability

    try:
        configure_logging()
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EX_CONFIG)
    init_observability()
    sys.exit(dispatch())


def _metastable(model: SystemModel) -> SystemModel:
    """Drop a stored trajectory so the model runs again from its initial states."""
    if model.regime == Regime.ACTUAL:
        return replace(model, regime=Regime.METASTABLE, trajectory=None)
    return model


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        click.echo(text, nl=False)
    else:
        _write(path, text)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _numbers(raw: str, flag: str) -> List[Any]:
    try:
        return [float(part) if "." in part or "e" in part.lower() else int(part) for part in raw.split(",")]
    except ValueError:
        raise click.BadParameter(f"expected comma separated numbers, got {raw!r}", param_hint=flag) from None


def _grid(raw: str) -> Tuple[int, int]:
    try:
        width, height = (int(part) for part in raw.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"expected WxH, got {raw!r}", param_hint="--grid") from None
    return width, height


if __name__ == "__main__":
    main()
