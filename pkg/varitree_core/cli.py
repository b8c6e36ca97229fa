# Copyright 2024 The varitree-core authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Command line front end: tree generation, Delta matrices, reconstruction and the experiment runners."""
from functools import wraps
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
from flask import Blueprint, Flask, current_app

from .core import assumption_validator, experiment_service, inference, similarity, tree as tree_service
from .core import geometry, varifold, velocity
from .core.mapper import cell_mapper, curve_mapper, inferred_tree_mapper, table_mapper, tree_mapper
from .model.kernel import KernelParams
from .model.tree import EmbeddingConfig
from .model.velocity import SimulationConfig
from .static.enums.cell_placement import CellPlacement
from .static.enums.isomorphism_mode import IsomorphismMode
from .static.varitree_exception import VaritreeError
from .util.logging import get_logger

VARITREE_CLI_BLP = Blueprint("varitree_cli", __name__, cli_group=None)
VARITREE_CLI = VARITREE_CLI_BLP.cli  # expose as attribute for autodoc generation
CLI_LOGGER = "cli"

POSITIVE = click.FloatRange(min=0, min_open=True)
NON_NEGATIVE = click.FloatRange(min=0)


def _config_default(value, key: str):
    return current_app.config[key] if value is None else value


def _parse_sigmas(ctx, param, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        sigmas = [float(part) for part in value.split(",") if part.strip()]
        similarity.check_ladder(sigmas)
    except (ValueError, VaritreeError) as err:
        message = err.message if isinstance(err, VaritreeError) else f"'{value}' is not a comma separated list."
        raise click.BadParameter(message, ctx=ctx, param=param) from err
    return sigmas


def kernel_options(command):
    """--sigma-x and --sigma-t, resolved to a KernelParams passed as ``kernel``."""

    @click.option("--sigma-x", type=POSITIVE, default=None, help="Position bandwidth (default from config).")
    @click.option("--sigma-t", type=POSITIVE, default=None, help="Tangent bandwidth (default from config).")
    @wraps(command)
    def wrapper(*args, sigma_x, sigma_t, **kwargs):
        kernel = KernelParams(
            _config_default(sigma_x, "DEFAULT_SIGMA_X"), _config_default(sigma_t, "DEFAULT_SIGMA_T")
        )
        return command(*args, kernel=kernel, **kwargs)

    return wrapper


def threads_option(command):
    return click.option(
        "--threads", type=click.IntRange(min=1), default=None, help="Worker threads; 1 is the reference mode."
    )(command)


def output_option(command):
    return click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)(command)


def embedding_options(command):
    for decorator in reversed(
        [
            click.option("--min-edge-length", type=POSITIVE, default=0.8, show_default=True),
            click.option("--max-edge-length", type=POSITIVE, default=1.2, show_default=True),
            click.option("--min-angle", type=click.FloatRange(0, 90, max_open=True), default=30.0, show_default=True),
            click.option("--clearance", type=NON_NEGATIVE, default=None, help="Default: 1% of the mean edge length."),
            click.option("--step", type=POSITIVE, default=None, help="Edge sampling step (default from config)."),
            click.option("--max-children", type=click.IntRange(min=1), default=3, show_default=True),
        ]
    ):
        command = decorator(command)
    return command


def _embedding_config(min_edge_length, max_edge_length, min_angle, clearance, step) -> EmbeddingConfig:
    if min_edge_length > max_edge_length:
        raise click.BadParameter("--min-edge-length must not exceed --max-edge-length.")
    return EmbeddingConfig(
        min_edge_length=min_edge_length,
        max_edge_length=max_edge_length,
        min_angle_deg=min_angle,
        sampling_step=_config_default(step, "DEFAULT_SAMPLING_STEP"),
        clearance=clearance,
    )


def _format_margin(value: float) -> str:
    return "n/a" if value == -np.inf else f"{value:.3e}"


def _report_line(name: str, report) -> str:
    verdict = "pass" if report.passed else "FAIL"
    margin = _format_margin(report.worst_margin)
    return f"{name}: {verdict} ({report.violations} of {report.checked} pairs, worst margin {margin})"


@VARITREE_CLI.command("generate")
@click.option("--nodes", type=click.IntRange(min=1), required=True, help="Number of tree nodes.")
@click.option("--dim", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--samples", type=click.IntRange(min=2), default=None, help="Validator stations per edge.")
@embedding_options
@output_option
def generate(
    nodes, dim, seed, samples, min_edge_length, max_edge_length, min_angle, clearance, step, max_children, output
):
    """Generate a random tree, embed it and write its JSON; prints the assumption checks."""
    config = _embedding_config(min_edge_length, max_edge_length, min_angle, clearance, step)
    tree = tree_service.random_tree(nodes, max_children, seed)
    emb = tree_service.embed(tree, dim, config, seed)
    gap = tree_service.validate_clearance(emb, config.resolved_clearance())
    tree_mapper.write_tree(emb, output)

    samples = _config_default(samples, "DEFAULT_VALIDATOR_SAMPLES")
    chords = assumption_validator.validate_A1(emb, samples)
    tangents = assumption_validator.validate_A2(emb, samples)
    branching = assumption_validator.validate_A3(emb, samples=samples)
    click.echo(f"nodes: {nodes}, dim: {dim}, min clearance: {gap:.4g}")
    click.echo(_report_line("A1 chords", chords))
    click.echo(_report_line("A2 sibling tangents", tangents))
    failing = list(branching.failing_nodes)
    click.echo(f"A3 branching: {'pass' if branching.passed else 'FAIL'} (failing nodes {failing})")


@VARITREE_CLI.command("distances")
@click.argument("tree_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@kernel_options
@threads_option
@click.option("--step", type=POSITIVE, default=None, help="Re-subdivide the edges to this step first.")
@output_option
def distances(tree_file, kernel, threads, step, output):
    """Write the Delta matrix of every node pair of a tree JSON as CSV."""
    emb = tree_mapper.read_tree(tree_file)
    if step is not None:
        emb = tree_service.refine(emb, step)
    threads = _config_default(threads, "DEFAULT_THREADS")
    get_logger(current_app, CLI_LOGGER).info(f"Delta with sigma_x={kernel.sigma_x}, sigma_t={kernel.sigma_t}")
    table_mapper.write_matrix(similarity.delta_matrix(emb, kernel, threads), output)


@VARITREE_CLI.command("gram")
@click.argument("curve_files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@kernel_options
@threads_option
@output_option
def gram(curve_files, kernel, threads, output):
    """Write the varifold Gram matrix of curve JSON files as CSV, headed by the file stems."""
    varifolds = [geometry.to_varifold(curve_mapper.read_curve(path)) for path in curve_files]
    values = varifold.gram(varifolds, kernel, _config_default(threads, "DEFAULT_THREADS"))
    table_mapper.write_square(values, [path.stem for path in curve_files], output)


@VARITREE_CLI.command("infer")
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--root", type=str, default=None, help="Root id (default: the tree root, or the first CSV id).")
@click.option(
    "--ground-truth", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="Tree JSON."
)
@click.option(
    "--mode",
    type=click.Choice([mode.value for mode in IsomorphismMode], case_sensitive=False),
    default=IsomorphismMode.STRICT.value,
)
@kernel_options
@threads_option
@output_option
def infer(input_file, root, ground_truth, mode, kernel, threads, output):
    """Reconstruct a tree from a Delta CSV (or directly from a tree JSON) and report the metric defects."""
    if input_file.suffix.lower() == ".json":
        emb = tree_mapper.read_tree(input_file)
        m = similarity.delta_matrix(emb, kernel, _config_default(threads, "DEFAULT_THREADS"))
        root = root if root is not None else similarity.node_id(emb.tree.root)
    else:
        m = table_mapper.read_matrix(input_file)
        root = root if root is not None else m.node_ids[0]
    inferred = inference.reconstruct(m, root)
    inferred_tree_mapper.write_inferred_tree(inferred, output)
    click.echo(f"triangle defect: {similarity.triangle_defect(m):.6g}")
    click.echo(f"four-point defect: {similarity.four_point_defect(m):.6g}")
    if ground_truth is not None:
        truth = tree_mapper.read_tree(ground_truth).tree
        click.echo(f"isomorphic: {str(inference.is_isomorphic(inferred, truth, IsomorphismMode(mode))).lower()}")


@VARITREE_CLI.command("convergence")
@click.argument("tree_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--sigmas", callback=_parse_sigmas, default=None, help="Strictly decreasing, comma separated ladder.")
@click.option("--sigma-0", type=POSITIVE, default=None, help="First rung of the default geometric ladder.")
@click.option("--rungs", type=click.IntRange(min=1), default=None, help="Rungs of the default geometric ladder.")
@click.option("--ratio", type=POSITIVE, default=None, help="sigma_t / sigma_x.")
@threads_option
@output_option
def convergence(tree_file, sigmas, sigma_0, rungs, ratio, threads, output):
    """Run the diagnostics over a sigma ladder and write the sweep table CSV."""
    if sigmas is None:
        sigmas = similarity.sigma_ladder(
            _config_default(sigma_0, "DEFAULT_SIGMA_0"), _config_default(rungs, "DEFAULT_LADDER_RUNGS")
        )
    emb = tree_mapper.read_tree(tree_file)
    rows = similarity.convergence_sweep(
        emb, sigmas, _config_default(ratio, "DEFAULT_SIGMA_RATIO"), _config_default(threads, "DEFAULT_THREADS")
    )
    table_mapper.write_sweep(rows, output)


@VARITREE_CLI.command("velocity-demo")
@click.argument("tree_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--per-edge", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--noise-pos", type=NON_NEGATIVE, default=0.0, show_default=True)
@click.option("--noise-vel", type=NON_NEGATIVE, default=0.0, show_default=True)
@click.option("--speed", type=POSITIVE, default=1.0, show_default=True)
@click.option("--step", type=POSITIVE, default=None, help="Integration step (default from config).")
@click.option("--max-steps", type=click.IntRange(min=1), default=None)
@click.option("--bandwidth", type=POSITIVE, default=None, help="Interpolation scale (default: the step).")
@click.option("--capture-radius", type=POSITIVE, default=None, help="Root capture radius (default: 2 * step).")
@click.option(
    "--placement",
    type=click.Choice([item.value for item in CellPlacement], case_sensitive=False),
    default=CellPlacement.NODES.value,
)
@click.option("--max-failure-fraction", type=click.FloatRange(0, 1), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@kernel_options
@threads_option
@click.option(
    "-o", "--output", type=click.Path(file_okay=False, path_type=Path), required=True, help="Output directory."
)
def velocity_demo(
    tree_file,
    per_edge,
    noise_pos,
    noise_vel,
    speed,
    step,
    max_steps,
    bandwidth,
    capture_radius,
    placement,
    max_failure_fraction,
    seed,
    kernel,
    threads,
    output,
):
    """Sample cells on a tree JSON, trace them back to the root and reconstruct a tree over them.

    Writes cells.json, matrix.csv and inferred_tree.json into the output directory.
    """
    emb = tree_mapper.read_tree(tree_file)
    config = SimulationConfig(
        per_edge=per_edge,
        noise_pos=noise_pos,
        noise_vel=noise_vel,
        speed=speed,
        step=_config_default(step, "DEFAULT_INTEGRATION_STEP"),
        max_steps=_config_default(max_steps, "DEFAULT_MAX_STEPS"),
        bandwidth=bandwidth,
        capture_radius=capture_radius,
        placement=CellPlacement(placement),
        seed=seed,
    )
    cells = velocity.sample_cells(emb, per_edge, noise_pos, noise_vel, seed, speed, config.placement)
    m, inferred = velocity.velocity_pipeline(
        emb,
        config,
        kernel,
        _config_default(threads, "DEFAULT_THREADS"),
        _config_default(max_failure_fraction, "DEFAULT_MAX_FAILURE_FRACTION"),
        cells,
    )
    output.mkdir(parents=True, exist_ok=True)
    cell_mapper.write_cells(cells, output / "cells.json")
    table_mapper.write_matrix(m, output / "matrix.csv")
    inferred_tree_mapper.write_inferred_tree(inferred, output / "inferred_tree.json")
    click.echo(f"cells traced: {m.size - 1}")
    click.echo(f"four-point defect: {similarity.four_point_defect(m):.6g}")
    if config.placement == CellPlacement.NODES and m.size == emb.tree.node_count:
        click.echo(f"isomorphic: {str(inference.is_isomorphic(inferred, emb.tree)).lower()}")


@VARITREE_CLI.command("recovery")
@click.option("--trees", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--nodes", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--dim", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--sigmas", callback=_parse_sigmas, default="0.8,0.2,0.05", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ratio", type=POSITIVE, default=None, help="sigma_t / sigma_x.")
@embedding_options
@threads_option
@output_option
def recovery(
    trees,
    nodes,
    dim,
    sigmas,
    seed,
    ratio,
    min_edge_length,
    max_edge_length,
    min_angle,
    clearance,
    step,
    max_children,
    threads,
    output,
):
    """Reconstruct random trees at every sigma and write the experiment table CSV."""
    config = _embedding_config(min_edge_length, max_edge_length, min_angle, clearance, step)
    rows = experiment_service.recovery_experiment(
        trees,
        nodes,
        dim,
        sigmas,
        seed,
        config,
        max_children,
        _config_default(ratio, "DEFAULT_SIGMA_RATIO"),
        _config_default(threads, "DEFAULT_THREADS"),
    )
    table_mapper.write_experiment(rows, output)
    for sigma, rate in experiment_service.success_rates(rows).items():
        click.echo(f"sigma {sigma:g}: success rate {rate:.3f}")


def register_cli_blueprint(app: Flask):
    """Method to register the varitree CLI blueprint."""
    app.register_blueprint(VARITREE_CLI_BLP)
    app.logger.info("Registered varitree cli blueprint.")
