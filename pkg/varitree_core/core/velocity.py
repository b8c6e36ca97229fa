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
from typing import List, Optional, Sequence, Tuple

import numpy as np

from varitree_core.core import geometry, inference
from varitree_core.core.similarity import delta_matrix_from_varifolds, node_id
from varitree_core.model.curve import DiscreteVarifold, PolygonalCurve
from varitree_core.model.inference import InferredTree
from varitree_core.model.kernel import KernelParams
from varitree_core.model.similarity import SimilarityMatrix
from varitree_core.model.tree import EmbeddedTree
from varitree_core.model.velocity import CellSample, SimulationConfig, TraceResult, VectorFieldModel
from varitree_core.static.enums.cell_placement import CellPlacement
from varitree_core.static.enums.termination_cause import TerminationCause
from varitree_core.static.varitree_exception import VaritreeError
from varitree_core.util import logging
from varitree_core.util.parallel import map_work_units

"""Synthetic velocity data on an embedded tree and backward integration of the interpolated field"""

EDGE_ROOT_ID = "root"


def _edge_cell_id(parent: int, child: int, index: int) -> str:
    return f"{parent}-{child}:{index}"


def sample_cells(
    emb: EmbeddedTree,
    per_edge: int,
    noise_pos: float,
    noise_vel: float,
    seed: int,
    speed: float = 1.0,
    placement: CellPlacement = CellPlacement.EDGES,
) -> List[CellSample]:
    """Cells at the stations (k - 1/2) * length / per_edge of every edge, moving along the edge at ``speed``.

    With ``CellPlacement.NODES`` every non-root node also carries a cell (id = node id) whose velocity is the
    end tangent of its incoming edge. Gaussian noise of scale ``noise_pos`` / ``noise_vel`` is added to
    positions and velocities, drawn in edge order from one generator seeded with ``seed``.
    """
    if per_edge < 1:
        raise VaritreeError(f"At least one cell per edge is needed, got {per_edge}.")
    if noise_pos < 0 or noise_vel < 0:
        raise VaritreeError("Noise levels must be non-negative.")
    rng = np.random.default_rng(seed)
    cells: List[CellSample] = []
    for parent, child in emb.tree.edges:
        curve = emb.edge_curves[(parent, child)]
        s = geometry.arc_length(curve) * (np.arange(1, per_edge + 1) - 0.5) / per_edge
        positions = geometry.sample_points(curve, s) + noise_pos * rng.normal(size=(per_edge, emb.dim))
        velocities = speed * geometry.sample_tangents(curve, s) + noise_vel * rng.normal(size=(per_edge, emb.dim))
        cells.extend(
            CellSample(position, velocity, _edge_cell_id(parent, child, index))
            for index, (position, velocity) in enumerate(zip(positions, velocities))
        )
    if CellPlacement(placement) == CellPlacement.NODES:
        for parent, child in emb.tree.edges:
            points = emb.edge_curves[(parent, child)].points
            tangent = (points[-1] - points[-2]) / np.linalg.norm(points[-1] - points[-2])
            position = emb.positions[child] + noise_pos * rng.normal(size=emb.dim)
            velocity = speed * tangent + noise_vel * rng.normal(size=emb.dim)
            cells.append(CellSample(position, velocity, node_id(child)))
    return cells


def field_at(model: VectorFieldModel, x: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Gaussian-weighted average of the cell velocities at ``x``.

    Returns the field value and an underflow flag; the value is the zero vector when every weight underflows.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,) or not np.isfinite(x).all():
        raise VaritreeError(f"Field query needs a finite vector of dimension {model.dim}.")
    squared = ((model.positions - x[None, :]) ** 2).sum(axis=1)
    weights = np.exp(-squared / model.bandwidth**2)
    total = float(weights.sum())
    if total == 0.0:
        return np.zeros(model.dim), True
    return weights @ model.velocities / total, False


def _backward_direction(model: VectorFieldModel, x: np.ndarray) -> Optional[np.ndarray]:
    value, underflow = field_at(model, x)
    norm = float(np.linalg.norm(value))
    if underflow or norm == 0.0:
        return None
    return -value / norm


def _rk4_step(model: VectorFieldModel, x: np.ndarray, step: float) -> Optional[np.ndarray]:
    """One classical fourth-order step along the unit backward direction; None where the field vanishes."""
    k1 = _backward_direction(model, x)
    if k1 is None:
        return None
    k2 = _backward_direction(model, x + 0.5 * step * k1)
    if k2 is None:
        return None
    k3 = _backward_direction(model, x + 0.5 * step * k2)
    if k3 is None:
        return None
    k4 = _backward_direction(model, x + step * k3)
    if k4 is None:
        return None
    return x + step * (k1 + 2 * k2 + 2 * k3 + k4) / 6


def _trace(
    model: VectorFieldModel,
    start: np.ndarray,
    root: np.ndarray,
    step: float,
    max_steps: int,
    capture_radius: float,
) -> Tuple[Optional[PolygonalCurve], TerminationCause, int]:
    if not step > 0:
        raise VaritreeError(f"Integration step must be positive, got {step}.")
    if max_steps < 1:
        raise VaritreeError(f"The step limit must be positive, got {max_steps}.")
    start = np.asarray(start, dtype=float)
    root = np.asarray(root, dtype=float)
    if float(np.linalg.norm(start - root)) <= capture_radius:
        if np.array_equal(start, root):
            return None, TerminationCause.IMMEDIATE_CAPTURE, 0
        return PolygonalCurve(np.stack([root, start])), TerminationCause.IMMEDIATE_CAPTURE, 0

    points = [start]
    x = start
    for steps in range(1, max_steps + 1):
        moved = _rk4_step(model, x, step)
        if moved is None or np.array_equal(moved, x):
            return None, TerminationCause.STALLED, steps
        x = moved
        points.append(x)
        if float(np.linalg.norm(x - root)) <= capture_radius:
            # integrated cell -> root; stored root -> cell
            return PolygonalCurve(np.stack(points[::-1])), TerminationCause.CAPTURED, steps
    return None, TerminationCause.MAX_STEPS, max_steps


def integrate_to_root(
    model: VectorFieldModel,
    start: np.ndarray,
    root: np.ndarray,
    step: float,
    max_steps: int,
    capture_radius: Optional[float] = None,
) -> PolygonalCurve:
    """Follow the field backwards from ``start`` with arc-length step ``step`` until the root capture ball.

    The capture radius defaults to ``2 * step``. The returned curve runs root -> cell and starts at the
    first point inside the capture ball; a start already inside the ball gives the 2-point curve
    [root, start].
    """
    radius = 2 * step if capture_radius is None else capture_radius
    curve, cause, steps = _trace(model, start, root, step, max_steps, radius)
    if curve is None:
        raise VaritreeError(f"Backward integration failed after {steps} steps: {cause}.")
    if cause == TerminationCause.IMMEDIATE_CAPTURE:
        logging.warn("Start point lies inside the root capture ball; returning a degenerate curve.")
    return curve


def trace_cells(
    model: VectorFieldModel,
    cells: Sequence[CellSample],
    root: np.ndarray,
    config: SimulationConfig,
    threads: int = 1,
) -> List[TraceResult]:
    """Integrate every cell independently; failures are reported in the results, never raised."""

    def trace(cell: CellSample) -> TraceResult:
        curve, cause, steps = _trace(
            model, cell.position, root, config.step, config.max_steps, config.resolved_capture_radius
        )
        logging.debug(f"Cell '{cell.cell_id}': {cause} after {steps} steps.")
        return TraceResult(cell_id=cell.cell_id, cause=cause, steps=steps, curve=curve)

    return map_work_units(trace, cells, threads)


def velocity_pipeline(
    emb: EmbeddedTree,
    config: SimulationConfig,
    kernel: KernelParams,
    threads: int = 1,
    max_failure_fraction: float = 0.0,
    cells: Optional[Sequence[CellSample]] = None,
) -> Tuple[SimilarityMatrix, InferredTree]:
    """Sample cells, recover their root -> cell curves from the field and reconstruct a tree over them.

    ``cells`` replaces the sampling step when the caller already holds the cells drawn from ``config``.

    With ``CellPlacement.NODES`` only the node cells are traced, so matrix ids equal the tree's node ids;
    otherwise every cell is traced and the root is represented by the id ``"root"``. Failed traces are
    dropped while their share stays within ``max_failure_fraction``.
    """
    if not 0 <= max_failure_fraction <= 1:
        raise VaritreeError(f"The failure fraction must lie in [0, 1], got {max_failure_fraction}.")
    if cells is None:
        cells = sample_cells(
            emb, config.per_edge, config.noise_pos, config.noise_vel, config.seed, config.speed, config.placement
        )
    if not cells:
        raise VaritreeError("The embedding produced no cells; a tree with at least one edge is needed.")
    model = VectorFieldModel(tuple(cells), config.resolved_bandwidth)
    nodes_mode = config.placement == CellPlacement.NODES
    node_ids = {node_id(node) for node in range(emb.tree.node_count)}
    traced = [cell for cell in cells if cell.cell_id in node_ids] if nodes_mode else cells

    results = trace_cells(model, traced, emb.positions[emb.tree.root], config, threads)
    logging.info(f"Traced {len(results)} cells: " + logging.tally(str(result.cause) for result in results))
    failed = [result for result in results if result.curve is None]
    if failed:
        fraction = len(failed) / len(results)
        first = failed[0]
        summary = f"{len(failed)} of {len(results)} cells failed; first failing cell '{first.cell_id}' ({first.cause})"
        if fraction > max_failure_fraction:
            raise VaritreeError(summary + ".")
        logging.warn(summary + "; dropping the failed cells.")

    root_id = node_id(emb.tree.root) if nodes_mode else EDGE_ROOT_ID
    ids = [root_id]
    varifolds: List[DiscreteVarifold] = [DiscreteVarifold.empty(emb.dim)]
    for result in results:
        if result.curve is not None:
            ids.append(result.cell_id)
            varifolds.append(geometry.to_varifold(result.curve))
    edges = None
    if nodes_mode:
        kept = set(ids)
        edges = [(node_id(a), node_id(b)) for a, b in emb.tree.edges if {node_id(a), node_id(b)} <= kept] or None
    matrix = delta_matrix_from_varifolds(ids, varifolds, kernel, threads, edges)
    return matrix, inference.reconstruct(matrix, root_id)
