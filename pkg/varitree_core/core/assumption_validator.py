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
import itertools
import math
from typing import Optional, Tuple

import numpy as np

from varitree_core.core import geometry
from varitree_core.model.tree import AssumptionReport, BranchingCheck, BranchingReport, EmbeddedTree
from varitree_core.static.varitree_exception import VaritreeError

"""Grid checks of the three geometric regularity conditions an embedding must satisfy.

Each condition quantifies over a continuum of points; the validators evaluate it on evenly spaced
arc-length stations and report how often, and by how much, the sampled implication fails.
"""

DEFAULT_SAMPLES = 50
DEFAULT_TOLERANCE = 1e-9
PAIR_BLOCK = 512


def _grid(length: float, samples: int) -> np.ndarray:
    """``samples`` evenly spaced stations in (0, length]."""
    return length * np.arange(1, samples + 1) / samples


def _monotone_violations(keys: np.ndarray, values: np.ndarray, tolerance: float) -> Tuple[int, float, int]:
    """Check keys[p] <= keys[q] => values[p] <= values[q] over all ordered pairs p != q.

    Returns (violations, worst margin, checked pairs).
    """
    violations = 0
    checked = 0
    worst = -math.inf
    count = keys.shape[0]
    indices = np.arange(count)
    for start in range(0, count, PAIR_BLOCK):
        rows = slice(start, start + PAIR_BLOCK)
        premise = keys[rows, None] <= keys[None, :]
        premise &= indices[rows, None] != indices[None, :]
        if not premise.any():
            continue
        margin = values[rows, None] - values[None, :]
        checked += int(premise.sum())
        violations += int((premise & (margin > tolerance)).sum())
        worst = max(worst, float(margin[premise].max()))
    return violations, worst, checked


def validate_A1(
    emb: EmbeddedTree, samples: int = DEFAULT_SAMPLES, tolerance: float = DEFAULT_TOLERANCE
) -> AssumptionReport:
    """Chords between consecutive edges of a path must grow as both points move away from the joint.

    For edges (i, j) and (j, k) the points x and y sit at the same arc distance s before and after x_j;
    the chord |x - y| must be non-decreasing in s.
    """
    if samples < 2:
        raise VaritreeError(f"At least 2 samples per edge are needed, got {samples}.")
    tree = emb.tree
    violations, checked, worst = 0, 0, -math.inf
    for parent, node in tree.edges:
        incoming = emb.edge_curves[(parent, node)]
        incoming_length = geometry.arc_length(incoming)
        for child in tree.children(node):
            outgoing = emb.edge_curves[(node, child)]
            s = _grid(min(incoming_length, geometry.arc_length(outgoing)), samples)
            before = geometry.sample_points(incoming, incoming_length - s)
            after = geometry.sample_points(outgoing, s)
            chords = np.linalg.norm(before - after, axis=1)
            found, margin, pairs = _monotone_violations(s, chords, tolerance)
            violations += found
            checked += pairs
            worst = max(worst, margin)
    return AssumptionReport(violations=violations, worst_margin=worst, checked=checked)


def validate_A2(
    emb: EmbeddedTree, samples: int = DEFAULT_SAMPLES, tolerance: float = DEFAULT_TOLERANCE
) -> AssumptionReport:
    """Tangent gaps between sibling edges must not shrink as the summed arc length grows.

    Every pair of sampled stations (s, u) on two sibling edges is compared with every other pair.
    """
    if samples < 2:
        raise VaritreeError(f"At least 2 samples per edge are needed, got {samples}.")
    tree = emb.tree
    violations, checked, worst = 0, 0, -math.inf
    for node in tree.branching_nodes():
        for first, second in itertools.combinations(tree.children(node), 2):
            curve_a = emb.edge_curves[(node, first)]
            curve_b = emb.edge_curves[(node, second)]
            s = _grid(geometry.arc_length(curve_a), samples)
            u = _grid(geometry.arc_length(curve_b), samples)
            tangents_a = geometry.sample_tangents(curve_a, s)
            tangents_b = geometry.sample_tangents(curve_b, u)
            summed = (s[:, None] + u[None, :]).ravel()
            gaps = np.linalg.norm(tangents_a[:, None, :] - tangents_b[None, :, :], axis=2).ravel()
            found, margin, pairs = _monotone_violations(summed, gaps, tolerance)
            violations += found
            checked += pairs
            worst = max(worst, margin)
    return AssumptionReport(violations=violations, worst_margin=worst, checked=checked)


def validate_A3(
    emb: EmbeddedTree,
    a_exponent: float = 1.0,
    neighborhood: Optional[float] = None,
    samples: int = DEFAULT_SAMPLES,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BranchingReport:
    """Near a branching node x_i, every sibling edge must leave the other siblings' initial direction fast.

    Checks |t(x) - t_k(x_i)| >= l([x_i, x])^a for x on edge (i, j) within the neighborhood and every other
    sibling k. ``neighborhood`` defaults to 20% of the shortest edge incident to x_i and is clipped to the
    edge length.
    """
    if not 0 < a_exponent < 2:
        raise VaritreeError(f"The exponent a must lie in (0, 2), got {a_exponent}.")
    if neighborhood is not None and not neighborhood > 0:
        raise VaritreeError(f"The neighborhood radius must be positive, got {neighborhood}.")
    tree = emb.tree
    checks = []
    for node in tree.branching_nodes():
        incident = [(node, child) for child in tree.children(node)]
        if emb.incoming_edge(node) is not None:
            incident.append(emb.incoming_edge(node))
        radius = neighborhood
        if radius is None:
            radius = 0.2 * min(geometry.arc_length(emb.edge_curves[edge]) for edge in incident)
        worst = -math.inf
        for branch, other in itertools.permutations(tree.children(node), 2):
            curve = emb.edge_curves[(node, branch)]
            reference = geometry.tangent_at(emb.edge_curves[(node, other)], 0.0)
            s = _grid(min(radius, geometry.arc_length(curve)), samples)
            gaps = np.linalg.norm(geometry.sample_tangents(curve, s) - reference[None, :], axis=1)
            worst = max(worst, float((s**a_exponent - gaps).max()))
        checks.append(BranchingCheck(node=node, passed=worst <= tolerance, worst_margin=worst))
    return BranchingReport(checks=tuple(checks))
