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
import math
from typing import Dict, List, Optional

import numpy as np

from varitree_core.core import geometry
from varitree_core.model.curve import DiscreteVarifold, PolygonalCurve
from varitree_core.model.tree import Edge, EdgeWeights, EmbeddedTree, EmbeddingConfig, RootedTree
from varitree_core.static.varitree_exception import VaritreeError
from varitree_core.util import logging

"""Random rooted trees, their straight-edge embeddings and root-to-node path curves"""


def random_tree(node_count: int, max_children: int, seed: int) -> RootedTree:
    """Attach every new node to a uniformly chosen existing node that still has room for a child."""
    if node_count < 1:
        raise VaritreeError(f"A tree needs at least one node, got {node_count}.")
    if max_children < 1:
        raise VaritreeError(f"max_children must be at least 1, got {max_children}.")
    rng = np.random.default_rng(seed)
    parent: List[Optional[int]] = [None]
    child_count = [0]
    for _ in range(1, node_count):
        candidates = [node for node, count in enumerate(child_count) if count < max_children]
        chosen = int(candidates[rng.integers(len(candidates))])
        parent.append(chosen)
        child_count[chosen] += 1
        child_count.append(0)
    return RootedTree(tuple(parent))


def _random_direction(rng: np.random.Generator, dim: int) -> np.ndarray:
    while True:
        direction = rng.normal(size=dim)
        norm = np.linalg.norm(direction)
        if norm > 1e-12:
            return direction / norm


def _direction_allowed(
    direction: np.ndarray, incoming: Optional[np.ndarray], siblings: List[np.ndarray], min_angle: float
) -> bool:
    limit = math.cos(min_angle)
    # neither continue straight on nor fold back onto the incoming edge
    if incoming is not None and abs(float(direction @ incoming)) > limit:
        return False
    return all(float(direction @ sibling) <= limit for sibling in siblings)


def _placement_clear(
    node: int,
    target: np.ndarray,
    curve: PolygonalCurve,
    positions: Dict[int, np.ndarray],
    curves: Dict[Edge, PolygonalCurve],
    clearance: float,
) -> bool:
    for other in positions.values():
        distance = float(np.linalg.norm(target - other))
        if distance <= 0 or distance < clearance:
            return False
    for (i, j), other in curves.items():
        if node in (i, j):
            continue
        if geometry.polyline_clearance(curve, other) < clearance:
            return False
    return True


def embed(tree: RootedTree, dim: int, config: EmbeddingConfig = EmbeddingConfig(), seed: int = 0) -> EmbeddedTree:
    """Place the tree in R^dim with straight, subdivided edges.

    Edges leave a node at least ``config.min_angle_deg`` away from every sibling and from the incoming
    direction (both ways); non-adjacent edges keep ``config.resolved_clearance()`` apart. Directions and
    lengths are rejection sampled in breadth-first order from a generator seeded with ``seed``.
    """
    if dim < 2:
        raise VaritreeError(f"Embedding dimension must be at least 2, got {dim}.")
    rng = np.random.default_rng(seed)
    clearance = config.resolved_clearance()
    positions: Dict[int, np.ndarray] = {tree.root: np.zeros(dim)}
    incoming: Dict[int, np.ndarray] = {}
    curves: Dict[Edge, PolygonalCurve] = {}

    for node in tree.bfs_order:
        placed: List[np.ndarray] = []
        for child in tree.children(node):
            for _ in range(config.max_retries):
                direction = _random_direction(rng, dim)
                length = float(rng.uniform(config.min_edge_length, config.max_edge_length))
                if not _direction_allowed(direction, incoming.get(node), placed, config.min_angle):
                    continue
                target = positions[node] + length * direction
                segment = PolygonalCurve(np.stack([positions[node], target]))
                curve = geometry.resample(segment, config.sampling_step)
                if _placement_clear(node, target, curve, positions, curves, clearance):
                    break
            else:
                raise VaritreeError(
                    f"Could not place edge ({node}, {child}) with clearance {clearance:g} after "
                    f"{config.max_retries} attempts; the configuration is too dense."
                )
            positions[child] = target
            incoming[child] = direction
            curves[(node, child)] = curve
            placed.append(direction)

    logging.info(f"Embedded tree with {tree.node_count} nodes in dimension {dim} (seed {seed}).")
    return EmbeddedTree(tree, np.stack([positions[node] for node in range(tree.node_count)]), curves)


def refine(emb: EmbeddedTree, step: float) -> EmbeddedTree:
    """Subdivide every edge curve so that no segment is longer than ``step``."""
    curves = {edge: geometry.resample(curve, step) for edge, curve in emb.edge_curves.items()}
    return EmbeddedTree(emb.tree, emb.positions, curves)


def path_curves(emb: EmbeddedTree) -> Dict[int, PolygonalCurve]:
    """Root-to-node curves of every non-root node, each built from its parent's curve."""
    curves: Dict[int, PolygonalCurve] = {}
    for parent, child in emb.tree.edges:
        edge = emb.edge_curves[(parent, child)]
        curves[child] = edge if parent == emb.tree.root else geometry.concat(curves[parent], edge)
    return curves


def path_curve(emb: EmbeddedTree, node: int) -> PolygonalCurve:
    """Concatenated edge curves from the root to ``node``, oriented root -> node."""
    if not 0 <= node < emb.tree.node_count:
        raise VaritreeError(f"Unknown node {node}.")
    if node == emb.tree.root:
        raise VaritreeError("The root has no path curve; its path varifold is empty.")
    path = emb.tree.path_from_root(node)
    curve = emb.edge_curves[(path[0], path[1])]
    for parent, child in zip(path[1:-1], path[2:]):
        curve = geometry.concat(curve, emb.edge_curves[(parent, child)])
    return curve


def path_varifolds(emb: EmbeddedTree) -> Dict[int, DiscreteVarifold]:
    """Path varifold of every node (empty for the root); shared prefixes are converted once."""
    varifolds = {emb.tree.root: DiscreteVarifold.empty(emb.dim)}
    for parent, child in emb.tree.edges:
        edge = geometry.to_varifold(emb.edge_curves[(parent, child)])
        varifolds[child] = varifolds[parent].union(edge)
    return varifolds


def min_clearance(emb: EmbeddedTree) -> float:
    """Smallest distance between two edges that share no node; inf when there is no such pair."""
    edges = list(emb.edge_curves.items())
    smallest = math.inf
    for index, ((a, b), first) in enumerate(edges):
        for (c, d), second in edges[index + 1 :]:
            if {a, b} & {c, d}:
                continue
            smallest = min(smallest, geometry.polyline_clearance(first, second))
    return smallest


def shortest_path_matrix(tree: RootedTree, weights: EdgeWeights) -> np.ndarray:
    """Exact tree metric: sum of edge weights along the unique path between every node pair."""
    from_root = np.zeros(tree.node_count)
    for parent, child in tree.edges:
        from_root[child] = from_root[parent] + weights[(parent, child)]
    matrix = np.zeros((tree.node_count, tree.node_count))
    for i in range(tree.node_count):
        for j in range(i + 1, tree.node_count):
            ancestor = tree.lowest_common_ancestor(i, j)
            matrix[i, j] = matrix[j, i] = from_root[i] + from_root[j] - 2 * from_root[ancestor]
    return matrix


def validate_clearance(emb: EmbeddedTree, clearance: float) -> float:
    """Raise when two edges without a shared node come closer than ``clearance``; returns the smallest gap."""
    smallest = min_clearance(emb)
    if smallest < clearance:
        raise VaritreeError(f"Non-adjacent edges are {smallest:g} apart, below the required clearance {clearance:g}.")
    return smallest
