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

"""Rooted trees, their embeddings into R^n and the reports of the assumption validators."""
import math
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from .curve import PolygonalCurve
from ..static.varitree_exception import VaritreeError
from ..util.utils import read_only

Edge = Tuple[int, int]
ENDPOINT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree given by its parent array; ``parent[root]`` is None.

    Example:
        >>> RootedTree((None, 0, 1)).edges
        ((0, 1), (1, 2))
    """

    parent: Tuple[Optional[int], ...]
    _children: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _depth: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _order: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parent = tuple(None if p is None else int(p) for p in self.parent)
        object.__setattr__(self, "parent", parent)
        count = len(parent)
        if count < 1:
            raise VaritreeError("A tree needs at least one node.")
        roots = [i for i, p in enumerate(parent) if p is None]
        if len(roots) != 1:
            raise VaritreeError(f"A tree needs exactly one root, found {len(roots)}.")
        children: List[List[int]] = [[] for _ in range(count)]
        for node, p in enumerate(parent):
            if p is None:
                continue
            if not 0 <= p < count or p == node:
                raise VaritreeError(f"Node {node} has an invalid parent {p}.")
            children[p].append(node)

        depth = [-1] * count
        order = []
        queue = deque([roots[0]])
        depth[roots[0]] = 0
        while queue:
            node = queue.popleft()
            order.append(node)
            for child in children[node]:
                depth[child] = depth[node] + 1
                queue.append(child)
        if len(order) != count:
            unreachable = next(i for i, d in enumerate(depth) if d < 0)
            raise VaritreeError(f"Node {unreachable} is not reachable from the root (parent links contain a cycle).")

        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))
        object.__setattr__(self, "_depth", tuple(depth))
        object.__setattr__(self, "_order", tuple(order))

    @property
    def node_count(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self._order[0]

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """(parent, child) pairs in breadth-first order of the child."""
        return tuple((self.parent[node], node) for node in self._order[1:])

    @property
    def bfs_order(self) -> Tuple[int, ...]:
        return self._order

    def children(self, node: int) -> Tuple[int, ...]:
        return self._children[node]

    def depth(self, node: int) -> int:
        return self._depth[node]

    def path_from_root(self, node: int) -> List[int]:
        """Nodes from the root down to ``node``, both included."""
        path = [node]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def lowest_common_ancestor(self, i: int, j: int) -> int:
        while self._depth[i] > self._depth[j]:
            i = self.parent[i]
        while self._depth[j] > self._depth[i]:
            j = self.parent[j]
        while i != j:
            i, j = self.parent[i], self.parent[j]
        return i

    def tree_path(self, i: int, j: int) -> List[int]:
        """Unique node sequence from ``i`` to ``j``."""
        ancestor = self.lowest_common_ancestor(i, j)
        up = self.path_from_root(i)[self._depth[ancestor] :]
        down = self.path_from_root(j)[self._depth[ancestor] + 1 :]
        return up[::-1] + down

    def branching_nodes(self) -> List[int]:
        return [node for node in self._order if len(self._children[node]) >= 2]


@dataclass(frozen=True)
class EmbeddingConfig:
    """Parameters of the straight-edge embedding generator.

    ``clearance`` is the minimum distance between non-adjacent edges; None means 1% of the mean edge length.
    """

    min_edge_length: float = 0.8
    max_edge_length: float = 1.2
    min_angle_deg: float = 30.0
    sampling_step: float = 0.05
    clearance: Optional[float] = None
    max_retries: int = 200

    def __post_init__(self):
        if not 0 < self.min_edge_length <= self.max_edge_length:
            raise VaritreeError(
                f"Edge length range must satisfy 0 < min <= max, got [{self.min_edge_length}, {self.max_edge_length}]."
            )
        if not 0 <= self.min_angle_deg < 90:
            raise VaritreeError(f"Minimum branching angle must lie in [0, 90) degrees, got {self.min_angle_deg}.")
        if not self.sampling_step > 0:
            raise VaritreeError(f"Sampling step must be positive, got {self.sampling_step}.")
        if self.clearance is not None and not self.clearance >= 0:
            raise VaritreeError(f"Clearance must be non-negative, got {self.clearance}.")
        if self.max_retries < 1:
            raise VaritreeError(f"At least one placement attempt is needed, got {self.max_retries}.")

    @property
    def min_angle(self) -> float:
        return math.radians(self.min_angle_deg)

    def resolved_clearance(self) -> float:
        if self.clearance is not None:
            return self.clearance
        return 0.01 * (self.min_edge_length + self.max_edge_length) / 2


@dataclass(frozen=True, eq=False)
class EmbeddedTree:
    """Rooted tree plus node positions x_i and one curve per edge, oriented parent -> child."""

    tree: RootedTree
    positions: np.ndarray
    edge_curves: Mapping[Edge, PolygonalCurve]

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[0] != self.tree.node_count:
            raise VaritreeError(
                f"Expected {self.tree.node_count} node positions, got array of shape {positions.shape}."
            )
        if positions.shape[1] < 1 or not np.isfinite(positions).all():
            raise VaritreeError("Node positions must be finite vectors of positive dimension.")
        if positions.shape[0] > 1:
            distances = pdist(positions)
            if not (distances > 0).all():
                raise VaritreeError("Node positions must be pairwise distinct (the node map must be injective).")
        expected = set(self.tree.edges)
        given = set(self.edge_curves)
        if expected != given:
            missing = sorted(expected - given)
            extra = sorted(given - expected)
            raise VaritreeError(f"Edge curves do not match the tree edges (missing {missing}, unexpected {extra}).")
        curves: Dict[Edge, PolygonalCurve] = {}
        for edge in self.tree.edges:
            curve = self.edge_curves[edge]
            i, j = edge
            if curve.dim != positions.shape[1]:
                raise VaritreeError(f"Edge {edge} has dimension {curve.dim}, expected {positions.shape[1]}.")
            if np.linalg.norm(curve.start - positions[i]) > ENDPOINT_TOLERANCE:
                raise VaritreeError(f"Edge {edge} does not start at the position of node {i}.")
            if np.linalg.norm(curve.end - positions[j]) > ENDPOINT_TOLERANCE:
                raise VaritreeError(f"Edge {edge} does not end at the position of node {j}.")
            curves[edge] = curve
        object.__setattr__(self, "positions", read_only(positions))
        object.__setattr__(self, "edge_curves", MappingProxyType(curves))

    @classmethod
    def from_positions(cls, tree: RootedTree, positions: Sequence[Sequence[float]], step: Optional[float] = None):
        """Embed every edge as the straight segment between its node positions, optionally subdivided."""
        from ..core import geometry

        positions = np.array(positions, dtype=float)
        curves = {}
        for i, j in tree.edges:
            curve = PolygonalCurve(np.stack([positions[i], positions[j]]))
            curves[(i, j)] = geometry.resample(curve, step) if step is not None else curve
        return cls(tree, positions, curves)

    @property
    def dim(self) -> int:
        return int(self.positions.shape[1])

    def incoming_edge(self, node: int) -> Optional[Edge]:
        parent = self.tree.parent[node]
        return None if parent is None else (parent, node)


@dataclass(frozen=True)
class EdgeWeights:
    """Positive weights of the tree edges (Delta on edges realizes the weighted tree T')."""

    weights: Mapping[Edge, float]

    def __post_init__(self):
        for edge, weight in self.weights.items():
            if not weight > 0:
                raise VaritreeError(f"Edge {edge} has a non-positive weight {weight}.")
        object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))

    def __getitem__(self, edge: Edge) -> float:
        return self.weights[edge]


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of a sampled implication check.

    ``worst_margin`` is the largest amount by which a sampled implication failed; it is <= tolerance when
    every check passed and -inf when nothing was checked.
    """

    violations: int
    worst_margin: float
    checked: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class BranchingCheck:
    node: int
    passed: bool
    worst_margin: float


@dataclass(frozen=True)
class BranchingReport:
    checks: Tuple[BranchingCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failing_nodes(self) -> List[int]:
        return [check.node for check in self.checks if not check.passed]
