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
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..static.varitree_exception import VaritreeError

WeightedEdge = Tuple[str, str, float]


@dataclass(frozen=True)
class InferredTree:
    """Weighted tree T' reconstructed from a similarity matrix, edges oriented away from ``root``."""

    node_ids: Tuple[str, ...]
    edges: Tuple[WeightedEdge, ...]
    root: str

    def __post_init__(self):
        node_ids = tuple(str(node_id) for node_id in self.node_ids)
        edges = tuple((str(a), str(b), float(w)) for a, b, w in self.edges)
        root = str(self.root)
        if len(set(node_ids)) != len(node_ids):
            raise VaritreeError("Node ids of an inferred tree must be unique.")
        if root not in node_ids:
            raise VaritreeError(f"Root '{root}' is not one of the node ids.")
        if len(edges) != len(node_ids) - 1:
            raise VaritreeError(f"A tree on {len(node_ids)} nodes needs {len(node_ids) - 1} edges, got {len(edges)}.")
        known = set(node_ids)
        for a, b, weight in edges:
            if a not in known or b not in known:
                raise VaritreeError(f"Edge ({a}, {b}) refers to an unknown node id.")
            if not weight > 0:
                raise VaritreeError(f"Edge ({a}, {b}) has a non-positive weight {weight}.")
        object.__setattr__(self, "node_ids", node_ids)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "root", root)
        # n - 1 edges plus connectivity implies acyclic
        if len(self._reachable()) != len(node_ids):
            raise VaritreeError("Inferred edges do not connect all nodes.")

    def _reachable(self) -> List[str]:
        adjacency = self.adjacency()
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            node = queue.popleft()
            for neighbour in adjacency[node]:
                if neighbour not in seen:
                    seen.add(neighbour)
                    queue.append(neighbour)
        return list(seen)

    def adjacency(self) -> Dict[str, List[str]]:
        adjacency: Dict[str, List[str]] = {node_id: [] for node_id in self.node_ids}
        for a, b, _ in self.edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        return adjacency

    def children(self) -> Dict[str, List[str]]:
        children: Dict[str, List[str]] = {node_id: [] for node_id in self.node_ids}
        for parent, child, _ in self.edges:
            children[parent].append(child)
        return children

    def edge_set(self):
        return {frozenset((a, b)) for a, b, _ in self.edges}


@dataclass(frozen=True)
class RecoveryRow:
    trial: int
    sigma: float
    success: bool
    four_point_defect: float
