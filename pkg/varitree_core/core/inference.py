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
from typing import Dict, List, Tuple

import numpy as np

from varitree_core.model.inference import InferredTree, WeightedEdge
from varitree_core.model.similarity import SimilarityMatrix
from varitree_core.model.tree import RootedTree
from varitree_core.static.enums.isomorphism_mode import IsomorphismMode
from varitree_core.static.varitree_exception import VaritreeError

"""Tree reconstruction from a similarity matrix and rooted-tree isomorphism checks"""


class UnionFind:
    """Disjoint sets over 0 .. size - 1 with path halving and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, item: int) -> int:
        while self.parent[item] != item:
            self.parent[item] = self.parent[self.parent[item]]
            item = self.parent[item]
        return item

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False when they already were one set."""
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        if self.size[root_a] < self.size[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        self.size[root_a] += self.size[root_b]
        return True


def minimum_spanning_edges(m: SimilarityMatrix) -> List[WeightedEdge]:
    """Kruskal on the complete graph weighted by ``m``.

    Equal weights are ordered lexicographically by the (smaller id, larger id) string pair, so the result does
    not depend on the row order of the matrix.
    """
    if not np.isfinite(m.values).all():
        rows, cols = np.nonzero(~np.isfinite(m.values))
        first = (m.node_ids[rows[0]], m.node_ids[cols[0]])
        raise VaritreeError(f"Similarity matrix has a non-finite entry at {first}.")
    ids = m.node_ids
    candidates: List[Tuple[float, str, str, int, int]] = sorted(
        (float(m.values[i, j]), min(ids[i], ids[j]), max(ids[i], ids[j]), i, j)
        for i in range(m.size)
        for j in range(i + 1, m.size)
    )
    forest = UnionFind(m.size)
    edges: List[WeightedEdge] = []
    for weight, _, _, i, j in candidates:
        if forest.union(i, j):
            edges.append((m.node_ids[i], m.node_ids[j], weight))
            if len(edges) == m.size - 1:
                break
    return edges


def reconstruct(m: SimilarityMatrix, root: str) -> InferredTree:
    """Minimum spanning tree of ``m`` with every edge oriented away from ``root`` (breadth-first order).

    Distinct nodes must have a positive Delta; a zero off-diagonal entry would give a zero-weight edge.
    """
    root = str(root)
    m.index_of(root)
    zero = (m.values == 0) & ~np.eye(m.size, dtype=bool)
    if zero.any():
        rows, cols = np.nonzero(zero)
        first = (m.node_ids[rows[0]], m.node_ids[cols[0]])
        raise VaritreeError(f"Cannot reconstruct: nodes {first} have a zero Delta, so they are indistinguishable.")
    spanning = minimum_spanning_edges(m)
    weights: Dict[frozenset, float] = {}
    adjacency: Dict[str, List[str]] = {node_id: [] for node_id in m.node_ids}
    for a, b, weight in spanning:
        adjacency[a].append(b)
        adjacency[b].append(a)
        weights[frozenset((a, b))] = weight

    oriented: List[WeightedEdge] = []
    seen = {root}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for neighbour in sorted(adjacency[node], key=m.index_of):
            if neighbour not in seen:
                seen.add(neighbour)
                oriented.append((node, neighbour, weights[frozenset((node, neighbour))]))
                queue.append(neighbour)
    return InferredTree(node_ids=m.node_ids, edges=tuple(oriented), root=root)


def tree_edge_ids(tree: RootedTree) -> set:
    return {frozenset((str(parent), str(child))) for parent, child in tree.edges}


def _canonical(children: Dict[str, List[str]], node: str) -> str:
    return "(" + "".join(sorted(_canonical(children, child) for child in children[node])) + ")"


def canonical_form(tree) -> str:
    """Sorted recursive child encoding from the root; equal for rooted trees equal up to child order."""
    if isinstance(tree, RootedTree):
        children = {str(node): [str(child) for child in tree.children(node)] for node in range(tree.node_count)}
        return _canonical(children, str(tree.root))
    return _canonical(tree.children(), tree.root)


def is_isomorphic(a: InferredTree, b: RootedTree, mode: IsomorphismMode = IsomorphismMode.STRICT) -> bool:
    """Compare an inferred tree with a ground-truth tree whose node ids are ``str(index)``."""
    if len(a.node_ids) != b.node_count:
        raise VaritreeError(f"Trees differ in size: {len(a.node_ids)} vs {b.node_count} nodes.")
    if IsomorphismMode(mode) == IsomorphismMode.STRICT:
        return a.edge_set() == tree_edge_ids(b)
    return canonical_form(a) == canonical_form(b)
