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
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .kernel import KernelParams
from ..static.varitree_exception import VaritreeError
from ..util.utils import read_only


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric matrix of Delta(i, j) values indexed by ``node_ids``.

    ``edges`` optionally holds the ground-truth edges as id pairs; the metric diagnostics normalize by the
    largest Delta over them. ``params`` is None for matrices that were not produced by a kernel.
    """

    values: np.ndarray
    node_ids: Tuple[str, ...]
    params: Optional[KernelParams] = None
    edges: Optional[Tuple[Tuple[str, str], ...]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        node_ids = tuple(str(node_id) for node_id in self.node_ids)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise VaritreeError(f"A similarity matrix must be square, got shape {values.shape}.")
        if values.shape[0] != len(node_ids):
            raise VaritreeError(f"Expected {values.shape[0]} node ids, got {len(node_ids)}.")
        if len(set(node_ids)) != len(node_ids):
            raise VaritreeError("Node ids of a similarity matrix must be unique.")
        if not np.array_equal(values, values.T, equal_nan=True):
            rows, cols = np.nonzero(~((values == values.T) | (np.isnan(values) & np.isnan(values.T))))
            raise VaritreeError(
                f"Similarity matrix is not symmetric at ({node_ids[rows[0]]}, {node_ids[cols[0]]})."
            )
        diagonal = np.diag(values)
        if (diagonal != 0).any():
            index = int(np.argmax(diagonal != 0))
            raise VaritreeError(f"Similarity matrix has a non-zero diagonal entry for node {node_ids[index]}.")
        if (values < 0).any():
            rows, cols = np.nonzero(values < 0)
            first = (node_ids[rows[0]], node_ids[cols[0]])
            raise VaritreeError(f"Similarity matrix has a negative entry at {first}.")
        if self.edges is not None:
            edges = tuple((str(a), str(b)) for a, b in self.edges)
            unknown = [edge for edge in edges if edge[0] not in node_ids or edge[1] not in node_ids]
            if unknown:
                raise VaritreeError(f"Edge {unknown[0]} refers to an unknown node id.")
            object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", read_only(values))
        object.__setattr__(self, "node_ids", node_ids)

    @property
    def size(self) -> int:
        return len(self.node_ids)

    def index_of(self, node_id: str) -> int:
        try:
            return self.node_ids.index(str(node_id))
        except ValueError:
            raise VaritreeError(f"Unknown node id '{node_id}'.") from None

    def __getitem__(self, pair: Tuple[str, str]) -> float:
        i, j = pair
        return float(self.values[self.index_of(i), self.index_of(j)])

    def edge_indices(self, edges: Sequence[Tuple[str, str]]):
        return [(self.index_of(a), self.index_of(b)) for a, b in edges]


@dataclass(frozen=True)
class DecompositionError:
    """Relative error between Delta(i, j) and the sum of edge Deltas along the tree path.

    ``underflow`` is set (and ``relative_error`` is inf) when the edge sum is too small to divide by.
    """

    relative_error: float
    underflow: bool = False


@dataclass(frozen=True)
class SweepRow:
    sigma_x: float
    sigma_t: float
    max_decomp_err: float
    triangle_defect: float
    four_point_defect: float
    max_lemma_ratio: float
