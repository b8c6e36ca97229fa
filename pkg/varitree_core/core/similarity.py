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
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from varitree_core.core import geometry, inference, tree as tree_service, varifold
from varitree_core.model.curve import DiscreteVarifold
from varitree_core.model.kernel import KernelParams
from varitree_core.model.similarity import DecompositionError, SimilarityMatrix, SweepRow
from varitree_core.model.tree import EdgeWeights, EmbeddedTree, RootedTree
from varitree_core.static.enums.lemma_configuration import LemmaConfiguration
from varitree_core.static.varitree_exception import VaritreeError
from varitree_core.util import logging
from varitree_core.util.parallel import map_work_units

"""Node similarity Delta, its matrix, and the metric diagnostics that measure how close Delta is to a tree metric"""

# Delta(i, j) = d^2([x_r, x_i], [x_r, x_j]); the root path is the empty varifold
UNDERFLOW_FLOOR = sys.float_info.min
STEP_PER_SIGMA = 5


def node_id(node: int) -> str:
    return str(node)


def delta(emb: EmbeddedTree, i: int, j: int, k: KernelParams) -> float:
    for node in (i, j):
        if not 0 <= node < emb.tree.node_count:
            raise VaritreeError(f"Unknown node {node}.")
    if i == j:
        return 0.0
    varifolds = tree_service.path_varifolds(emb)
    return varifold.distance_sq(varifolds[i], varifolds[j], k)


def delta_matrix_from_varifolds(
    node_ids: Sequence[str],
    varifolds: Sequence[DiscreteVarifold],
    k: KernelParams,
    threads: int = 1,
    edges: Optional[Sequence[Tuple[str, str]]] = None,
) -> SimilarityMatrix:
    """Delta over arbitrary path varifolds; norms are computed once and every pair is an independent unit."""
    if len(node_ids) != len(varifolds):
        raise VaritreeError(f"Got {len(node_ids)} node ids for {len(varifolds)} varifolds.")
    if not varifolds:
        raise VaritreeError("A similarity matrix needs at least one node.")
    norms = map_work_units(lambda a: varifold.norm_sq(a, k), varifolds, threads)
    pairs = list(itertools.combinations(range(len(varifolds)), 2))
    values = map_work_units(
        lambda pair: varifold.distance_sq(
            varifolds[pair[0]], varifolds[pair[1]], k, norm_a=norms[pair[0]], norm_b=norms[pair[1]]
        ),
        pairs,
        threads,
    )
    matrix = np.zeros((len(varifolds), len(varifolds)))
    for (i, j), value in zip(pairs, values):
        matrix[i, j] = matrix[j, i] = value
    return SimilarityMatrix(matrix, tuple(node_ids), params=k, edges=tuple(edges) if edges is not None else None)


def delta_matrix(emb: EmbeddedTree, k: KernelParams, threads: int = 1) -> SimilarityMatrix:
    """Delta for all node pairs of the embedding; the tree edges are attached as the normalizer edge set."""
    varifolds = tree_service.path_varifolds(emb)
    nodes = range(emb.tree.node_count)
    edges = [(node_id(a), node_id(b)) for a, b in emb.tree.edges]
    logging.info(f"Computing Delta for {emb.tree.node_count} nodes with sigma_x={k.sigma_x}, sigma_t={k.sigma_t}")
    return delta_matrix_from_varifolds(
        [node_id(node) for node in nodes], [varifolds[node] for node in nodes], k, threads, edges
    )


def edge_deltas(emb: EmbeddedTree, k: KernelParams) -> EdgeWeights:
    """Delta on every tree edge: the weights of the weighted tree T' the full Delta approximates."""
    weights = {
        edge: varifold.norm_sq(geometry.to_varifold(curve), k) for edge, curve in emb.edge_curves.items()
    }
    return EdgeWeights(weights)


def _path_sum(values: np.ndarray, tree: RootedTree, i: int, j: int) -> float:
    path = tree.tree_path(i, j)
    return float(sum(values[a, b] for a, b in zip(path[:-1], path[1:])))


def _decomposition_error(values: np.ndarray, tree: RootedTree, i: int, j: int) -> DecompositionError:
    total = _path_sum(values, tree, i, j)
    if total <= UNDERFLOW_FLOOR:
        return DecompositionError(relative_error=math.inf, underflow=True)
    return DecompositionError(relative_error=abs(values[i, j] - total) / total)


def path_decomposition_error(emb: EmbeddedTree, i: int, j: int, k: KernelParams) -> DecompositionError:
    """Relative gap between Delta(i, j) and the sum of Delta over consecutive nodes of the tree path."""
    if i == j:
        raise VaritreeError("The decomposition error needs two distinct nodes.")
    for node in (i, j):
        if not 0 <= node < emb.tree.node_count:
            raise VaritreeError(f"Unknown node {node}.")
    varifolds = tree_service.path_varifolds(emb)
    path = emb.tree.tree_path(i, j)
    values = np.zeros((emb.tree.node_count, emb.tree.node_count))
    for a, b in [(i, j), *zip(path[:-1], path[1:])]:
        values[a, b] = varifold.distance_sq(varifolds[a], varifolds[b], k)
    return _decomposition_error(values, emb.tree, i, j)


def max_decomposition_error(m: SimilarityMatrix, tree: RootedTree) -> float:
    """Largest decomposition error over all node pairs; matrix ids must be the tree's node indices."""
    worst = 0.0
    for i, j in itertools.combinations(range(tree.node_count), 2):
        worst = max(worst, _decomposition_error(m.values, tree, i, j).relative_error)
    return worst


def _normalizer(m: SimilarityMatrix) -> float:
    if m.edges is not None:
        indices = m.edge_indices(m.edges)
    else:
        indices = [(m.index_of(a), m.index_of(b)) for a, b, _ in inference.minimum_spanning_edges(m)]
    largest = max((m.values[a, b] for a, b in indices), default=0.0)
    if not largest > 0:
        raise VaritreeError("Cannot normalize: every edge has a zero Delta.")
    return float(largest)


def triangle_defect(m: SimilarityMatrix) -> float:
    """Worst Delta(i, k) - Delta(i, j) - Delta(j, k) over distinct triples, divided by the largest edge Delta.

    Returns -inf for fewer than 3 nodes (no triple to check).
    """
    if m.size < 3:
        return -math.inf
    values = m.values
    distinct = ~np.eye(m.size, dtype=bool)
    worst = -math.inf
    for j in range(m.size):
        defect = values - values[:, j, None] - values[None, j, :]
        mask = distinct.copy()
        mask[j, :] = False
        mask[:, j] = False
        if mask.any():
            worst = max(worst, float(defect[mask].max()))
    return worst / _normalizer(m)


def four_point_defect(m: SimilarityMatrix) -> float:
    """Worst Delta(i,k) + Delta(j,l) - max(Delta(i,j) + Delta(k,l), Delta(j,k) + Delta(l,i)), normalized.

    Taken over all quadruples of distinct nodes; returns -inf for fewer than 4 nodes.
    """
    if m.size < 4:
        return -math.inf
    values = m.values
    distinct = ~np.eye(m.size, dtype=bool)
    worst = -math.inf
    # for fixed (i, j) the remaining axes are (k, l)
    for i, j in itertools.permutations(range(m.size), 2):
        diagonal = values[i][:, None] + values[j][None, :]
        first = values[i, j] + values
        second = values[j][:, None] + values[i][None, :]
        mask = distinct.copy()
        mask[[i, j], :] = False
        mask[:, [i, j]] = False
        worst = max(worst, float((diagonal - np.maximum(first, second))[mask].max()))
    return worst / _normalizer(m)


def lemma_configuration(tree: RootedTree, i: int, j: int, kk: int) -> LemmaConfiguration:
    if tree.parent[j] == i and tree.parent[kk] == j:
        return LemmaConfiguration.CHAIN
    if tree.parent[j] == i and tree.parent[kk] == i and j != kk:
        return LemmaConfiguration.BRANCHING
    raise VaritreeError(f"Nodes ({i}, {j}, {kk}) form neither a chain i<j<k nor a branching i<j, i<k.")


def lemma_probe(emb: EmbeddedTree, i: int, j: int, kk: int, k: KernelParams) -> float:
    """<mu_A, mu_B> / (|mu_A|^2 + |mu_B|^2) for the two edges of a chain or branching configuration.

    The ratio is positive in exact arithmetic, but the cross term underflows to 0.0 once every kernel
    value between the two edges drops below the smallest double, e.g. for a right-angle branching at
    sigma <= 0.1 with sigma_t = sigma_x. Callers get 0.0 in that case, never a negative value.
    """
    for node in (i, j, kk):
        if not 0 <= node < emb.tree.node_count:
            raise VaritreeError(f"Unknown node {node}.")
    configuration = lemma_configuration(emb.tree, i, j, kk)
    first = geometry.to_varifold(emb.edge_curves[(i, j)])
    if configuration == LemmaConfiguration.CHAIN:
        second = geometry.to_varifold(emb.edge_curves[(j, kk)])
    else:
        second = geometry.to_varifold(emb.edge_curves[(i, kk)])
    return varifold.inner(first, second, k) / (varifold.norm_sq(first, k) + varifold.norm_sq(second, k))


def lemma_triples(tree: RootedTree) -> List[Tuple[int, int, int]]:
    """Every chain (grandparent, parent, child) and every unordered sibling pair under a common parent."""
    triples = []
    for parent, node in tree.edges:
        triples.extend((parent, node, child) for child in tree.children(node))
    for node in tree.branching_nodes():
        triples.extend((node, a, b) for a, b in itertools.combinations(tree.children(node), 2))
    return triples


def sigma_ladder(sigma_0: float, rungs: int) -> List[float]:
    """Geometric ladder sigma_0 * 2^-k for k = 0 .. rungs - 1."""
    if not sigma_0 > 0 or rungs < 1:
        raise VaritreeError(f"A sigma ladder needs sigma_0 > 0 and at least one rung, got {sigma_0}, {rungs}.")
    return [sigma_0 * 2.0**-rung for rung in range(rungs)]


def check_ladder(sigmas: Sequence[float]):
    if not sigmas:
        raise VaritreeError("The sigma ladder is empty.")
    if any(not (math.isfinite(sigma) and sigma > 0) for sigma in sigmas):
        raise VaritreeError("Every sigma of the ladder must be positive and finite.")
    if any(b >= a for a, b in zip(sigmas[:-1], sigmas[1:])):
        raise VaritreeError("The sigma ladder must be strictly decreasing.")


def _sweep_row(emb: EmbeddedTree, sigma: float, ratio: float, threads: int) -> SweepRow:
    k = KernelParams.coupled(sigma, ratio)
    matrix = delta_matrix(emb, k, threads)
    lemma_ratios = [lemma_probe(emb, *triple, k) for triple in lemma_triples(emb.tree)]
    return SweepRow(
        sigma_x=k.sigma_x,
        sigma_t=k.sigma_t,
        max_decomp_err=max_decomposition_error(matrix, emb.tree),
        triangle_defect=triangle_defect(matrix),
        four_point_defect=four_point_defect(matrix),
        max_lemma_ratio=max(lemma_ratios, default=0.0),
    )


def convergence_sweep(
    emb: EmbeddedTree, sigmas: Sequence[float], ratio: float = 1.0, threads: int = 1
) -> List[SweepRow]:
    """Run every diagnostic at sigma_x = sigma, sigma_t = ratio * sigma for each rung of the ladder.

    Edges are first subdivided to a step of at most min(sigmas) / 5 so that quadrature error stays below
    the asymptotic signal.
    """
    check_ladder(sigmas)
    if not (math.isfinite(ratio) and ratio > 0):
        raise VaritreeError(f"The sigma_t / sigma_x ratio must be positive, got {ratio}.")
    refined = tree_service.refine(emb, min(sigmas) / STEP_PER_SIGMA)
    rows = []
    for sigma in sigmas:
        rows.append(_sweep_row(refined, sigma, ratio, threads))
        logging.info(f"Sweep rung sigma={sigma}: max decomposition error {rows[-1].max_decomp_err:.3e}")
    return rows

