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

""""Test class for Delta, its matrix and the tree-metric diagnostics"""

import math

import numpy as np
import pytest

from tests import test_utils
from varitree_core.core import geometry, similarity, tree as tree_service, varifold
from varitree_core.model.kernel import KernelParams
from varitree_core.model.similarity import SimilarityMatrix
from varitree_core.model.tree import EmbeddedTree, RootedTree
from varitree_core.static.enums.lemma_configuration import LemmaConfiguration
from varitree_core.static.varitree_exception import VaritreeError

KERNEL = KernelParams(0.1, 0.1)


def _tree_metric(tree: RootedTree, seed: int) -> SimilarityMatrix:
    values = tree_service.shortest_path_matrix(tree, test_utils.integer_weights(tree, seed))
    return SimilarityMatrix(values, [str(node) for node in range(tree.node_count)])


def test_delta_basics():
    """Testing Delta: zero on the diagonal, symmetric, squared path norm against the root"""
    emb = test_utils.six_node_tree(step=0.05)
    varifolds = tree_service.path_varifolds(emb)
    assert similarity.delta(emb, 3, 3, KERNEL) == 0.0
    assert similarity.delta(emb, 2, 5, KERNEL) == similarity.delta(emb, 5, 2, KERNEL)
    assert similarity.delta(emb, 0, 4, KERNEL) == varifold.norm_sq(varifolds[4], KERNEL)
    with pytest.raises(VaritreeError, match="Unknown node"):
        similarity.delta(emb, 0, 6, KERNEL)


def test_delta_along_an_edge_is_the_edge_norm():
    """Testing that Delta(parent, child) equals the squared norm of the edge varifold for every sigma"""
    emb = test_utils.random_embedded_tree(6, 3, seed=5)
    for sigma in (0.8, 0.1):
        k = KernelParams.coupled(sigma)
        weights = similarity.edge_deltas(emb, k)
        for parent, child in emb.tree.edges:
            edge = varifold.norm_sq(geometry.to_varifold(emb.edge_curves[(parent, child)]), k)
            assert weights[(parent, child)] == edge
            assert math.isclose(similarity.delta(emb, parent, child, k), edge, rel_tol=1e-9)


def test_delta_matrix():
    """Testing the full matrix: ids, attached tree edges and thread independence"""
    emb = test_utils.six_node_tree(step=0.05)
    m = similarity.delta_matrix(emb, KERNEL)
    assert m.node_ids == ("0", "1", "2", "3", "4", "5")
    assert m.edges == (("0", "1"), ("1", "2"), ("1", "3"), ("2", "4"), ("2", "5"))
    assert m.params == KERNEL
    assert m["2", "4"] == similarity.delta(emb, 2, 4, KERNEL)
    np.testing.assert_array_equal(m.values, similarity.delta_matrix(emb, KERNEL, threads=4).values)


def test_similarity_matrix_validation():
    """Testing that matrices must be square, symmetric, non-negative with a zero diagonal"""
    with pytest.raises(VaritreeError, match="square"):
        SimilarityMatrix(np.zeros((2, 3)), ["a", "b"])
    with pytest.raises(VaritreeError, match="not symmetric"):
        SimilarityMatrix([[0.0, 1.0], [2.0, 0.0]], ["a", "b"])
    with pytest.raises(VaritreeError, match="diagonal"):
        SimilarityMatrix([[1.0, 1.0], [1.0, 0.0]], ["a", "b"])
    with pytest.raises(VaritreeError, match="negative"):
        SimilarityMatrix([[0.0, -1.0], [-1.0, 0.0]], ["a", "b"])
    with pytest.raises(VaritreeError, match="unique"):
        SimilarityMatrix(np.zeros((2, 2)), ["a", "a"])


def test_exact_tree_metric_has_no_defect():
    """Testing that an integer-weighted tree metric satisfies both metric conditions"""
    for seed in range(5):
        tree = tree_service.random_tree(9, 3, seed)
        m = _tree_metric(tree, seed)
        assert similarity.triangle_defect(m) <= 0.0
        assert similarity.four_point_defect(m) <= 0.0
        assert similarity.max_decomposition_error(m, tree) == 0.0


def test_defects_of_known_violations():
    """Testing the normalized defect values of hand-made matrices"""
    # GIVEN: A triangle violation by 8 with unit spanning edges
    triangle = SimilarityMatrix([[0, 1, 10], [1, 0, 1], [10, 1, 0]], ["a", "b", "c"])
    # GIVEN: Both diagonals 3, every side 1
    square = SimilarityMatrix(
        [[0, 1, 3, 1], [1, 0, 1, 3], [3, 1, 0, 1], [1, 3, 1, 0]], ["a", "b", "c", "d"]
    )

    # THEN: The defects are the violation divided by the largest spanning edge
    assert similarity.triangle_defect(triangle) == 8.0
    assert similarity.four_point_defect(square) == 4.0


def test_defects_of_small_matrices():
    """Testing that there is nothing to check below 3 (triangle) or 4 (four-point) nodes"""
    m = SimilarityMatrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]], ["a", "b", "c"])
    assert similarity.four_point_defect(m) == -math.inf
    assert similarity.triangle_defect(SimilarityMatrix([[0.0]], ["a"])) == -math.inf
    with pytest.raises(VaritreeError, match="zero Delta"):
        similarity.four_point_defect(SimilarityMatrix(np.zeros((4, 4)), ["a", "b", "c", "d"]))


def test_decomposition_error_underflow():
    """Testing that a vanishing path sum is flagged instead of divided by"""
    tree = RootedTree((None, 0, 1))
    m = SimilarityMatrix(np.zeros((3, 3)), ["0", "1", "2"])
    assert similarity.max_decomposition_error(m, tree) == math.inf
    with pytest.raises(VaritreeError, match="two distinct nodes"):
        similarity.path_decomposition_error(test_utils.chain_tree(), 1, 1, KERNEL)


def test_decomposition_error_shrinks_with_sigma():
    """Testing that Delta becomes additive along tree paths as sigma goes to 0"""
    emb = tree_service.refine(test_utils.six_node_tree(), 0.005)
    ladder = test_utils.SIGMA_LADDER
    errors = [similarity.path_decomposition_error(emb, 4, 3, KernelParams.coupled(s)) for s in ladder]
    assert not any(error.underflow for error in errors)
    values = [error.relative_error for error in errors]
    assert test_utils.non_increasing_with_slack(values)
    assert values[-1] < 1e-6


def test_lemma_probe():
    """Testing the cross-term ratio of chain and branching edge pairs"""
    emb = tree_service.refine(test_utils.six_node_tree(), 0.005)
    assert similarity.lemma_configuration(emb.tree, 0, 1, 2) == LemmaConfiguration.CHAIN
    assert similarity.lemma_configuration(emb.tree, 1, 2, 3) == LemmaConfiguration.BRANCHING
    with pytest.raises(VaritreeError, match="neither a chain"):
        similarity.lemma_configuration(emb.tree, 0, 2, 4)

    ratios = [similarity.lemma_probe(emb, 2, 4, 5, KernelParams.coupled(s)) for s in test_utils.SIGMA_LADDER]
    assert all(b <= a for a, b in zip(ratios[:-1], ratios[1:]))
    assert ratios[-1] < ratios[0]
    expected = [(0, 1, 2), (0, 1, 3), (1, 2, 3), (1, 2, 4), (1, 2, 5), (2, 4, 5)]
    assert sorted(similarity.lemma_triples(emb.tree)) == expected


@pytest.mark.parametrize(
    "parents, positions",
    [
        ((None, 0, 1), [[0, 0], [1, 0], [2, 0]]),
        ((None, 0, 0), [[0, 0], [1, 0], [0, 1]]),
    ],
    ids=["collinear chain", "right-angle branching"],
)
def test_lemma_ratio_vanishes_along_the_ladder(parents, positions):
    """Testing that the cross-term ratio of two unit edges decays over the ladder and ends below 1%"""
    # GIVEN: Two straight unit edges sampled finer than the smallest sigma / 5
    emb = tree_service.refine(EmbeddedTree.from_positions(RootedTree(parents), positions), 0.005)

    # WHEN: Evaluating the ratio from sigma = 0.4 down to 0.025
    ratios = [similarity.lemma_probe(emb, 0, 1, 2, KernelParams.coupled(s)) for s in test_utils.SIGMA_LADDER]

    # THEN: It is non-increasing within 5% and small at the end
    assert test_utils.non_increasing_with_slack(ratios)
    assert 0 <= ratios[-1] < 0.01


def test_sigma_ladder():
    """Testing the geometric ladder and its validation"""
    assert similarity.sigma_ladder(0.4, 3) == [0.4, 0.2, 0.1]
    with pytest.raises(VaritreeError):
        similarity.sigma_ladder(0.4, 0)
    with pytest.raises(VaritreeError, match="strictly decreasing"):
        similarity.check_ladder([0.1, 0.2])
    with pytest.raises(VaritreeError, match="positive"):
        similarity.check_ladder([0.1, -0.2])


def test_convergence_sweep():
    """Testing that every diagnostic improves along the ladder for a branching tree"""
    # GIVEN: A tree with two branching nodes
    emb = test_utils.six_node_tree(step=0.05)

    # WHEN: Sweeping over the ladder
    rows = similarity.convergence_sweep(emb, test_utils.SIGMA_LADDER)

    # THEN: One row per sigma and non-increasing errors
    assert [row.sigma_x for row in rows] == test_utils.SIGMA_LADDER
    assert all(row.sigma_t == row.sigma_x for row in rows)
    errors = [row.max_decomp_err for row in rows]
    assert test_utils.non_increasing_with_slack(errors)
    assert rows[-1].max_decomp_err < 1e-6
    assert rows[-1].four_point_defect <= 1e-6
    assert rows[-1].max_lemma_ratio < rows[0].max_lemma_ratio
    with pytest.raises(VaritreeError):
        similarity.convergence_sweep(emb, [0.1, 0.2])
