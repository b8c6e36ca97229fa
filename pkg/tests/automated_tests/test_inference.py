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

""""Test class for tree reconstruction and rooted-tree isomorphism"""

import math

import numpy as np
import pytest

from tests import test_utils
from varitree_core.core import inference, similarity, tree as tree_service
from varitree_core.model.inference import InferredTree
from varitree_core.model.kernel import KernelParams
from varitree_core.model.similarity import SimilarityMatrix
from varitree_core.model.tree import EdgeWeights, RootedTree
from varitree_core.static.enums.isomorphism_mode import IsomorphismMode
from varitree_core.static.varitree_exception import VaritreeError


def _tree_metric(tree: RootedTree, seed: int) -> SimilarityMatrix:
    values = tree_service.shortest_path_matrix(tree, test_utils.integer_weights(tree, seed))
    return SimilarityMatrix(values, [str(node) for node in range(tree.node_count)])


def _unit_path(node_count: int) -> SimilarityMatrix:
    tree = RootedTree((None, *range(node_count - 1)))
    weights = EdgeWeights({edge: 1.0 for edge in tree.edges})
    return SimilarityMatrix(tree_service.shortest_path_matrix(tree, weights), [str(node) for node in range(node_count)])


def test_union_find():
    """Testing that unions report whether two sets were merged"""
    forest = inference.UnionFind(4)
    assert forest.union(0, 1)
    assert forest.union(2, 3)
    assert not forest.union(1, 0)
    assert forest.union(1, 3)
    assert forest.find(0) == forest.find(2)


def test_exact_tree_metrics_are_recovered_for_every_small_tree():
    """Testing reconstruction of every labelled tree on up to 6 nodes from its exact tree metric"""
    for node_count in range(2, 7):
        trees = test_utils.all_rooted_trees(node_count)
        # Cayley: n^(n - 2) labelled trees, each rooted at node 0
        assert len(trees) == node_count ** (node_count - 2)
        for index, tree in enumerate(trees):
            inferred = inference.reconstruct(_tree_metric(tree, index), "0")
            assert inference.is_isomorphic(inferred, tree)


def test_reconstruct_orients_edges_away_from_the_root():
    """Testing breadth-first orientation and the edge weights of the result"""
    # GIVEN: A path 0 - 1 - 2 - 3 rooted at its middle node 2
    m = _unit_path(4)

    # WHEN: Reconstructing from node 2
    inferred = inference.reconstruct(m, "2")

    # THEN: Edges leave node 2 first
    assert inferred.root == "2"
    assert inferred.edges == (("2", "1", 1.0), ("2", "3", 1.0), ("1", "0", 1.0))
    assert inferred.children()["2"] == ["1", "3"]


def test_ties_are_broken_by_id_strings():
    """Testing that equal weights are taken in lexicographic (smaller id, larger id) order, not matrix order"""
    # GIVEN: Three equidistant nodes whose string order differs from their numeric and matrix order
    m = SimilarityMatrix(np.ones((3, 3)) - np.eye(3), ["2", "10", "3"])

    # WHEN: Reconstructing from node 2
    inferred = inference.reconstruct(m, "2")

    # THEN: ("10", "2") and ("10", "3") come before ("2", "3")
    assert inferred.edges == (("2", "10", 1.0), ("10", "3", 1.0))

    # AND: Reordering the rows does not change the tree
    shuffled = SimilarityMatrix(np.ones((3, 3)) - np.eye(3), ["3", "2", "10"])
    assert inference.reconstruct(shuffled, "2").edge_set() == inferred.edge_set()


def test_reconstruct_edge_cases():
    """Testing a single node, an unknown root and non-finite entries"""
    single = inference.reconstruct(SimilarityMatrix([[0.0]], ["r"]), "r")
    assert single.edges == ()
    m = SimilarityMatrix([[0.0, 1.0], [1.0, 0.0]], ["a", "b"])
    with pytest.raises(VaritreeError, match="Unknown node id"):
        inference.reconstruct(m, "z")
    broken = SimilarityMatrix([[0.0, math.inf], [math.inf, 0.0]], ["a", "b"])
    with pytest.raises(VaritreeError, match="non-finite"):
        inference.reconstruct(broken, "a")


def test_reconstruct_rejects_indistinguishable_nodes():
    """Testing that a zero Delta between distinct nodes is rejected before the tree is built"""
    m = SimilarityMatrix([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]], ["0", "1", "2"])
    with pytest.raises(VaritreeError, match=r"nodes \('0', '1'\) have a zero Delta"):
        inference.reconstruct(m, "0")


def test_inferred_tree_validation():
    """Testing that inferred trees must connect every node with positive weights"""
    with pytest.raises(VaritreeError, match="do not connect"):
        InferredTree(("a", "b", "c", "d"), (("a", "b", 1.0), ("c", "d", 1.0), ("d", "c", 1.0)), "a")
    with pytest.raises(VaritreeError, match="non-positive"):
        InferredTree(("a", "b"), (("a", "b", 0.0),), "a")
    with pytest.raises(VaritreeError, match="needs 1 edges"):
        InferredTree(("a", "b"), (), "a")


def test_strict_and_relaxed_isomorphism():
    """Testing that relaxed comparison ignores labels while strict comparison does not"""
    # GIVEN: The truth 0 -> 1 -> 2 and 0 -> 3, and the same shape with 1 and 3 swapped
    truth = RootedTree((None, 0, 1, 0))
    relabelled = InferredTree(("0", "1", "2", "3"), (("0", "1", 1.0), ("0", "3", 1.0), ("3", "2", 1.0)), "0")

    # THEN: Only the relaxed comparison accepts it
    assert not inference.is_isomorphic(relabelled, truth, IsomorphismMode.STRICT)
    assert inference.is_isomorphic(relabelled, truth, IsomorphismMode.RELAXED)
    assert inference.canonical_form(relabelled) == inference.canonical_form(truth) == "((())())"
    with pytest.raises(VaritreeError, match="differ in size"):
        inference.is_isomorphic(relabelled, RootedTree((None, 0)))


def test_embedded_trees_are_recovered_at_small_sigma():
    """Testing strict recovery of random embedded trees from their Delta matrix"""
    k = KernelParams.coupled(0.05)
    for seed in range(3):
        emb = tree_service.refine(test_utils.random_embedded_tree(8, 3, seed), 0.01)
        inferred = inference.reconstruct(similarity.delta_matrix(emb, k), "0")
        assert inference.is_isomorphic(inferred, emb.tree)
