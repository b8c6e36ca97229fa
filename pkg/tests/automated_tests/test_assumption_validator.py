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

""""Test class for the sampled regularity checks of embedded trees"""

import math

import pytest

from tests import test_utils
from varitree_core.core import assumption_validator
from varitree_core.model.curve import PolygonalCurve
from varitree_core.model.tree import EmbeddedTree, RootedTree
from varitree_core.static.varitree_exception import VaritreeError


def _fold_back_tree() -> EmbeddedTree:
    """The second edge turns and heads back towards the first one, so the chords shrink."""
    positions = [[-1.0, 0.0], [1.0, 0.0], [-3.0, 0.2]]
    curves = {
        (0, 1): PolygonalCurve([[-1.0, 0.0], [1.0, 0.0]]),
        (1, 2): PolygonalCurve([[1.0, 0.0], [1.0, 1.0], [-3.0, 0.2]]),
    }
    return EmbeddedTree(RootedTree((None, 0, 1)), positions, curves)


def _converging_siblings_tree() -> EmbeddedTree:
    """The second sibling bends towards the first one."""
    positions = [[0.0, 0.0], [1.0, 0.0], [1.0, 0.6]]
    curves = {
        (0, 1): PolygonalCurve([[0.0, 0.0], [1.0, 0.0]]),
        (0, 2): PolygonalCurve([[0.0, 0.0], [0.0, 0.5], [1.0, 0.6]]),
    }
    return EmbeddedTree(RootedTree((None, 0, 0)), positions, curves)


def _narrow_branching_tree() -> EmbeddedTree:
    """Two children of node 1 leaving 5 degrees apart."""
    first, second = math.radians(40), math.radians(45)
    positions = [
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0 + math.cos(first), math.sin(first)],
        [1.0 + math.cos(second), math.sin(second)],
    ]
    return EmbeddedTree.from_positions(RootedTree((None, 0, 1, 1)), positions)


def test_straight_edges_pass_every_check():
    """Testing that right-angle straight edges satisfy all three conditions"""
    emb = test_utils.six_node_tree(step=0.1)
    assert assumption_validator.validate_A1(emb).passed
    assert assumption_validator.validate_A2(emb).passed
    assert assumption_validator.validate_A3(emb).passed


def test_chord_check_detects_fold_back():
    """Testing that shrinking chords are reported with a positive margin"""
    report = assumption_validator.validate_A1(_fold_back_tree())
    assert not report.passed
    assert report.violations > 0
    assert report.worst_margin > 0


def test_sibling_tangent_check_detects_converging_edges():
    """Testing that sibling tangents growing closer are reported"""
    report = assumption_validator.validate_A2(_converging_siblings_tree())
    assert not report.passed
    assert report.checked > 0


def test_branching_check_detects_narrow_angle():
    """Testing that siblings leaving too close to each other fail at their branching node"""
    report = assumption_validator.validate_A3(_narrow_branching_tree())
    assert not report.passed
    assert report.failing_nodes == [1]
    # a wide angle passes at the same node
    assert assumption_validator.validate_A3(test_utils.branching_tree()).passed


def test_checks_without_candidates():
    """Testing a chain: nothing to compare for siblings, -inf as worst margin"""
    emb = test_utils.chain_tree()
    report = assumption_validator.validate_A2(emb)
    assert report.passed
    assert report.checked == 0
    assert report.worst_margin == -math.inf
    assert assumption_validator.validate_A3(emb).checks == ()


def test_invalid_parameters():
    """Testing the parameter ranges of the checks"""
    emb = test_utils.chain_tree()
    with pytest.raises(VaritreeError):
        assumption_validator.validate_A1(emb, samples=1)
    with pytest.raises(VaritreeError, match="exponent"):
        assumption_validator.validate_A3(emb, a_exponent=2.0)
    with pytest.raises(VaritreeError, match="neighborhood"):
        assumption_validator.validate_A3(emb, neighborhood=0.0)
