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

""""Test class for the synthetic velocity field and the backward integration to the root"""

import logging

import numpy as np
import pytest

from tests import test_utils
from varitree_core.core import geometry, inference, tree as tree_service, velocity
from varitree_core.model.kernel import KernelParams
from varitree_core.model.velocity import CellSample, SimulationConfig, VectorFieldModel
from varitree_core.static.enums.cell_placement import CellPlacement
from varitree_core.static.enums.termination_cause import TerminationCause
from varitree_core.static.varitree_exception import VaritreeError
from varitree_core.util.logging import SERVICE_LOGGER, tally

STEP = 0.02
KERNEL = KernelParams(0.05, 0.05)
ORIGIN = np.zeros(2)


def _single_cell_model(bandwidth: float) -> VectorFieldModel:
    return VectorFieldModel((CellSample([0.0, 0.0], [2.0, 0.0], "only"),), bandwidth)


def _segment_model() -> VectorFieldModel:
    """Cells moving along (0, 0) -> (1, 0)."""
    emb = test_utils.chain_tree()
    cells = [cell for cell in velocity.sample_cells(emb, 50, 0.0, 0.0, seed=0) if cell.cell_id.startswith("0-1")]
    return VectorFieldModel(tuple(cells), STEP)


def test_field_at():
    """Testing the kernel-weighted field: exact at one cell, zero with a flag where weights underflow"""
    model = _single_cell_model(bandwidth=0.5)
    value, underflow = velocity.field_at(model, np.array([0.3, -0.1]))
    assert not underflow
    np.testing.assert_allclose(value, [2.0, 0.0])

    value, underflow = velocity.field_at(model, np.array([100.0, 0.0]))
    assert underflow
    np.testing.assert_array_equal(value, [0.0, 0.0])
    with pytest.raises(VaritreeError, match="dimension 2"):
        velocity.field_at(model, np.array([0.0, 0.0, 0.0]))


def test_sample_cells():
    """Testing cell stations, ids and velocities without noise"""
    emb = test_utils.chain_tree()
    cells = velocity.sample_cells(emb, 4, 0.0, 0.0, seed=0, speed=2.0)
    assert len(cells) == 8
    assert cells[0].cell_id == "0-1:0"
    np.testing.assert_allclose(cells[0].position, [0.125, 0.0])
    np.testing.assert_allclose(cells[0].velocity, [2.0, 0.0])
    np.testing.assert_allclose(cells[-1].position, [1.0, 0.875])

    with_nodes = velocity.sample_cells(emb, 4, 0.0, 0.0, seed=0, placement=CellPlacement.NODES)
    assert [cell.cell_id for cell in with_nodes[-2:]] == ["1", "2"]
    np.testing.assert_array_equal(with_nodes[-1].position, [1.0, 1.0])
    np.testing.assert_allclose(with_nodes[-1].velocity, [0.0, 1.0])


def test_sample_cells_noise_is_seeded():
    """Testing that noisy samples are reproducible"""
    emb = test_utils.six_node_tree()
    first = velocity.sample_cells(emb, 5, 0.1, 0.2, seed=3)
    second = velocity.sample_cells(emb, 5, 0.1, 0.2, seed=3)
    other = velocity.sample_cells(emb, 5, 0.1, 0.2, seed=4)
    assert all(np.array_equal(a.position, b.position) for a, b in zip(first, second))
    assert not np.array_equal(first[0].position, other[0].position)
    with pytest.raises(VaritreeError):
        velocity.sample_cells(emb, 0, 0.0, 0.0, seed=0)


def test_integrate_straight_edge():
    """Testing that the backward trace of a straight edge is the edge itself, oriented root -> cell"""
    curve = velocity.integrate_to_root(_segment_model(), np.array([1.0, 0.0]), ORIGIN, STEP, 500)
    np.testing.assert_array_equal(curve.end, [1.0, 0.0])
    assert np.linalg.norm(curve.start) <= 2 * STEP
    assert np.abs(curve.points[:, 1]).max() < 1e-9
    assert geometry.arc_length(curve) <= 1.0


def test_integrate_immediate_capture():
    """Testing a start inside the capture ball: a degenerate 2-point curve, or an error at the root itself"""
    curve = velocity.integrate_to_root(_segment_model(), np.array([0.01, 0.0]), ORIGIN, STEP, 500)
    np.testing.assert_array_equal(curve.points, [[0.0, 0.0], [0.01, 0.0]])
    with pytest.raises(VaritreeError, match="IMMEDIATE_CAPTURE"):
        velocity.integrate_to_root(_segment_model(), ORIGIN, ORIGIN, STEP, 500)


def test_integrate_failures():
    """Testing the stall and step limit termination causes"""
    # WHEN: Starting where every kernel weight underflows
    with pytest.raises(VaritreeError, match="STALLED"):
        velocity.integrate_to_root(_single_cell_model(0.02), np.array([10.0, 10.0]), np.array([20.0, 20.0]), 0.1, 10)

    # WHEN: The step limit is too small to reach the root
    with pytest.raises(VaritreeError, match="MAX_STEPS"):
        velocity.integrate_to_root(_single_cell_model(1.0), np.array([5.0, 0.0]), ORIGIN, 0.1, 3)


def test_trace_cells_reports_causes():
    """Testing that per-cell failures are reported, not raised"""
    model = _segment_model()
    cells = [CellSample([1.0, 0.0], [1.0, 0.0], "far"), CellSample([0.01, 0.0], [1.0, 0.0], "near")]
    config = SimulationConfig(step=STEP, max_steps=5)
    results = velocity.trace_cells(model, cells, ORIGIN, config)
    assert [result.cause for result in results] == [TerminationCause.MAX_STEPS, TerminationCause.IMMEDIATE_CAPTURE]
    assert results[0].curve is None
    assert results[1].succeeded


def test_pipeline_recovers_the_tree_from_node_cells():
    """Testing that node cells traced back to the root reproduce the path curves and the tree"""
    # GIVEN: A tree with right-angle turns and one traced cell per node
    emb = test_utils.six_node_tree()
    config = SimulationConfig(per_edge=50, step=STEP, placement=CellPlacement.NODES)

    # WHEN: Running the pipeline
    m, inferred = velocity.velocity_pipeline(emb, config, KERNEL)

    # THEN: Matrix ids are the node ids and the tree is recovered
    assert m.node_ids == ("0", "1", "2", "3", "4", "5")
    assert inference.is_isomorphic(inferred, emb.tree)

    cells = velocity.sample_cells(emb, 50, 0.0, 0.0, 0, placement=CellPlacement.NODES)
    model = VectorFieldModel(tuple(cells), STEP)
    for node in range(1, emb.tree.node_count):
        traced = velocity.integrate_to_root(model, emb.positions[node], ORIGIN, STEP, 5000)
        assert geometry.hausdorff_distance(traced, tree_service.path_curve(emb, node)) <= 2 * STEP


def test_pipeline_with_edge_cells():
    """Testing that every edge cell is traced and the root gets its own id"""
    config = SimulationConfig(per_edge=10, step=STEP, placement=CellPlacement.EDGES)
    m, inferred = velocity.velocity_pipeline(test_utils.chain_tree(), config, KERNEL)
    assert m.size == 21
    assert m.node_ids[0] == velocity.EDGE_ROOT_ID
    assert inferred.root == velocity.EDGE_ROOT_ID
    assert m.edges is None


def test_pipeline_failure_fraction():
    """Testing that failed traces abort the pipeline unless their share is allowed"""
    emb = test_utils.six_node_tree()
    config = SimulationConfig(per_edge=50, step=STEP, max_steps=60, placement=CellPlacement.NODES)

    with pytest.raises(VaritreeError, match="first failing cell"):
        velocity.velocity_pipeline(emb, config, KERNEL)

    # only node 1 is close enough to the root for 60 steps
    m, inferred = velocity.velocity_pipeline(emb, config, KERNEL, max_failure_fraction=1.0)
    assert m.node_ids == ("0", "1")
    assert m.edges == (("0", "1"),)
    assert inferred.edges[0][:2] == ("0", "1")


def test_pipeline_logs_every_cell_and_reuses_given_cells(caplog):
    """Testing per-cell termination records, the cause summary and that passed cells replace sampling"""
    # GIVEN: The node cells of the right-angle tree, sampled once
    emb = test_utils.six_node_tree()
    config = SimulationConfig(per_edge=50, step=STEP, placement=CellPlacement.NODES)
    cells = velocity.sample_cells(emb, 50, 0.0, 0.0, 0, placement=CellPlacement.NODES)
    caplog.set_level(logging.DEBUG, logger=SERVICE_LOGGER)

    # WHEN: Running the pipeline on them
    given, _ = velocity.velocity_pipeline(emb, config, KERNEL, cells=cells)

    # THEN: Every traced node cell has its own record and the summary counts the causes
    messages = [record.getMessage() for record in caplog.records]
    for node in range(1, emb.tree.node_count):
        assert any(message.startswith(f"Cell '{node}': CAPTURED after") for message in messages)
    assert "Traced 5 cells: CAPTURED=5" in messages

    # AND: The matrix equals the one built from freshly sampled cells
    sampled, _ = velocity.velocity_pipeline(emb, config, KERNEL)
    np.testing.assert_array_equal(given.values, sampled.values)


def test_tally():
    """Testing the sorted label counts of the termination summary"""
    assert tally(["STALLED", "CAPTURED", "CAPTURED"]) == "CAPTURED=2, STALLED=1"
    assert tally([]) == ""


def test_pipeline_is_thread_independent():
    """Testing that traces and matrix entries do not depend on the thread count"""
    emb = test_utils.six_node_tree()
    config = SimulationConfig(per_edge=20, step=STEP, noise_pos=0.002, noise_vel=0.02, seed=7)
    sequential, _ = velocity.velocity_pipeline(emb, config, KERNEL, max_failure_fraction=1.0)
    parallel, _ = velocity.velocity_pipeline(emb, config, KERNEL, threads=3, max_failure_fraction=1.0)
    np.testing.assert_array_equal(sequential.values, parallel.values)
    assert sequential.node_ids == parallel.node_ids


def test_simulation_config_validation():
    """Testing the ranges of the simulation parameters and the derived defaults"""
    config = SimulationConfig(step=0.05)
    assert config.resolved_bandwidth == 0.05
    assert config.resolved_capture_radius == 0.1
    with pytest.raises(VaritreeError):
        SimulationConfig(per_edge=0)
    with pytest.raises(VaritreeError):
        SimulationConfig(noise_vel=-1.0)
    with pytest.raises(VaritreeError, match="zero velocity"):
        CellSample([0.0, 0.0], [0.0, 0.0])
