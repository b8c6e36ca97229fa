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

""""Test class for the recovery experiment and its celery trial task"""

from unittest.mock import Mock

import pytest

from tests import test_utils
from tests.conftest import set_up_env
from varitree_core.core import experiment_service
from varitree_core.model.inference import RecoveryRow
from varitree_core.static.varitree_exception import VaritreeError

SIGMAS = [0.8, 0.05]


def _run(is_asynchronous: bool = False, threads: int = 1):
    return experiment_service.recovery_experiment(
        2, 5, 3, SIGMAS, seed=11, config=test_utils.TEST_EMBEDDING, threads=threads, is_asynchronous=is_asynchronous
    )


def test_trial_seeds_are_reproducible():
    """Testing that trial seeds derive from the experiment seed only"""
    seeds = experiment_service.trial_seeds(3, 4)
    assert seeds == experiment_service.trial_seeds(3, 4)
    assert len(set(seeds)) == 4
    assert seeds[:2] == experiment_service.trial_seeds(3, 2)


def test_recovery_experiment():
    """Testing the experiment rows: ordered by trial and sigma, recovered at small sigma"""
    # GIVEN: The app context the trial task runs in
    app = set_up_env()

    # WHEN: Running two trials synchronously
    with app.app_context():
        rows = _run()

    # THEN: One row per (trial, sigma)
    assert [(row.trial, row.sigma) for row in rows] == [(0, 0.8), (0, 0.05), (1, 0.8), (1, 0.05)]
    assert all(row.success for row in rows if row.sigma == 0.05)
    assert all(isinstance(row, RecoveryRow) for row in rows)


def test_recovery_experiment_is_reproducible_across_threads():
    """Testing that the thread pool does not change the results"""
    app = set_up_env()
    with app.app_context():
        assert _run() == _run(threads=2)


def test_recovery_experiment_dispatches_celery_tasks(mocker):
    """Testing that asynchronous runs send one task per trial and collect their results"""
    # GIVEN: A mocked broker that runs the task in-process
    app = set_up_env()
    task = experiment_service.run_recovery_trial
    delay = mocker.patch.object(task, "delay", side_effect=lambda *args: Mock(get=Mock(return_value=task(*args))))

    # WHEN: Running asynchronously
    with app.app_context():
        rows = _run(is_asynchronous=True)

    # THEN: Both trials were dispatched and the rows equal a synchronous run
    assert delay.call_count == 2
    with app.app_context():
        assert rows == _run()


def test_recovery_experiment_reports_failed_worker_trials(mocker):
    """Testing that a trial failing on the worker names the trial"""
    # GIVEN: A broker whose results raise
    app = set_up_env()
    failing = Mock(get=Mock(side_effect=RuntimeError("worker lost")))
    mocker.patch.object(experiment_service.run_recovery_trial, "delay", return_value=failing)

    # WHEN / THEN: The first trial error surfaces as a VaritreeError
    with app.app_context():
        with pytest.raises(VaritreeError, match="Recovery trial 0 failed on the worker: worker lost"):
            _run(is_asynchronous=True)


def test_success_rates():
    """Testing the per-sigma share of successful trials, largest sigma first"""
    rows = [
        RecoveryRow(0, 0.1, True, -1.0),
        RecoveryRow(0, 0.5, False, 0.2),
        RecoveryRow(1, 0.1, True, -1.0),
        RecoveryRow(1, 0.5, True, 0.0),
    ]
    assert experiment_service.success_rates(rows) == {0.5: 0.5, 0.1: 1.0}
    assert list(experiment_service.success_rates(rows)) == [0.5, 0.1]


def test_invalid_experiment_arguments():
    """Testing that empty experiments are rejected"""
    with pytest.raises(VaritreeError):
        experiment_service.recovery_experiment(0, 5, 3, SIGMAS, seed=0)
    with pytest.raises(VaritreeError, match="sigma"):
        experiment_service.recovery_experiment(1, 5, 3, [], seed=0)
