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
import dataclasses
from collections import defaultdict
from typing import Dict, List, Optional, Sequence

import numpy as np

from varitree_core.celery import CELERY
from varitree_core.core import inference, similarity, tree as tree_service
from varitree_core.model.inference import RecoveryRow
from varitree_core.model.kernel import KernelParams
from varitree_core.model.tree import EmbeddingConfig
from varitree_core.static.varitree_exception import VaritreeError
from varitree_core.util import logging
from varitree_core.util.parallel import map_work_units
from varitree_core.util.utils import is_running_asynchronously

"""
Recovery experiment: random trees are generated, embedded and reconstructed from Delta at every sigma.
Trials are independent; they run in-process or, when asynchronous, as celery tasks.
"""

ASYNCHRONOUS: bool = is_running_asynchronously()


def trial_seeds(seed: int, trees: int) -> List[Sequence[int]]:
    """(tree seed, embedding seed) per trial, derived from one seed sequence."""
    children = np.random.SeedSequence(seed).spawn(trees)
    return [tuple(int(value) for value in child.generate_state(2)) for child in children]


@CELERY.task()
def run_recovery_trial(
    trial: int,
    nodes: int,
    dim: int,
    sigmas: List[float],
    tree_seed: int,
    embed_seed: int,
    config: dict,
    max_children: int,
    ratio: float = 1.0,
) -> List[dict]:
    """Generate, embed and reconstruct one tree at every sigma; rows are returned as plain dicts."""
    embedding_config = EmbeddingConfig(**config)
    tree = tree_service.random_tree(nodes, max_children, tree_seed)
    emb = tree_service.embed(tree, dim, embedding_config, embed_seed)
    rows = []
    for sigma in sigmas:
        refined = tree_service.refine(emb, min(embedding_config.sampling_step, sigma / similarity.STEP_PER_SIGMA))
        m = similarity.delta_matrix(refined, KernelParams.coupled(sigma, ratio))
        inferred = inference.reconstruct(m, similarity.node_id(tree.root))
        defect = similarity.four_point_defect(m)
        success = inference.is_isomorphic(inferred, tree)
        row = RecoveryRow(trial=trial, sigma=float(sigma), success=success, four_point_defect=defect)
        rows.append(dataclasses.asdict(row))
    logging.info(f"Recovery trial {trial}: {sum(row['success'] for row in rows)} of {len(rows)} sigmas recovered.")
    return rows


def recovery_experiment(
    trees: int,
    nodes: int,
    dim: int,
    sigmas: Sequence[float],
    seed: int,
    config: Optional[EmbeddingConfig] = None,
    max_children: int = 3,
    ratio: float = 1.0,
    threads: int = 1,
    is_asynchronous: bool = ASYNCHRONOUS,
) -> List[RecoveryRow]:
    """Strict-isomorphism recovery over ``trees`` random trees and every sigma, ordered by (trial, sigma)."""
    if trees < 1 or nodes < 1 or dim < 1:
        raise VaritreeError(f"Trial, node and dimension counts must be positive, got {trees}, {nodes}, {dim}.")
    if not sigmas:
        raise VaritreeError("At least one sigma is needed.")
    config = config if config is not None else EmbeddingConfig()
    ladder = [float(sigma) for sigma in sigmas]
    arguments = [
        (trial, nodes, dim, ladder, tree_seed, embed_seed, dataclasses.asdict(config), max_children, ratio)
        for trial, (tree_seed, embed_seed) in enumerate(trial_seeds(seed, trees))
    ]
    if is_asynchronous:
        tasks = [run_recovery_trial.delay(*args) for args in arguments]
        results = []
        for trial, task in enumerate(tasks):
            try:
                results.append(task.get())
            except Exception as err:
                logging.error(f"Recovery trial {trial} failed on the worker.")
                raise VaritreeError(f"Recovery trial {trial} failed on the worker: {err}") from err
    else:
        results = map_work_units(lambda args: run_recovery_trial(*args), arguments, threads)
    return [RecoveryRow(**row) for rows in results for row in rows]


def success_rates(rows: Sequence[RecoveryRow]) -> Dict[float, float]:
    """Share of successful trials per sigma, in decreasing sigma order."""
    outcomes: Dict[float, List[bool]] = defaultdict(list)
    for row in rows:
        outcomes[row.sigma].append(row.success)
    return {sigma: sum(outcomes[sigma]) / len(outcomes[sigma]) for sigma in sorted(outcomes, reverse=True)}
