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
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .curve import PolygonalCurve
from ..static.enums.cell_placement import CellPlacement
from ..static.enums.termination_cause import TerminationCause
from ..static.varitree_exception import VaritreeError
from ..util.utils import read_only


@dataclass(frozen=True, eq=False)
class CellSample:
    """A synthetic cell: expression-space position and velocity."""

    position: np.ndarray
    velocity: np.ndarray
    cell_id: str = ""

    def __post_init__(self):
        position = np.array(self.position, dtype=float)
        velocity = np.array(self.velocity, dtype=float)
        if position.ndim != 1 or position.shape != velocity.shape:
            raise VaritreeError(f"Cell '{self.cell_id}' needs position and velocity vectors of equal dimension.")
        if not (np.isfinite(position).all() and np.isfinite(velocity).all()):
            raise VaritreeError(f"Cell '{self.cell_id}' has non-finite entries.")
        if not np.linalg.norm(velocity) > 0:
            raise VaritreeError(f"Cell '{self.cell_id}' has a zero velocity.")
        object.__setattr__(self, "position", read_only(position))
        object.__setattr__(self, "velocity", read_only(velocity))
        object.__setattr__(self, "cell_id", str(self.cell_id))

    @property
    def dim(self) -> int:
        return int(self.position.shape[0])


@dataclass(frozen=True, eq=False)
class VectorFieldModel:
    """Discrete velocity field, interpolated with a Gaussian kernel of scale ``bandwidth``."""

    cells: Tuple[CellSample, ...]
    bandwidth: float
    positions: np.ndarray = field(init=False, repr=False)
    velocities: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cells = tuple(self.cells)
        if not cells:
            raise VaritreeError("A vector field model needs at least one cell.")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise VaritreeError(f"Interpolation bandwidth must be positive, got {self.bandwidth}.")
        dims = {cell.dim for cell in cells}
        if len(dims) != 1:
            raise VaritreeError(f"All cells must share one dimension, got {sorted(dims)}.")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))
        object.__setattr__(self, "positions", read_only(np.stack([cell.position for cell in cells])))
        object.__setattr__(self, "velocities", read_only(np.stack([cell.velocity for cell in cells])))

    @property
    def dim(self) -> int:
        return self.cells[0].dim


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of the synthetic velocity pipeline.

    ``bandwidth`` and ``capture_radius`` default to the integration step and twice the step.
    """

    per_edge: int = 50
    noise_pos: float = 0.0
    noise_vel: float = 0.0
    speed: float = 1.0
    step: float = 0.02
    max_steps: int = 5000
    bandwidth: Optional[float] = None
    capture_radius: Optional[float] = None
    placement: CellPlacement = CellPlacement.NODES
    seed: int = 0

    def __post_init__(self):
        if self.per_edge < 1:
            raise VaritreeError(f"At least one cell per edge is needed, got {self.per_edge}.")
        if self.noise_pos < 0 or self.noise_vel < 0:
            raise VaritreeError("Noise levels must be non-negative.")
        if not self.speed > 0:
            raise VaritreeError(f"Cell speed must be positive, got {self.speed}.")
        if not self.step > 0:
            raise VaritreeError(f"Integration step must be positive, got {self.step}.")
        if self.max_steps < 1:
            raise VaritreeError(f"The step limit must be positive, got {self.max_steps}.")
        object.__setattr__(self, "placement", CellPlacement(self.placement))

    @property
    def resolved_bandwidth(self) -> float:
        return self.bandwidth if self.bandwidth is not None else self.step

    @property
    def resolved_capture_radius(self) -> float:
        return self.capture_radius if self.capture_radius is not None else 2 * self.step


@dataclass(frozen=True)
class TraceResult:
    """Backward integration outcome for one cell; ``curve`` is oriented root -> cell and None on failure."""

    cell_id: str
    cause: TerminationCause
    steps: int
    curve: Optional[PolygonalCurve] = None

    @property
    def succeeded(self) -> bool:
        return self.cause.is_success
