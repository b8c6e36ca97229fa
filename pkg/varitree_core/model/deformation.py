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
from dataclasses import dataclass

import numpy as np

from .curve import PolygonalCurve
from ..static.varitree_exception import VaritreeError
from ..util.utils import read_only


@dataclass(frozen=True, eq=False)
class SinusoidalDeformation:
    """Smooth displacement field phi(x) = x + amplitude * sin(pi * <wave_vector, x>) * direction.

    ``sup_displacement`` bounds ||phi - id|| and ``jacobian_bound`` bounds ||d(phi) - I||; kernel distances
    are robust to phi when sigma_x dominates the first and sigma_t the second.
    """

    amplitude: float
    wave_vector: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        wave_vector = np.array(self.wave_vector, dtype=float)
        direction = np.array(self.direction, dtype=float)
        if wave_vector.ndim != 1 or wave_vector.shape != direction.shape:
            raise VaritreeError("Deformation wave vector and direction must be vectors of equal dimension.")
        norm = np.linalg.norm(direction)
        if not norm > 0:
            raise VaritreeError("Deformation direction must be non-zero.")
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise VaritreeError(f"Deformation amplitude must be a non-negative number, got {self.amplitude}.")
        object.__setattr__(self, "wave_vector", read_only(wave_vector))
        object.__setattr__(self, "direction", read_only(direction / norm))
        object.__setattr__(self, "amplitude", float(self.amplitude))

    @classmethod
    def along_axis(cls, amplitude: float, dim: int, frequency: float = 1.0, axis: int = 0, direction_axis: int = 1):
        """Wave travelling along ``axis``, displacing along ``direction_axis`` (transverse for 2 distinct axes)."""
        wave_vector = np.zeros(dim)
        wave_vector[axis % dim] = frequency
        direction = np.zeros(dim)
        direction[direction_axis % dim] = 1.0
        return cls(amplitude, wave_vector, direction)

    @property
    def dim(self) -> int:
        return int(self.direction.shape[0])

    @property
    def sup_displacement(self) -> float:
        return self.amplitude

    @property
    def jacobian_bound(self) -> float:
        return self.amplitude * math.pi * float(np.linalg.norm(self.wave_vector))

    def apply(self, curve: PolygonalCurve) -> PolygonalCurve:
        """Move every vertex of the curve through phi."""
        if curve.dim != self.dim:
            raise VaritreeError(f"Deformation of dimension {self.dim} cannot act on a curve of dimension {curve.dim}.")
        phase = np.sin(math.pi * (curve.points @ self.wave_vector))
        return PolygonalCurve(curve.points + self.amplitude * phase[:, None] * self.direction[None, :])
