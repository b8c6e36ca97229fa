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

from ..static.varitree_exception import VaritreeError


@dataclass(frozen=True)
class KernelParams:
    """Bandwidths of the separable Gaussian kernel.

    ``sigma_x`` is the position scale in ambient units, ``sigma_t`` the tangent scale on the unit sphere.
    """

    sigma_x: float
    sigma_t: float

    def __post_init__(self):
        for name in ("sigma_x", "sigma_t"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise VaritreeError(f"Kernel bandwidth {name} must be positive and finite, got {value}.")
        object.__setattr__(self, "sigma_x", float(self.sigma_x))
        object.__setattr__(self, "sigma_t", float(self.sigma_t))

    @classmethod
    def coupled(cls, sigma: float, ratio: float = 1.0) -> "KernelParams":
        """Bandwidths with sigma_t = ratio * sigma_x."""
        return cls(sigma_x=sigma, sigma_t=ratio * sigma)
