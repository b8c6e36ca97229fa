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
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from varitree_core.core import geometry
from varitree_core.model.curve import DiscreteVarifold, PolygonalCurve
from varitree_core.model.deformation import SinusoidalDeformation
from varitree_core.model.kernel import KernelParams
from varitree_core.static.varitree_exception import VaritreeError
from varitree_core.util.parallel import map_work_units

"""Kernel inner products, norms, squared distances and Gram matrices of discrete oriented varifolds"""

# rows of the left operand evaluated per kernel block, bounds memory to BLOCK_ROWS x atoms(b)
BLOCK_ROWS = 1024
NEGATIVITY_TOLERANCE = 1e-9


def _order_key(a: DiscreteVarifold) -> Tuple[int, bytes, bytes, bytes]:
    return a.atom_count, a.centers.tobytes(), a.tangents.tobytes(), a.weights.tobytes()


def _check_dims(a: DiscreteVarifold, b: DiscreteVarifold):
    if a.dim != b.dim:
        raise VaritreeError(f"Varifold dimensions differ: {a.dim} vs {b.dim}.")


def inner(a: DiscreteVarifold, b: DiscreteVarifold, k: KernelParams) -> float:
    """Sum over atom pairs of w_i w_j exp(-|c_i - c_j|^2 / sigma_x^2) exp(-|t_i - t_j|^2 / sigma_t^2).

    Operands are put into a canonical order first, so ``inner(a, b) == inner(b, a)`` holds bit for bit.
    Rows are accumulated block by block in index order.
    """
    _check_dims(a, b)
    if a.is_empty or b.is_empty:
        return 0.0
    if _order_key(a) > _order_key(b):
        a, b = b, a
    total = 0.0
    for start in range(0, a.atom_count, BLOCK_ROWS):
        stop = start + BLOCK_ROWS
        exponent = cdist(a.centers[start:stop], b.centers, "sqeuclidean") / k.sigma_x**2
        exponent += cdist(a.tangents[start:stop], b.tangents, "sqeuclidean") / k.sigma_t**2
        total += float(a.weights[start:stop] @ np.exp(-exponent) @ b.weights)
    return total


def norm_sq(a: DiscreteVarifold, k: KernelParams) -> float:
    return inner(a, a, k)


def distance_sq(
    a: DiscreteVarifold,
    b: DiscreteVarifold,
    k: KernelParams,
    norm_a: Optional[float] = None,
    norm_b: Optional[float] = None,
) -> float:
    """Squared kernel distance through the polarization identity.

    Cached norms may be passed in; small negative values from cancellation are clamped to 0.
    """
    _check_dims(a, b)
    norm_a = norm_sq(a, k) if norm_a is None else norm_a
    norm_b = norm_sq(b, k) if norm_b is None else norm_b
    value = norm_a + norm_b - 2.0 * inner(a, b, k)
    if value < 0.0:
        if -value > NEGATIVITY_TOLERANCE * (norm_a + norm_b):
            raise VaritreeError(
                f"Squared distance {value:g} is negative beyond tolerance; the kernel evaluation is inconsistent."
            )
        return 0.0
    return value


def gram(curves: Sequence[DiscreteVarifold], k: KernelParams, threads: int = 1) -> np.ndarray:
    """Matrix of pairwise inner products; the upper triangle is computed and mirrored."""
    if not curves:
        raise VaritreeError("A Gram matrix needs at least one varifold.")
    dims = {curve.dim for curve in curves}
    if len(dims) != 1:
        raise VaritreeError(f"All varifolds must share one dimension, got {sorted(dims)}.")
    pairs: List[Tuple[int, int]] = [(i, j) for i in range(len(curves)) for j in range(i, len(curves))]
    values = map_work_units(lambda pair: inner(curves[pair[0]], curves[pair[1]], k), pairs, threads)
    matrix = np.zeros((len(curves), len(curves)))
    for (i, j), value in zip(pairs, values):
        matrix[i, j] = matrix[j, i] = value
    return matrix


def robustness_probe(
    x: PolygonalCurve, y: PolygonalCurve, deformation: SinusoidalDeformation, k: KernelParams
) -> Tuple[float, float]:
    """Return (d^2(X, phi.Y), d^2(X, Y)); the two converge as the deformation amplitude goes to 0."""
    reference = geometry.to_varifold(x)
    norm_x = norm_sq(reference, k)
    deformed = distance_sq(reference, geometry.to_varifold(deformation.apply(y)), k, norm_a=norm_x)
    undeformed = distance_sq(reference, geometry.to_varifold(y), k, norm_a=norm_x)
    return deformed, undeformed
