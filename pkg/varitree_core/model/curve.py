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

"""Curve and varifold value objects.

All arrays are copied on construction and marked read-only, so instances can be shared between threads.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from ..static.varitree_exception import VaritreeError
from ..util.utils import read_only

UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class PolygonalCurve:
    """Ordered point list in R^n, oriented in storage order.

    Example:
        >>> PolygonalCurve([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]).dim
        2
    """

    points: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2:
            raise VaritreeError("Curve points must be a list of equally sized vectors.")
        if points.shape[0] < 2:
            raise VaritreeError(f"A curve needs at least 2 points, got {points.shape[0]}.")
        if points.shape[1] < 1:
            raise VaritreeError("Curve points must have a positive dimension.")
        finite = np.isfinite(points).all(axis=1)
        if not finite.all():
            raise VaritreeError(f"Curve point {int(np.argmin(finite))} has non-finite coordinates.")
        lengths = np.linalg.norm(np.diff(points, axis=0), axis=1)
        degenerate = np.flatnonzero(lengths <= 0.0)
        if degenerate.size:
            index = int(degenerate[0])
            raise VaritreeError(f"Curve points {index} and {index + 1} coincide (zero-length segment).")
        object.__setattr__(self, "points", read_only(points))

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def point_count(self) -> int:
        return int(self.points.shape[0])

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]


@dataclass(frozen=True, eq=False)
class VarifoldAtom:
    """One Dirac mass of a discrete oriented varifold: segment midpoint, unit tangent and segment length."""

    center: np.ndarray
    tangent: np.ndarray
    weight: float

    def __post_init__(self):
        center = np.array(self.center, dtype=float)
        tangent = np.array(self.tangent, dtype=float)
        if center.shape != tangent.shape or center.ndim != 1:
            raise VaritreeError("Atom center and tangent must be vectors of the same dimension.")
        if abs(np.linalg.norm(tangent) - 1.0) > UNIT_TOLERANCE:
            raise VaritreeError("Atom tangent must be a unit vector.")
        if not self.weight > 0:
            raise VaritreeError(f"Atom weight must be positive, got {self.weight}.")
        object.__setattr__(self, "center", read_only(center))
        object.__setattr__(self, "tangent", read_only(tangent))
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True, eq=False)
class DiscreteVarifold:
    """Structure-of-arrays storage of varifold atoms.

    ``centers`` and ``tangents`` have shape (k, n), ``weights`` has shape (k,). A varifold with zero atoms
    is only created through :meth:`empty`; it stands for the root path.
    """

    centers: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        centers = np.array(self.centers, dtype=float)
        tangents = np.array(self.tangents, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if centers.ndim != 2 or tangents.shape != centers.shape or weights.shape != (centers.shape[0],):
            raise VaritreeError("Varifold arrays must have shapes (k, n), (k, n) and (k,).")
        if weights.size and not (weights > 0).all():
            raise VaritreeError(f"Varifold atom {int(np.argmax(weights <= 0))} has a non-positive weight.")
        if tangents.size:
            deviation = np.abs(np.linalg.norm(tangents, axis=1) - 1.0)
            if (deviation > UNIT_TOLERANCE).any():
                raise VaritreeError(f"Varifold atom {int(np.argmax(deviation))} has a non-unit tangent.")
        object.__setattr__(self, "centers", read_only(centers))
        object.__setattr__(self, "tangents", read_only(tangents))
        object.__setattr__(self, "weights", read_only(weights))

    @classmethod
    def empty(cls, dim: int) -> "DiscreteVarifold":
        return cls(np.zeros((0, dim)), np.zeros((0, dim)), np.zeros(0))

    @classmethod
    def from_atoms(cls, atoms: List[VarifoldAtom]) -> "DiscreteVarifold":
        if not atoms:
            raise VaritreeError("Use DiscreteVarifold.empty(dim) for a varifold without atoms.")
        return cls(
            np.stack([atom.center for atom in atoms]),
            np.stack([atom.tangent for atom in atoms]),
            np.array([atom.weight for atom in atoms]),
        )

    @property
    def dim(self) -> int:
        return int(self.centers.shape[1])

    @property
    def atom_count(self) -> int:
        return int(self.weights.shape[0])

    @property
    def is_empty(self) -> bool:
        return self.atom_count == 0

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def atoms(self) -> List[VarifoldAtom]:
        return [VarifoldAtom(c, t, w) for c, t, w in zip(self.centers, self.tangents, self.weights)]

    def union(self, other: "DiscreteVarifold") -> "DiscreteVarifold":
        """Concatenate atom lists, the discrete image of mu_{X u Y} = mu_X + mu_Y."""
        if other.dim != self.dim:
            raise VaritreeError(f"Cannot join varifolds of dimension {self.dim} and {other.dim}.")
        return DiscreteVarifold(
            np.concatenate([self.centers, other.centers]),
            np.concatenate([self.tangents, other.tangents]),
            np.concatenate([self.weights, other.weights]),
        )
