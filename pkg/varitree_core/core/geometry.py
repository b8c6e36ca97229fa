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

import numpy as np

from varitree_core.model.curve import DiscreteVarifold, PolygonalCurve
from varitree_core.static.varitree_exception import VaritreeError

"""Curve primitives: arc length, resampling, concatenation, subcurves and conversion to varifold atoms"""

JUNCTION_TOLERANCE = 1e-9
STATION_TOLERANCE = 1e-12


def segment_lengths(curve: PolygonalCurve) -> np.ndarray:
    return np.linalg.norm(np.diff(curve.points, axis=0), axis=1)


def arc_length(curve: PolygonalCurve) -> float:
    return float(segment_lengths(curve).sum())


def stations(curve: PolygonalCurve) -> np.ndarray:
    """Arc-length coordinate of every vertex, starting at 0."""
    return np.concatenate([[0.0], np.cumsum(segment_lengths(curve))])


def to_varifold(curve: PolygonalCurve) -> DiscreteVarifold:
    """Midpoint quadrature: one atom per segment with center, unit tangent and length.

    Example:
        >>> to_varifold(PolygonalCurve([[0, 0], [2, 0]])).weights
        array([2.])
    """
    directions = np.diff(curve.points, axis=0)
    lengths = np.linalg.norm(directions, axis=1)
    if not (lengths > 0).all():
        raise VaritreeError(f"Segment {int(np.argmin(lengths))} has zero length.")
    centers = 0.5 * (curve.points[:-1] + curve.points[1:])
    return DiscreteVarifold(centers, directions / lengths[:, None], lengths)


def reverse(curve: PolygonalCurve) -> PolygonalCurve:
    return PolygonalCurve(curve.points[::-1])


def resample(curve: PolygonalCurve, step: float) -> PolygonalCurve:
    """Subdivide every segment evenly so that consecutive points are at most ``step`` apart.

    Original vertices are kept, which makes the arc length invariant.
    """
    if not step > 0:
        raise VaritreeError(f"Resampling step must be positive, got {step}.")
    pieces = [curve.points[:1]]
    for start, end, length in zip(curve.points[:-1], curve.points[1:], segment_lengths(curve)):
        count = max(1, math.ceil(length / step))
        fractions = np.arange(1, count + 1)[:, None] / count
        inserted = start + fractions * (end - start)
        # the vertex itself, not an interpolated copy
        inserted[-1] = end
        pieces.append(inserted)
    return PolygonalCurve(np.concatenate(pieces))


def concat(a: PolygonalCurve, b: PolygonalCurve) -> PolygonalCurve:
    if a.dim != b.dim:
        raise VaritreeError(f"Cannot concatenate curves of dimension {a.dim} and {b.dim}.")
    gap = float(np.linalg.norm(a.end - b.start))
    if gap > JUNCTION_TOLERANCE:
        raise VaritreeError(f"Curves do not meet: junction gap {gap:g} exceeds {JUNCTION_TOLERANCE:g}.")
    return PolygonalCurve(np.concatenate([a.points, b.points[1:]]))


def point_at(curve: PolygonalCurve, s: float) -> np.ndarray:
    """Point at arc-length station ``s``; stations within tolerance of a vertex return the vertex exactly."""
    cumulative = stations(curve)
    total = cumulative[-1]
    tolerance = STATION_TOLERANCE * total
    if s <= tolerance:
        return curve.points[0].copy()
    if s >= total - tolerance:
        return curve.points[-1].copy()
    index = int(np.searchsorted(cumulative, s, side="right")) - 1
    index = min(max(index, 0), curve.point_count - 2)
    if s - cumulative[index] <= tolerance:
        return curve.points[index].copy()
    if cumulative[index + 1] - s <= tolerance:
        return curve.points[index + 1].copy()
    fraction = (s - cumulative[index]) / (cumulative[index + 1] - cumulative[index])
    return curve.points[index] + fraction * (curve.points[index + 1] - curve.points[index])


def tangent_at(curve: PolygonalCurve, s: float) -> np.ndarray:
    """Unit tangent of the segment containing station ``s`` (the following segment at interior vertices)."""
    cumulative = stations(curve)
    index = int(np.searchsorted(cumulative, s, side="right")) - 1
    index = min(max(index, 0), curve.point_count - 2)
    direction = curve.points[index + 1] - curve.points[index]
    return direction / np.linalg.norm(direction)


def subcurve(curve: PolygonalCurve, s0: float, s1: float) -> PolygonalCurve:
    """Portion of the curve between stations ``s0`` and ``s1`` with interpolated endpoints."""
    cumulative = stations(curve)
    total = cumulative[-1]
    tolerance = STATION_TOLERANCE * total
    if s1 > total and s1 - total <= tolerance:
        s1 = total
    if not (0 <= s0 < s1 <= total):
        raise VaritreeError(f"Subcurve stations must satisfy 0 <= s0 < s1 <= {total:g}, got [{s0:g}, {s1:g}].")
    inner = (cumulative > s0 + tolerance) & (cumulative < s1 - tolerance)
    points = np.concatenate([[point_at(curve, s0)], curve.points[inner], [point_at(curve, s1)]])
    return PolygonalCurve(points)


def _point_segment_distances(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    """Distance of every point to the closest segment of ``polyline``; shape (len(points),)."""
    starts = polyline[:-1]
    directions = polyline[1:] - starts
    squared = np.einsum("ij,ij->i", directions, directions)
    offsets = points[:, None, :] - starts[None, :, :]
    projection = np.einsum("pij,ij->pi", offsets, directions) / squared[None, :]
    projection = np.clip(projection, 0.0, 1.0)
    closest = starts[None, :, :] + projection[:, :, None] * directions[None, :, :]
    return np.sqrt(((points[:, None, :] - closest) ** 2).sum(axis=2)).min(axis=1)


def directed_hausdorff(a: PolygonalCurve, b: PolygonalCurve) -> float:
    """Largest distance from a vertex of ``a`` to the polyline ``b``."""
    return float(_point_segment_distances(a.points, b.points).max())


def hausdorff_distance(a: PolygonalCurve, b: PolygonalCurve) -> float:
    """Symmetric vertex-to-polyline Hausdorff distance."""
    if a.dim != b.dim:
        raise VaritreeError(f"Cannot compare curves of dimension {a.dim} and {b.dim}.")
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def polyline_clearance(a: PolygonalCurve, b: PolygonalCurve) -> float:
    """Minimum distance between two polylines, measured from the vertices of each to the other."""
    return float(
        min(_point_segment_distances(a.points, b.points).min(), _point_segment_distances(b.points, a.points).min())
    )


def sample_points(curve: PolygonalCurve, s: np.ndarray) -> np.ndarray:
    """Points at an array of arc-length stations; shape (len(s), dim)."""
    cumulative = stations(curve)
    return np.stack([np.interp(s, cumulative, curve.points[:, axis]) for axis in range(curve.dim)], axis=1)


def sample_tangents(curve: PolygonalCurve, s: np.ndarray) -> np.ndarray:
    """Unit tangents at an array of stations, using the following segment at interior vertices."""
    cumulative = stations(curve)
    index = np.clip(np.searchsorted(cumulative, s, side="right") - 1, 0, curve.point_count - 2)
    directions = np.diff(curve.points, axis=0)
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    return directions[index]
