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

"""Module containing the curve Dto and its Schema."""
from dataclasses import dataclass

import marshmallow as ma

from .base_schema import MaBaseSchema, check_vectors

__all__ = ["CurveDto", "CurveDtoSchema"]


@dataclass
class CurveDto:
    dim: int
    points: list[list[float]]


class CurveDtoSchema(MaBaseSchema):
    dim = ma.fields.Integer(required=True, validate=ma.validate.Range(min=1), metadata={"example": 2})
    points = ma.fields.List(
        ma.fields.List(ma.fields.Float(allow_nan=True)),
        required=True,
        validate=ma.validate.Length(min=2),
        metadata={"example": [[0.0, 0.0], [1.0, 0.0]]},
    )

    @ma.validates_schema
    def validate_points(self, data, **kwargs):
        check_vectors(data["points"], data["dim"], "points")

    @ma.post_load
    def make_dto(self, data, **kwargs) -> CurveDto:
        return CurveDto(**data)
