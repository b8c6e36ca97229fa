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

"""Module containing the embedded tree Dtos and their Schemas."""
from dataclasses import dataclass
from typing import Optional

import marshmallow as ma

from .base_schema import MaBaseSchema, check_vectors

__all__ = ["EdgeCurveDto", "EdgeCurveDtoSchema", "TreeDto", "TreeDtoSchema"]


@dataclass
class EdgeCurveDto:
    """Polyline of the edge from_node -> to_node"""

    from_node: int
    to_node: int
    points: list[list[float]]


@dataclass
class TreeDto:
    dim: int
    root: int
    parent: list[Optional[int]]
    positions: list[list[float]]
    edges: list[EdgeCurveDto]


class EdgeCurveDtoSchema(MaBaseSchema):
    from_node = ma.fields.Integer(required=True, data_key="from")
    to_node = ma.fields.Integer(required=True, data_key="to")
    points = ma.fields.List(
        ma.fields.List(ma.fields.Float(allow_nan=True)), required=True, validate=ma.validate.Length(min=2)
    )

    @ma.post_load
    def make_dto(self, data, **kwargs) -> EdgeCurveDto:
        return EdgeCurveDto(**data)


class TreeDtoSchema(MaBaseSchema):
    dim = ma.fields.Integer(required=True, validate=ma.validate.Range(min=2), metadata={"example": 3})
    root = ma.fields.Integer(required=True, metadata={"example": 0})
    parent = ma.fields.List(ma.fields.Integer(allow_none=True), required=True, validate=ma.validate.Length(min=1))
    positions = ma.fields.List(ma.fields.List(ma.fields.Float(allow_nan=True)), required=True)
    edges = ma.fields.List(ma.fields.Nested(EdgeCurveDtoSchema()), required=True)

    @ma.validates_schema
    def validate_tree(self, data, **kwargs):
        if len(data["positions"]) != len(data["parent"]):
            raise ma.ValidationError(
                f"Expected {len(data['parent'])} positions, got {len(data['positions'])}.", "positions"
            )
        check_vectors(data["positions"], data["dim"], "positions")
        for index, edge in enumerate(data["edges"]):
            try:
                check_vectors(edge.points, data["dim"], "points")
            except ma.ValidationError as err:
                raise ma.ValidationError(f"Edge {index}: {err.messages[0]}", "edges") from err
        roots = [node for node, parent in enumerate(data["parent"]) if parent is None]
        if roots != [data["root"]]:
            raise ma.ValidationError(f"Parent list marks {roots} as roots, expected [{data['root']}].", "parent")

    @ma.post_load
    def make_dto(self, data, **kwargs) -> TreeDto:
        return TreeDto(**data)
