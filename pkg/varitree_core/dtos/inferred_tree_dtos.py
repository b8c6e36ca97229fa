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

"""Module containing the inferred tree Dtos and their Schemas."""
from dataclasses import dataclass

import marshmallow as ma

from .base_schema import MaBaseSchema

__all__ = ["WeightedEdgeDto", "WeightedEdgeDtoSchema", "InferredTreeDto", "InferredTreeDtoSchema"]


@dataclass
class WeightedEdgeDto:
    from_node: str
    to_node: str
    weight: float


@dataclass
class InferredTreeDto:
    root: str
    node_ids: list[str]
    edges: list[WeightedEdgeDto]


class WeightedEdgeDtoSchema(MaBaseSchema):
    from_node = ma.fields.String(required=True, data_key="from")
    to_node = ma.fields.String(required=True, data_key="to")
    weight = ma.fields.Float(required=True, validate=ma.validate.Range(min=0, min_inclusive=False))

    @ma.post_load
    def make_dto(self, data, **kwargs) -> WeightedEdgeDto:
        return WeightedEdgeDto(**data)


class InferredTreeDtoSchema(MaBaseSchema):
    root = ma.fields.String(required=True, metadata={"example": "0"})
    node_ids = ma.fields.List(ma.fields.String(), required=True, validate=ma.validate.Length(min=1))
    edges = ma.fields.List(ma.fields.Nested(WeightedEdgeDtoSchema()), required=True)

    @ma.post_load
    def make_dto(self, data, **kwargs) -> InferredTreeDto:
        return InferredTreeDto(**data)
