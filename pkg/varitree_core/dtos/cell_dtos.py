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

"""Module containing the synthetic cell Dtos and their Schemas."""
from dataclasses import dataclass

import marshmallow as ma

from .base_schema import MaBaseSchema, check_vectors

__all__ = ["CellDto", "CellDtoSchema", "CellsDto", "CellsDtoSchema"]


@dataclass
class CellDto:
    p: list[float]
    v: list[float]
    id: str = ""


@dataclass
class CellsDto:
    dim: int
    cells: list[CellDto]


class CellDtoSchema(MaBaseSchema):
    p = ma.fields.List(ma.fields.Float(allow_nan=True), required=True, metadata={"description": "position"})
    v = ma.fields.List(ma.fields.Float(allow_nan=True), required=True, metadata={"description": "velocity"})
    id = ma.fields.String(required=False, load_default="")

    @ma.post_load
    def make_dto(self, data, **kwargs) -> CellDto:
        return CellDto(**data)


class CellsDtoSchema(MaBaseSchema):
    dim = ma.fields.Integer(required=True, validate=ma.validate.Range(min=1))
    cells = ma.fields.List(ma.fields.Nested(CellDtoSchema()), required=True)

    @ma.validates_schema
    def validate_cells(self, data, **kwargs):
        check_vectors([cell.p for cell in data["cells"]], data["dim"], "cells")
        check_vectors([cell.v for cell in data["cells"]], data["dim"], "cells")

    @ma.post_load
    def make_dto(self, data, **kwargs) -> CellsDto:
        return CellsDto(**data)
