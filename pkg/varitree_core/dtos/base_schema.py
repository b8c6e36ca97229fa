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

"""Base schema and shared field validation for the JSON file formats."""
import math
from typing import Any, List, Sequence

import marshmallow as ma

__all__ = ["MaBaseSchema", "camelcase", "check_vectors"]


def camelcase(s: str) -> str:
    """Turn a string from python snake_case into camelCase."""
    parts = iter(s.split("_"))
    return next(parts) + "".join(i.title() for i in parts)


class MaBaseSchema(ma.Schema):
    """Base schema that changes python snake case to camelCase in json."""

    def on_bind_field(self, field_name: str, field_obj: ma.fields.Field):
        field_obj.data_key = camelcase(field_obj.data_key or field_name)


def check_vectors(vectors: Sequence[Sequence[Any]], dim: int, field_name: str) -> List[List[float]]:
    """Every vector must have ``dim`` finite entries; the error names the first offending index."""
    for index, vector in enumerate(vectors):
        if len(vector) != dim:
            raise ma.ValidationError(f"Entry {index} has {len(vector)} coordinates, expected {dim}.", field_name)
        if not all(math.isfinite(value) for value in vector):
            raise ma.ValidationError(f"Entry {index} has a non-finite coordinate.", field_name)
    return [[float(value) for value in vector] for vector in vectors]
