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
import json
from pathlib import Path
from typing import Any, Union

import marshmallow as ma

from varitree_core.static.varitree_exception import VaritreeError

"""Shared JSON file handling for the mappers; schema errors become VaritreeError naming the field."""

PathLike = Union[str, Path]


def load_json(path: PathLike, schema: ma.Schema) -> Any:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise VaritreeError(f"Could not read '{path}': {err}") from err
    try:
        return schema.load(raw)
    except ma.ValidationError as err:
        raise VaritreeError(f"Invalid file '{path}': {json.dumps(err.messages, sort_keys=True)}") from err


def dump_json(path: PathLike, schema: ma.Schema, dto: Any):
    Path(path).write_text(json.dumps(schema.dump(dto), indent=2) + "\n", encoding="utf-8")
