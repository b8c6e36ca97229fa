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
from typing import List, Sequence

from varitree_core.core.mapper.json_files import PathLike, dump_json, load_json
from varitree_core.dtos import CellDto, CellsDto, CellsDtoSchema
from varitree_core.model.velocity import CellSample
from varitree_core.static.varitree_exception import VaritreeError


def cells_to_dto(cells: Sequence[CellSample]) -> CellsDto:
    if not cells:
        raise VaritreeError("Cannot write an empty cell list.")
    return CellsDto(
        dim=cells[0].dim,
        cells=[CellDto(p=cell.position.tolist(), v=cell.velocity.tolist(), id=cell.cell_id) for cell in cells],
    )


def dto_to_cells(dto: CellsDto) -> List[CellSample]:
    return [CellSample(cell.p, cell.v, cell.id) for cell in dto.cells]


def read_cells(path: PathLike) -> List[CellSample]:
    return dto_to_cells(load_json(path, CellsDtoSchema()))


def write_cells(cells: Sequence[CellSample], path: PathLike):
    dump_json(path, CellsDtoSchema(), cells_to_dto(cells))
