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
from varitree_core.core.mapper.json_files import PathLike, dump_json, load_json
from varitree_core.dtos import CurveDto, CurveDtoSchema
from varitree_core.model.curve import PolygonalCurve


def curve_to_dto(curve: PolygonalCurve) -> CurveDto:
    return CurveDto(dim=curve.dim, points=curve.points.tolist())


def dto_to_curve(dto: CurveDto) -> PolygonalCurve:
    return PolygonalCurve(dto.points)


def read_curve(path: PathLike) -> PolygonalCurve:
    return dto_to_curve(load_json(path, CurveDtoSchema()))


def write_curve(curve: PolygonalCurve, path: PathLike):
    dump_json(path, CurveDtoSchema(), curve_to_dto(curve))
