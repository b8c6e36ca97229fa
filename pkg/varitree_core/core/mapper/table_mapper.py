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
import dataclasses
from typing import List, Sequence

import numpy as np
import pandas as pd

from varitree_core.core.mapper.json_files import PathLike
from varitree_core.model.inference import RecoveryRow
from varitree_core.model.similarity import SimilarityMatrix, SweepRow
from varitree_core.static.varitree_exception import VaritreeError

"""CSV tables: square matrices with a header row of ids, and row tables of sweeps and experiments"""


def write_square(values: np.ndarray, ids: Sequence[str], path: PathLike):
    pd.DataFrame(values, columns=list(ids)).to_csv(path, index=False)


def read_square(path: PathLike):
    """Header ids and the float matrix of a square CSV."""
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise VaritreeError(f"Could not read '{path}': {err}") from err
    ids = tuple(frame.iloc[0])
    try:
        values = frame.iloc[1:].to_numpy(dtype=float)
    except ValueError as err:
        raise VaritreeError(f"Matrix '{path}' has a non-numeric entry: {err}") from err
    if values.shape != (len(ids), len(ids)):
        raise VaritreeError(f"Matrix '{path}' is not square: {len(ids)} ids, {values.shape[0]} rows.")
    return ids, values


def write_matrix(m: SimilarityMatrix, path: PathLike):
    write_square(m.values, m.node_ids, path)


def read_matrix(path: PathLike) -> SimilarityMatrix:
    ids, values = read_square(path)
    return SimilarityMatrix(values, ids)


def write_sweep(rows: Sequence[SweepRow], path: PathLike):
    columns = [item.name for item in dataclasses.fields(SweepRow)]
    frame = pd.DataFrame([dataclasses.asdict(row) for row in rows], columns=columns)
    frame.to_csv(path, index=False)


def write_experiment(rows: Sequence[RecoveryRow], path: PathLike):
    columns = [item.name for item in dataclasses.fields(RecoveryRow)]
    frame = pd.DataFrame([dataclasses.asdict(row) for row in rows], columns=columns)
    frame.to_csv(path, index=False)


def _read_rows(path: PathLike, columns: Sequence[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise VaritreeError(f"Could not read '{path}': {err}") from err
    if list(frame.columns) != list(columns):
        raise VaritreeError(f"Table '{path}' has columns {list(frame.columns)}, expected {list(columns)}.")
    return frame


def read_sweep(path: PathLike) -> List[SweepRow]:
    columns = [item.name for item in dataclasses.fields(SweepRow)]
    frame = _read_rows(path, columns)
    return [SweepRow(**{key: float(value) for key, value in record.items()}) for record in frame.to_dict("records")]


def read_experiment(path: PathLike) -> List[RecoveryRow]:
    frame = _read_rows(path, [item.name for item in dataclasses.fields(RecoveryRow)])
    return [
        RecoveryRow(
            trial=int(record["trial"]),
            sigma=float(record["sigma"]),
            success=str(record["success"]) == "True",
            four_point_defect=float(record["four_point_defect"]),
        )
        for record in frame.to_dict("records")
    ]
