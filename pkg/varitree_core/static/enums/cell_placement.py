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

from enum import StrEnum


class CellPlacement(StrEnum):
    """Enum for where synthetic cells are sampled on an embedded tree

    Values:
        EDGES: Cells at uniform arc-length stations of every edge, every cell is traced
        NODES: Station cells plus one cell at every non-root node, only the node cells are traced
    """

    EDGES = "EDGES"
    NODES = "NODES"
