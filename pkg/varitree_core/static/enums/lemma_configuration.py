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


class LemmaConfiguration(StrEnum):
    """Enum for the two edge configurations whose cross inner product vanishes asymptotically

    Values:
        CHAIN: Consecutive edges (i, j) and (j, k) of one root-to-leaf path
        BRANCHING: Sibling edges (i, j) and (i, k) leaving the same branching node
    """

    CHAIN = "CHAIN"
    BRANCHING = "BRANCHING"
