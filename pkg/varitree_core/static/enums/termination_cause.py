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


class TerminationCause(StrEnum):
    """Enum to save why a backward integration stopped

    Values:
        CAPTURED: The trajectory entered the capture ball around the root
        IMMEDIATE_CAPTURE: The start point already was inside the capture ball (degenerate curve)
        MAX_STEPS: The step limit was reached without capture
        STALLED: The interpolated field vanished (kernel weights underflowed) or a step made no progress
    """

    CAPTURED = "CAPTURED"
    IMMEDIATE_CAPTURE = "IMMEDIATE_CAPTURE"
    MAX_STEPS = "MAX_STEPS"
    STALLED = "STALLED"

    @property
    def is_success(self) -> bool:
        return self in (TerminationCause.CAPTURED, TerminationCause.IMMEDIATE_CAPTURE)
