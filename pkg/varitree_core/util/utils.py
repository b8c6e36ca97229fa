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
import os


def is_running_asynchronously() -> bool:
    return os.environ.get("EXECUTE_CELERY_TASK_ASYNCHRONOUS") == "True"


def read_only(array):
    """Mark a numpy array as immutable and return it."""
    array.setflags(write=False)
    return array
