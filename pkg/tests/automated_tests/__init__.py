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

"""Tests run by the pipeline on small trees."""

from . import (
    test_assumption_validator,
    test_cli,
    test_experiment_service,
    test_geometry,
    test_inference,
    test_mappers,
    test_similarity,
    test_tree,
    test_varifold,
    test_velocity,
)
