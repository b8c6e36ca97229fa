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

"""Module containing default config values."""
from logging import INFO, WARNING

from .celery_config import CELERY_PRODUCTION_CONFIG


class ProductionConfig:
    ENV = "production"

    DEBUG = False
    TESTING = False

    LOG_CONFIG = None  # if set this is preferred

    DEFAULT_LOG_SEVERITY = WARNING
    DEFAULT_LOG_FORMAT_STYLE = "{"
    DEFAULT_LOG_FORMAT = (
        "{asctime} [{levelname:^7}] [{module:<15}] {message:<175}    <{funcName}, {lineno}; {pathname}>"
    )
    DEFAULT_LOG_DATE_FORMAT = None

    # kernel bandwidths used when --sigma-x / --sigma-t are omitted
    DEFAULT_SIGMA_X = 0.05
    DEFAULT_SIGMA_T = 0.05

    # geometric ladder sigma_k = sigma_0 * 2^-k used by the convergence sweep
    DEFAULT_SIGMA_0 = 0.4
    DEFAULT_LADDER_RUNGS = 5
    DEFAULT_SIGMA_RATIO = 1.0

    DEFAULT_THREADS = 1
    DEFAULT_SAMPLING_STEP = 0.05
    DEFAULT_VALIDATOR_SAMPLES = 50

    # velocity demo
    DEFAULT_INTEGRATION_STEP = 0.02
    DEFAULT_MAX_STEPS = 5000
    DEFAULT_MAX_FAILURE_FRACTION = 0.1

    # seconds a celery worker may spend on one recovery trial; None disables the limit
    TRIAL_TIME_LIMIT = 30 * 60

    CELERY = CELERY_PRODUCTION_CONFIG


class DebugConfig(ProductionConfig):
    ENV = "development"
    DEBUG = True

    CELERY = CELERY_PRODUCTION_CONFIG

    DEFAULT_LOG_SEVERITY = INFO
