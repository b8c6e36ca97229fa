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

from celery import Celery, Task
from flask.app import Flask

from .util import logging


class FlaskTask(Task):
    def __call__(self, *args, **kwargs):
        with self.app.flask_app.app_context():
            return self.run(*args, **kwargs)

    def on_failure(self, exc, task_id, args, kwargs, einfo):
        # trial index first, see experiment_service.run_recovery_trial
        trial = args[0] if args else kwargs.get("trial")
        logging.warn(f"Task {self.name} [{task_id}] for trial {trial} failed: {exc!r}")


CELERY = Celery(
    __name__,
    flask_app=None,
    task_cls=FlaskTask,
)


def register_celery(app: Flask):
    """Load the celery config from the app instance; trials get a hard limit from TRIAL_TIME_LIMIT."""
    CELERY.conf.update(app.config.get("CELERY", {}))
    time_limit = app.config.get("TRIAL_TIME_LIMIT")
    if time_limit:
        CELERY.conf.update(task_time_limit=time_limit, task_soft_time_limit=0.9 * time_limit)
    CELERY.flask_app = app
