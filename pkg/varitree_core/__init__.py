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

"""Root module containing the flask app factory and the command line entry point."""

from json import load as load_json
from logging import WARNING, Formatter, Handler, Logger, getLogger
from logging.config import dictConfig
from os import environ, makedirs
from pathlib import Path
from typing import Any, Dict, Optional, cast

import click
from flask.app import Flask
from flask.cli import FlaskGroup
from flask.logging import default_handler
from tomli import load as load_toml

from . import celery, cli as cli_commands, core, util
from .model.kernel import KernelParams
from .static.varitree_exception import VaritreeError
from .util.config import DebugConfig, ProductionConfig

# change this to change the flask app name and the config env var prefix
# must not contain any spaces!
APP_NAME = __name__
CONFIG_ENV_VAR_PREFIX = APP_NAME.upper().replace("-", "_").replace(" ", "_")


def _update_celery_config(config, key: str, value: str):
    celery_conf = config.get("CELERY", {})
    celery_conf[key] = value
    config["CELERY"] = celery_conf


def _check_numerical_defaults(config):
    """Raise on configured numerical defaults that every command would reject later."""
    if "DEFAULT_SIGMA_X" in config:
        KernelParams(config["DEFAULT_SIGMA_X"], config["DEFAULT_SIGMA_T"])
    if "DEFAULT_SIGMA_0" in config:
        core.similarity.sigma_ladder(config["DEFAULT_SIGMA_0"], config["DEFAULT_LADDER_RUNGS"])
    if config.get("DEFAULT_THREADS", 1) < 1:
        raise VaritreeError(f"DEFAULT_THREADS must be at least 1, got {config['DEFAULT_THREADS']}.")
    fraction = config.get("DEFAULT_MAX_FAILURE_FRACTION", 0.0)
    if not 0 <= fraction <= 1:
        raise VaritreeError(f"DEFAULT_MAX_FAILURE_FRACTION must lie in [0, 1], got {fraction}.")


def create_app(test_config: Optional[Dict[str, Any]] = None):
    """Flask app factory."""
    instance_path: str | None = environ.get("INSTANCE_PATH", None)
    if instance_path:
        if Path(instance_path).is_file():
            instance_path = None

    app = Flask(APP_NAME, instance_relative_config=True, instance_path=instance_path)

    # load defaults
    config = app.config
    flask_debug: bool = (
        config.get("DEBUG", False) or environ.get("FLASK_ENV", "production").lower() == "development"
    )  # noqa
    if flask_debug:
        config.from_object(DebugConfig)
    elif test_config is None:
        # only load production defaults if no special test config is given
        config.from_object(ProductionConfig)

    if test_config is None:
        # load the instance config, if it exists, when not testing
        config.from_pyfile("config.py", silent=True)
        config.from_file("config.json", load=load_json, silent=True)
        config.from_file("config.toml", load=load_toml, silent=True)
        # load config from file specified in env var
        config.from_envvar(f"{CONFIG_ENV_VAR_PREFIX}_SETTINGS", silent=True)

        if "BROKER_URL" in environ:
            _update_celery_config(config, "broker_url", environ["BROKER_URL"])
            _update_celery_config(config, "result_backend", environ["BROKER_URL"])
        if "RESULT_BACKEND" in environ:
            _update_celery_config(config, "result_backend", environ["RESULT_BACKEND"])
        if "CELERY_QUEUE" in environ:
            _update_celery_config(config, "task_default_queue", environ["CELERY_QUEUE"])
    else:
        config.from_mapping(test_config)

    # Configure logging
    log_config = cast(Optional[Dict[Any, Any]], config.get("LOG_CONFIG"))
    if log_config:
        dictConfig(log_config)
    else:
        log_severity = max(0, config.get("DEFAULT_LOG_SEVERITY", WARNING))
        log_format_style = cast(str, config.get("DEFAULT_LOG_FORMAT_STYLE", "%"))
        log_format = cast(Optional[str], config.get("DEFAULT_LOG_FORMAT"))
        date_format = cast(Optional[str], config.get("DEFAULT_LOG_DATE_FORMAT"))
        if log_format:
            formatter = Formatter(log_format, style=log_format_style, datefmt=date_format)
            default_logging_handler = cast(Handler, default_handler)
            default_logging_handler.setFormatter(formatter)
            default_logging_handler.setLevel(log_severity)
            root = getLogger()
            root.addHandler(default_logging_handler)
            root.setLevel(log_severity)
            app.logger.removeHandler(default_logging_handler)

    _check_numerical_defaults(config)

    logger: Logger = app.logger
    logger.info(
        f"Configuration loaded. Possible config locations are: 'config.py', 'config.json', 'config.toml', "
        f"Environment: '{CONFIG_ENV_VAR_PREFIX}_SETTINGS'"
    )

    try:
        makedirs(app.instance_path, exist_ok=True)
    except OSError:
        pass

    celery.register_celery(app)

    cli_commands.register_cli_blueprint(app)

    return app


@click.group(cls=FlaskGroup, create_app=create_app, add_default_commands=False)
def cli():
    """Varifold distances between tree paths: generate, compare and reconstruct trees."""
    pass
