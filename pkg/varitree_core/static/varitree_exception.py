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

"""File to store all custom exceptions used in varitree"""
import click

DATA_ERROR_EXIT_CODE = 1


class VaritreeError(click.ClickException):
    """General Exception raised for invalid data or failed computations in varitree.

    Subclassing ``click.ClickException`` lets the command line report the message and exit with
    ``exit_code`` (1 for data and runtime errors) without any extra handling in the commands.
    """

    def __init__(self, msg: str, exit_code: int = DATA_ERROR_EXIT_CODE):
        if not msg:
            msg = "Unknown varitree error"
        super().__init__(msg)
        self.exit_code = exit_code
        self.data = {"message": msg}
