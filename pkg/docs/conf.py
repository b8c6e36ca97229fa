# Configuration file for the Sphinx documentation builder.
#
# Project metadata and the optional extensions are read from the [tool.poetry] and [tool.sphinx]
# tables of pyproject.toml.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys
from os import environ
from pathlib import Path
from shutil import copyfile
from typing import Any, Dict, List

from tomli import load as load_toml

sys.path.insert(0, os.path.abspath(".."))

ON_READTHEDOCS = environ.get("READTHEDOCS") == "True"

# -- Project information -----------------------------------------------------

current_path = Path(".").absolute()
project_root = current_path.parent if current_path.name == "docs" else current_path

with (project_root / "pyproject.toml").open(mode="rb") as pyproject:
    pyproject_toml: Any = load_toml(pyproject)

package_config = pyproject_toml["tool"]["poetry"]
sphinx_config = pyproject_toml["tool"].get("sphinx", {})

project = str(package_config.get("name"))
author = ", ".join(package_config.get("authors"))
copyright = f"{sphinx_config.get('copyright-year', 2024)}, {author}"
version = str(package_config.get("version"))
release = str(sphinx_config.get("release", version))

# -- General configuration ---------------------------------------------------

extensions: List[str] = ["sphinx_click", "sphinx.ext.mathjax"]

# members in source order, services read top-down
autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
    "show-inheritance": True,
}
autodoc_typehints = "description"
# celery_worker creates an app on import
autodoc_mock_imports = ["varitree_core.celery_worker"]

source_suffix = {".rst": "restructuredtext"}

if sphinx_config.get("enable-autodoc", False):
    extensions.append("sphinx.ext.autodoc")

if sphinx_config.get("enable-autosectionlabel", False):
    extensions.append("sphinx.ext.autosectionlabel")
    autosectionlabel_prefix_document = sphinx_config.get("autosectionlabel-prefix-document", False)

if sphinx_config.get("intersphinx-mapping"):
    extensions.append("sphinx.ext.intersphinx")
    intersphinx_mapping = {
        key: (val[0], val[1] if len(val) > 1 and val[1] else None)
        for key, val in sphinx_config["intersphinx-mapping"].items()
    }
    intersphinx_timeout = 30

if sphinx_config.get("enable-todo", False):
    extensions.append("sphinx.ext.todo")
    todo_include_todos = not ON_READTHEDOCS
    todo_emit_warnings = not ON_READTHEDOCS

myst_enable_extensions: List[str] = []

if sphinx_config.get("enable-markdown", False):
    extensions.append("myst_parser")
    source_suffix[".md"] = "markdown"
    _myst_options: Dict[str, Any] = sphinx_config.get("myst", {})
    myst_enable_extensions = list(_myst_options.get("extensions", []))
    if _myst_options.get("heading_anchors"):
        myst_heading_anchors = int(_myst_options["heading_anchors"])

templates_path = ["_templates"]
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme" if ON_READTHEDOCS else "alabaster"
html_theme_options = {"display_version": True} if ON_READTHEDOCS else {}

# -- Extra Files -------------------------------------------------------------

if sphinx_config.get("include-changelog"):
    copyfile(project_root / "CHANGELOG.md", project_root / "docs/others/changelog.md")

# -- Monkeypatches -----------------------------------------------------------

# ``:section-title:`` for the click directive, used in others/cli.rst
from functools import wraps  # noqa: E402

from docutils import nodes  # noqa: E402
from docutils.parsers.rst import directives  # noqa: E402
from sphinx_click.ext import ClickDirective  # noqa: E402

ClickDirective.option_spec["section-title"] = directives.unchanged

_click_run = ClickDirective.run


@wraps(_click_run)
def _run_with_section_title(self: ClickDirective):
    section_title: str = self.options.get("section-title")
    sections = _click_run(self)
    if section_title:
        attrs = sections[0].attributes
        attrs["ids"] = [nodes.make_id(section_title)]
        attrs["names"] = [nodes.fully_normalize_name(section_title)]
        sections[0][0].replace_self(nodes.title(text=section_title))
    return sections


ClickDirective.run = _run_with_section_title
