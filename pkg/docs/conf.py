# -*- coding: utf-8 -*-
#
# rctee documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
from datetime import datetime

sys.path.insert(0, os.path.abspath("../"))

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx_autodoc_typehints",
    "numpydoc",
]

source_suffix = ".rst"

master_doc = "index"

project = "rctee"
copyright = f"2026-{datetime.now().year}, rctee developers"
author = "rctee developers"

VERSION_PATH = "../rctee/VERSION"
with open(VERSION_PATH, "r") as version_file:
    v = version_file.read().strip()
version = v
release = v

language = None

exclude_patterns = ["_build"]

default_role = "literal"

add_function_parentheses = True
add_module_names = True
show_authors = False

pygments_style = "sphinx"

# -- Options for HTML output ----------------------------------------------

html_theme = "pydata_sphinx_theme"

html_theme_options = {
    "icon_links": [
        {
            "name": "GitHub",
            "url": "https://github.com/rctee/rctee",
            "icon": "fab fa-github-square",
        },
    ],
    "navigation_depth": 2,
    "show_toc_level": 2,
}

html_title = version

html_show_sphinx = True
html_show_copyright = True

htmlhelp_basename = "rcteedoc"

# -- autodoc -------------------------------------------------------------------

autodoc_default_options = {
    "members": True,
    "inherited-members": False,
}

numpydoc_show_class_members = False

intersphinx_mapping = {
    "python": ("https://docs.python.org/{.major}".format(sys.version_info), None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "pandas": ("https://pandas.pydata.org/docs/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/reference", None),
    "sklearn": ("https://scikit-learn.org/stable", None),
    "cryptography": ("https://cryptography.io/en/latest/", None),
}

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, "rctee", "rctee Documentation", [author], 1)]
