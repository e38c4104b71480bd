import pathlib

import rctee

PACKAGE_ROOT = pathlib.Path(rctee.__file__).resolve().parent
VERSION_PATH = PACKAGE_ROOT / "VERSION"

name = "rctee"

with open(VERSION_PATH, "r") as version_file:
    __version__ = version_file.read().strip()
