from pathlib import Path

from setuptools import find_packages, setup

# Package meta-data.
NAME = "rctee"
DESCRIPTION = (
    "Desk-scale simulator of a runtime-customizable FPGA-SoC trusted execution "
    "environment: TTP, simulated device and user client"
)
URL = "http://github.com/rctee/rctee"
EMAIL = "rctee-dev@users.noreply.github.com"
AUTHOR = "rctee developers"
REQUIRES_PYTHON = ">=3.7.0"

# description
with open("README.md", "r") as fh:
    long_description = fh.read()


# Packages required for this module to be executed
def list_reqs(fname="requirements.txt"):
    with open(fname) as fd:
        return fd.read().splitlines()


# Load the package's VERSION file as a dictionary.
about = {}
ROOT_DIR = Path(__file__).resolve().parent
PACKAGE_DIR = ROOT_DIR / "rctee"
with open(PACKAGE_DIR / "VERSION") as f:
    _version = f.read().strip()
    about["__version__"] = _version

setup(
    name=NAME,
    version=about["__version__"],
    description=DESCRIPTION,
    long_description=long_description,
    long_description_content_type="text/markdown",
    url=URL,
    author=AUTHOR,
    author_email=EMAIL,
    python_requires=REQUIRES_PYTHON,
    packages=find_packages(exclude=("tests",)),
    package_data={"rctee": ["VERSION"]},
    license="BSD 3 clause",
    install_requires=list_reqs(),
    include_package_data=True,
    entry_points={
        "console_scripts": [
            "rctee-image=rctee.cli.image:main",
            "rctee-ttp=rctee.cli.ttp:main",
            "rctee-device=rctee.cli.device:main",
            "rctee-client=rctee.cli.client:main",
            "rctee-harness=rctee.cli.harness:main",
        ]
    },
    classifiers=[
        # Trove classifiers
        # Full list: https://pypi.python.org/pypi?%3Aaction=list_classifiers
        "License :: OSI Approved :: BSD License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Topic :: Security :: Cryptography",
        "Topic :: System :: Emulators",
    ],
    zip_safe=False,
)
