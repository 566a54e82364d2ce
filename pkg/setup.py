#!/usr/bin/env python3
"""
Packaging for the mKdV5 laboratory
"""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).resolve().parent


def requirements():
    path = HERE / "requirements.txt"
    if not path.exists():
        return []
    lines = (line.strip() for line in path.read_text(encoding="utf-8").splitlines())
    return [line for line in lines if line and not line.startswith("#") and not line.startswith("pytest")]


setup(
    name="mkdv5-lab",
    version="1.0.0",
    description="Scattering, pseudospectral evolution and long-time asymptotics for the fifth-order mKdV equation",
    long_description=(HERE / "README.md").read_text(encoding="utf-8") if (HERE / "README.md").exists() else "",
    long_description_content_type="text/markdown",
    packages=find_packages(include=["mkdv_core", "mkdv_core.*", "cli", "cli.*"]),
    python_requires=">=3.10",
    install_requires=requirements(),
    extras_require={
        "test": ["pytest", "pytest-cov", "pytest-mock", "pytest-xdist"],
    },
    entry_points={
        "console_scripts": [
            "mkdv5-lab=cli.typer_cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    keywords="mkdv inverse-scattering riemann-hilbert asymptotics pseudospectral",
)
