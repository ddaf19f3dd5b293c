#!/usr/bin/env python3
"""
Setup script for the NV gyroscope simulator
"""

from pathlib import Path

from setuptools import find_packages, setup

ROOT = Path(__file__).parent


def read_text(name: str) -> str:
    path = ROOT / name
    return path.read_text(encoding="utf-8") if path.exists() else ""


# Test-only pins stay out of install_requires
requirements = [
    line.strip()
    for line in read_text("requirements.txt").splitlines()
    if line.strip() and not line.startswith("#") and not line.startswith("pytest")
]

setup(
    name="nv-gyro-sim",
    version="1.0.0",
    description="Simulator for an NV-center nuclear-spin gyroscope with comagnetometer drift compensation",
    long_description=read_text("README.md"),
    long_description_content_type="text/markdown",
    package_dir={"": "src"},
    packages=find_packages("src"),
    py_modules=["main"],
    python_requires=">=3.9",
    install_requires=requirements,
    entry_points={
        "console_scripts": [
            "nv-gyro-sim=main:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    keywords="nv center gyroscope nuclear spin ramsey comagnetometer simulation",
)
