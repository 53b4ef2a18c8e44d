#!/usr/bin/env python3
import setuptools

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setuptools.setup(
    name="btbd",
    version="0.1.0",
    description="Lossless and near-lossless depth map sequence coding with binary-tree-based decomposition.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="btbd collaborators",
    python_requires=">=3.10",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Development Status :: 2 - Pre-Alpha",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    install_requires=[
        "numpy>=1.23.0",
        "PyYAML>=5.4.1",
        "colorama>=0.4.4",
        "tabulate>=0.8.9",
    ],
    entry_points={
        "console_scripts": ["btbd=btbd.app:run_console_application"],
    },
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
)
