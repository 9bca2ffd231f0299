from setuptools import find_packages, setup

from src import __version__

setup(
    name="prelie-nijenhuis",
    version=__version__,
    description="Exact rational verification of Nijenhuis, Rota-Baxter and related structures on pre-Lie algebras",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.9",
    install_requires=["numpy>=1.24", "sympy>=1.12"],
    extras_require={"test": ["pytest>=7.4", "hypothesis>=6.90"]},
    entry_points={"console_scripts": ["prelie-nijenhuis=src.cli:run_cli_main"]},
)
