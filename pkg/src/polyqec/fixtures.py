"""Bundled example codes.

Each ``data/*.code`` file describes one well-known translation-invariant
code: its generating polynomials, default torus boundary, and (where it is
a compactification of a larger-alphabet hypergraph product) the parent
declaration with twisted boundary conditions.
"""

from __future__ import annotations

from pathlib import Path

from .specfile import CodeSpec, parse_spec_file

__all__ = [
    "FAMILY_TABLE_ROWS",
    "data_dir",
    "fixture_names",
    "fixture_path",
    "load_fixture",
]

# Rows of the stored family-tree table, grouped by parent and ordered as
# rendered by the ``reproduce-appendix`` command.
FAMILY_TABLE_ROWS: tuple[str, ...] = (
    "haah",
    "checkerboard",
    "hhb_a",
    "fibonacci_fsl",
    "gross",
    "honeycomb_color",
    "fsl_odd_odd",
    "sierpinski_prism",
    "fsl_odd_even",
)


def data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def fixture_names() -> tuple[str, ...]:
    return tuple(sorted(p.stem for p in data_dir().glob("*.code")))


def fixture_path(name: str) -> Path:
    path = data_dir() / f"{name}.code"
    if not path.is_file():
        known = ", ".join(fixture_names())
        raise FileNotFoundError(f"no bundled code named {name!r} (known: {known})")
    return path


def load_fixture(name: str) -> CodeSpec:
    return parse_spec_file(fixture_path(name))
