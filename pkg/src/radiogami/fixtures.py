"""Fixture file resolution and CSV helpers.

Calibration tables (digitized curves, transducer anchors, published
reference values) ship as CSV files inside the package.  The environment
variable ``RADIOGAMI_FIXTURES`` overrides the fixture root, which lets a
deployment swap in re-digitized tables without reinstalling.
"""

from __future__ import annotations

import csv
import os
from importlib import resources
from pathlib import Path

from .errors import InputError

_ENV_VAR = "RADIOGAMI_FIXTURES"


def fixture_root() -> Path:
    override = os.environ.get(_ENV_VAR)
    if override:
        root = Path(override)
        if not root.is_dir():
            raise InputError(f"{_ENV_VAR}={override!r} is not a directory")
        return root
    return Path(resources.files("radiogami")) / "fixtures"


def paper_data_root() -> Path:
    """Root of the published reference-value tables used by `repro`."""
    return Path(resources.files("radiogami")) / "paper_data"


def fixture_path(name: str) -> Path:
    path = fixture_root() / name
    if not path.is_file():
        raise InputError(f"fixture not found: {path}")
    return path


def read_csv(path: Path | str) -> list[dict[str, str]]:
    """Read a CSV with a header row, skipping '#' comment lines."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in fh if not r.lstrip().startswith("#")]
    reader = csv.DictReader(rows)
    return [dict(row) for row in reader]


def read_columns(path: Path | str, *names: str) -> tuple[list[float], ...]:
    """Read numeric columns by name from a commented CSV."""
    rows = read_csv(path)
    if not rows:
        raise InputError(f"empty CSV: {path}")
    for n in names:
        if n not in rows[0]:
            raise InputError(f"column {n!r} missing from {path}")
    return tuple([float(r[n]) for r in rows] for n in names)


def write_csv(path: Path | str, header: list[str], rows: list[list], comments: list[str] | None = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        for line in comments or []:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
