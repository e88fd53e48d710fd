"""Exact Hopf-cyclic cohomology, Weil algebras and pairings (C++ core)."""

import json
from fractions import Fraction
from pathlib import Path

from . import _core
from ._core import HopfcycError, cyclic_dims, fixture_path, sha256_hex, weil_dims

__version__ = _core.__version__


def _text(src):
    p = Path(str(src))
    if not str(src).lstrip().startswith("{") and p.exists():
        return p.read_text()
    return str(src)


def validate(src):
    """Validation reports for a structure file path or JSON text."""
    return _core.validate(_text(src))


def cohomology(src, cap=4, mode="cyclic", coalgebra=None, sayd=None):
    return cyclic_dims(_text(src), cap, mode, coalgebra, sayd)


def weil(src, max_degree=6, n=0, coalgebra=None, sayd=None):
    return weil_dims(_text(src), max_degree, n, coalgebra, sayd)


def comparison_factors(mn):
    out = []
    for f in _core.comparison_factors(list(mn)):
        f = dict(f)
        f["measured"] = Fraction(f["measured"]) if f["defined"] else None
        f["expected"] = Fraction(f["expected"])
        out.append(f)
    return out


def run(command, input="", **kw):
    """Run a command like the CLI. Returns (exit_code, report) with report parsed when JSON."""
    code, out, err = _core.run(command, str(input), **kw)
    if kw.get("format", "json") == "json" and out:
        return code, json.loads(out)
    return code, out


__all__ = [
    "HopfcycError",
    "cohomology",
    "comparison_factors",
    "fixture_path",
    "run",
    "sha256_hex",
    "validate",
    "weil",
]
