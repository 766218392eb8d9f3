"""Report assembly (plain dicts, JSON-ready) and plain-text rendering."""

from __future__ import annotations

import json
import platform
import sys
from importlib import resources

import numpy as np
import scipy

from . import __version__
from .exact_test import ExactResult
from .fitting import ContingencyTable, FittedTable, chisq_sf, g2, pearson_c2
from .markov_basis import MarkovBasis
from .suffstat import SuffStatMatrix, parametrize
from .table_model import Decomposition, MinorSet

SCHEMA_VERSION = "1.0"


def load_schema() -> dict:
    return json.loads((resources.files("weakind") / "report.schema.json").read_text())


def _cells(cells) -> list[list[int]]:
    return [list(c) for c in cells]


def model_section(model: MinorSet, decomp: Decomposition, a: SuffStatMatrix) -> dict:
    param = parametrize(a)
    return {
        "rows": model.shape.rows,
        "cols": model.shape.cols,
        "minors": _cells(model.sorted_anchors),
        "num_minors": len(model),
        "r": decomp.r,
        "c": decomp.c,
        "f": decomp.f,
        "k": decomp.k,
        "mcrs": [_cells(run) for run in decomp.mcrs],
        "mccs": [_cells(run) for run in decomp.mccs],
        "free_cells": _cells(decomp.free_cells),
        "components": [_cells(sorted(comp)) for comp in decomp.components],
        "corners": _cells(decomp.corners),
        "rank": a.rank,
        "df": len(model),
        "columns": [
            {"label": str(lab), "kind": lab.kind, "cells": _cells(lab.cells), "grid": a.as_grid(k)}
            for k, lab in enumerate(a.labels)
        ],
        "parametrization": [
            {"cell": list(cell), "params": [k + 1 for k in ks]} for cell, ks in param.monomials.items()
        ],
    }


def basis_section(basis: MarkovBasis, verified: bool | None = None, n_max: int | None = None) -> dict:
    return {
        "size": len(basis),
        "moves": basis.grids(),
        "verified": verified,
        "verify_n_max": n_max,
    }


def fit_section(h: ContingencyTable, fit: FittedTable, tol: float) -> dict:
    n = h.total
    return {
        "table": h.rows(),
        "n": n,
        "probs": [[float(x) for x in row] for row in fit.grid()],
        "fitted_counts": [[float(x) for x in row] for row in fit.grid() * n],
        "converged": bool(fit.converged),
        "iterations": int(fit.iterations),
        "birch_residual": float(fit.birch_residual),
        "tol": float(tol),
    }


def tests_section(h: ContingencyTable, fit: FittedTable, df: int, exact: ExactResult | None = None) -> dict:
    c2 = pearson_c2(h, fit)
    gg = g2(h, fit)
    out = {
        "df": df,
        "c2": c2,
        "g2": gg,
        "p_asymptotic_c2": chisq_sf(c2, df) if df > 0 else 1.0,
        "p_asymptotic_g2": chisq_sf(gg, df) if df > 0 else 1.0,
        "exact": exact.to_dict() if exact is not None else None,
    }
    return out


def provenance(command: str, parameters: dict) -> dict:
    return {
        "package": "weakind",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "command": command,
        "parameters": parameters,
    }


def assemble(command: str, parameters: dict, **sections) -> dict:
    out = {"schema_version": SCHEMA_VERSION}
    for name in ("model", "basis", "fit", "tests"):
        if sections.get(name) is not None:
            out[name] = sections[name]
    out["provenance"] = provenance(command, parameters)
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False)


# ---------------------------------------------------------------------------
# text


def _grid(rows, fmt=repr) -> list[str]:
    return ["    " + "  ".join(fmt(x) for x in row) for row in rows]


def _signed_cells(grid) -> str:
    parts = []
    for i, row in enumerate(grid, start=1):
        for j, x in enumerate(row, start=1):
            if x:
                parts.append(f"{x:+d}({i},{j})")
    return " ".join(parts)


def render_text(report: dict) -> str:
    lines: list[str] = []
    model = report.get("model")
    if model:
        lines.append(f"model: {model['rows']}x{model['cols']}, {model['num_minors']} minors {model['minors']}")
        lines.append(f"MCRs r = {model['r']}")
        lines.append(f"MCCs c = {model['c']}")
        lines.append(f"free cells f = {model['f']}")
        lines.append(f"components k = {model['k']}")
        lines.append(f"corners = {model['corners']}")
        lines.append(f"rank A_B = {model['rank']}")
        lines.append(f"df = {model['df']}")
        lines.append("sufficient statistic columns:")
        for k, col in enumerate(model["columns"], start=1):
            lines.append(f"  z{k}: {col['label']}")
        lines.append("parametrization:")
        for entry in model["parametrization"]:
            mono = " * ".join(f"z{k}" for k in entry["params"]) or "1"
            lines.append(f"  p{tuple(entry['cell'])} = {mono}")
    basis = report.get("basis")
    if basis:
        lines.append(f"Markov basis size = {basis['size']}")
        for k, grid in enumerate(basis["moves"], start=1):
            lines.append(f"  m{k}: {_signed_cells(grid)}")
        if basis["verified"] is not None:
            lines.append(f"connectivity verified up to n = {basis['verify_n_max']}: {basis['verified']}")
    fit = report.get("fit")
    if fit:
        lines.append(f"n = {fit['n']}")
        lines.append("fitted counts:")
        lines.extend(_grid(fit["fitted_counts"], lambda x: f"{x:.4f}"))
        lines.append(f"converged = {fit['converged']}")
        lines.append(f"iterations = {fit['iterations']}")
        lines.append(f"birch_residual = {fit['birch_residual']!r}")
    tests = report.get("tests")
    if tests:
        lines.append(f"df = {tests['df']}")
        lines.append(f"C2 = {tests['c2']!r}")
        lines.append(f"G2 = {tests['g2']!r}")
        lines.append(f"p_asymptotic_c2 = {tests['p_asymptotic_c2']!r}")
        lines.append(f"p_asymptotic_g2 = {tests['p_asymptotic_g2']!r}")
        ex = tests.get("exact")
        if ex:
            lines.append(f"exact statistic = {ex['stat']}")
            lines.append(f"p_exact = {ex['p_exact']!r}")
            lines.append(f"mc_se = {ex['mc_se']!r}")
            lines.append(f"acceptance_rate = {ex['acceptance_rate']!r}")
            lines.append(
                f"samples = {ex['samples']}, burn_in = {ex['burn_in']}, thinning = {ex['thinning']}, "
                f"seed = {ex['seed']}, chains = {ex['chains']}"
            )
    return "\n".join(lines) + "\n"


def write(report: dict, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(dumps(report) + "\n" if as_json else render_text(report))
