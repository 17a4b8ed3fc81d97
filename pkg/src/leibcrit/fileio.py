"""Algebra files, extension-spec files and JSON report serialization.

An algebra file is a JSON document::

    {"dim": 3,
     "entries": [{"i": 3, "j": 3, "k": 1, "re": 1.0, "im": 0.0}, ...],
     "name": "S1",            # optional
     "params": {}}            # optional

with 1-based indices; entry (i, j, k) holds the e_k-coefficient of the
product of e_i and e_j, unlisted coefficients are zero and duplicate index
triples are rejected.  Floats round-trip exactly through JSON.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .bracket import Bracket, IdentityReport
from .moment import IrrationalTypeError, MomentReport, critical_type
from .structure import StructureProfile, StructureVerdict

__all__ = [
    "AlgebraFileError",
    "load_algebra",
    "save_algebra",
    "algebra_to_dict",
    "bracket_from_dict",
    "load_extension_spec",
    "identity_report_dict",
    "moment_report_dict",
    "structure_profile_dict",
    "structure_verdict_dict",
]


class AlgebraFileError(ValueError):
    """Malformed algebra or extension-spec document."""


def algebra_to_dict(mu: Bracket, name: str | None = None, params: dict | None = None) -> dict:
    entries = []
    c = mu.coeffs
    for (i, j, k) in np.argwhere(c != 0):
        v = c[i, j, k]
        entries.append(
            {"i": int(i) + 1, "j": int(j) + 1, "k": int(k) + 1,
             "re": float(v.real), "im": float(v.imag)}
        )
    doc: dict[str, Any] = {"dim": mu.dim, "entries": entries}
    if name is not None:
        doc["name"] = name
    if params:
        doc["params"] = {k: _param_to_json(v) for k, v in params.items()}
    return doc


def _param_to_json(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def save_algebra(path, mu: Bracket, name: str | None = None, params: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(algebra_to_dict(mu, name, params), fh, indent=2)
        fh.write("\n")


def bracket_from_dict(doc: Any) -> tuple[Bracket, dict]:
    """Parse an algebra document; returns the bracket and its metadata."""
    if not isinstance(doc, dict):
        raise AlgebraFileError("algebra document must be a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise AlgebraFileError("'dim' must be a positive integer")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise AlgebraFileError("'entries' must be a list")
    c = np.zeros((dim, dim, dim), dtype=complex)
    seen: set[tuple[int, int, int]] = set()
    for pos, e in enumerate(entries):
        where = f"entry #{pos + 1}"
        if not isinstance(e, dict):
            raise AlgebraFileError(f"{where} is not an object")
        extra = set(e) - {"i", "j", "k", "re", "im"}
        if extra:
            raise AlgebraFileError(f"{where} has unknown fields {sorted(extra)}")
        try:
            i, j, k = e["i"], e["j"], e["k"]
        except KeyError as exc:
            raise AlgebraFileError(f"{where} is missing field {exc}") from None
        for label, idx in (("i", i), ("j", j), ("k", k)):
            if not isinstance(idx, int) or isinstance(idx, bool) or not 1 <= idx <= dim:
                raise AlgebraFileError(
                    f"{where}: index {label}={idx!r} not an integer in [1, {dim}]"
                )
        if (i, j, k) in seen:
            raise AlgebraFileError(f"{where}: duplicate index triple ({i},{j},{k})")
        seen.add((i, j, k))
        re = e.get("re", 0.0)
        im = e.get("im", 0.0)
        for label, val in (("re", re), ("im", im)):
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not np.isfinite(val):
                raise AlgebraFileError(f"{where}: {label}={val!r} is not a finite number")
        c[i - 1, j - 1, k - 1] = complex(re, im)
    meta = {key: doc[key] for key in ("name", "params") if key in doc}
    return Bracket(dim, c), meta


def load_algebra(path) -> tuple[Bracket, dict]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"{path}: invalid JSON ({exc})") from None
    return bracket_from_dict(doc)


def _matrix_from_json(obj: Any, m: int, what: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != m:
        raise AlgebraFileError(f"{what} must be a list of {m} rows")
    out = np.zeros((m, m), dtype=complex)
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != m:
            raise AlgebraFileError(f"{what} row {r + 1} must have {m} entries")
        for cidx, cell in enumerate(row):
            if isinstance(cell, (int, float)) and not isinstance(cell, bool):
                out[r, cidx] = float(cell)
            elif (
                isinstance(cell, list) and len(cell) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                out[r, cidx] = complex(cell[0], cell[1])
            else:
                raise AlgebraFileError(
                    f"{what}[{r + 1}][{cidx + 1}] must be a number or [re, im] pair"
                )
    return out


def load_extension_spec(path):
    """Parse an extension-spec document into an :class:`ExtensionSpec`.

    The core is given as ``{"catalog": NAME}``, ``{"file": PATH}`` (relative
    to the document's directory), an inline ``{"algebra": {...}}``, or the degenerate
    ``{"abelian": {"dim": m, "scale": s, "c": c}}``.  Matrices are lists of
    rows whose cells are numbers or [re, im] pairs; generator index lists
    ``semisimple`` and ``center`` are 1-based.
    """
    import os

    from .extensions import ExtensionSpec
    from .moment import criticality_decompose

    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise AlgebraFileError("extension spec must be a JSON object")
    core_doc = doc.get("core")
    if not isinstance(core_doc, dict):
        raise AlgebraFileError("'core' must be an object")

    core_scale = core_c = None
    core_report = None
    if "abelian" in core_doc:
        ab = core_doc["abelian"]
        try:
            m = int(ab["dim"])
            core_scale = float(ab["scale"])
            core_c = float(ab["c"])
        except (KeyError, TypeError, ValueError):
            raise AlgebraFileError("'core.abelian' needs numeric dim, scale and c") from None
        core = Bracket.zero(m)
    elif "catalog" in core_doc:
        from . import catalog

        try:
            core = catalog.get(core_doc["catalog"], core_doc.get("params")).bracket
        except KeyError as exc:
            raise AlgebraFileError(str(exc)) from None
    elif "file" in core_doc:
        rel = os.path.join(os.path.dirname(os.fspath(path)), core_doc["file"])
        core, _ = load_algebra(rel)
    elif "algebra" in core_doc:
        core, _ = bracket_from_dict(core_doc["algebra"])
    else:
        raise AlgebraFileError("'core' needs one of: catalog, file, algebra, abelian")

    m = core.dim
    lm_doc = doc.get("left_maps")
    rm_doc = doc.get("right_maps")
    if not isinstance(lm_doc, list) or not isinstance(rm_doc, list) or not lm_doc:
        raise AlgebraFileError("'left_maps' and 'right_maps' must be nonempty lists")
    if len(lm_doc) != len(rm_doc):
        raise AlgebraFileError("'left_maps' and 'right_maps' must have equal length")
    lmaps = tuple(_matrix_from_json(x, m, f"left_maps[{a + 1}]") for a, x in enumerate(lm_doc))
    rmaps = tuple(_matrix_from_json(x, m, f"right_maps[{a + 1}]") for a, x in enumerate(rm_doc))

    f_bracket = None
    semisimple: tuple[int, ...] = ()
    center: tuple[int, ...] = ()
    if "f_bracket" in doc:
        f_bracket, _ = bracket_from_dict(doc["f_bracket"])
        d1 = len(lmaps)

        def _indices(key: str) -> tuple[int, ...]:
            lst = doc.get(key, [])
            if not isinstance(lst, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) and 1 <= x <= d1 for x in lst
            ):
                raise AlgebraFileError(f"'{key}' must list 1-based generator indices")
            return tuple(x - 1 for x in lst)

        semisimple = _indices("semisimple")
        center = _indices("center")

    if core_scale is None and not core.is_zero:
        core_report = criticality_decompose(core)

    return ExtensionSpec(
        core=core,
        core_report=core_report,
        left_maps=lmaps,
        right_maps=rmaps,
        f_bracket=f_bracket,
        semisimple=semisimple,
        center=center,
        core_scale=core_scale,
        core_c=core_c,
    )


def _matrix_to_json(a: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(a, dtype=complex)]


def identity_report_dict(r: IdentityReport) -> dict:
    return {
        "left_residual": r.left_residual,
        "right_residual": r.right_residual,
        "anticommutativity_residual": r.anticommutativity_residual,
        "jacobi_residual": r.jacobi_residual,
        "tol": r.tol,
        "is_left_leibniz": r.is_left_leibniz,
        "is_right_leibniz": r.is_right_leibniz,
        "is_symmetric_leibniz": r.is_symmetric_leibniz,
        "is_lie": r.is_lie,
    }


def moment_report_dict(rep: MomentReport, max_denominator: int = 100) -> dict:
    if rep.is_critical:
        try:
            t = critical_type(rep.D, max_denominator=max_denominator)
            type_str, scale = str(t), t.scale
        except IrrationalTypeError:
            type_str, scale = None, None
    else:
        type_str, scale = None, None
    eig = np.linalg.eigvalsh(rep.D)
    return {
        "dim": rep.M.shape[0],
        "norm_sq": rep.norm_sq,
        "F": rep.F,
        "trace_M": float(np.trace(rep.M).real),
        "c": rep.c,
        "is_critical": rep.is_critical,
        "residual_tangent": rep.residual_tangent,
        "residual_decomp": rep.residual_decomp,
        "derivation_defect": rep.derivation_defect,
        "critical_type": type_str,
        "type_scale": scale,
        "D_eigenvalues": [float(x) for x in eig],
        "M": _matrix_to_json(rep.M),
        "D": _matrix_to_json(rep.D),
        "tol": rep.tol,
    }


def structure_profile_dict(p: StructureProfile) -> dict:
    return {
        "derived_dims": list(p.derived_dims),
        "lower_central_dims": list(p.lower_central_dims),
        "center_dim": p.center_dim,
        "is_solvable": p.is_solvable,
        "is_nilpotent": p.is_nilpotent,
    }


def structure_verdict_dict(v: StructureVerdict) -> dict:
    return {
        "adjoint_closed": v.adjoint_closed,
        "adjoint_residual": v.adjoint_residual,
        "l0_reductive": v.l0_reductive,
        "l0_residual": v.l0_residual,
        "killing_min_sv": v.killing_min_sv,
        "center_normal": v.center_normal,
        "center_residual": v.center_residual,
        "nilradical_ok": v.nilradical_ok,
        "nilradical_residual": v.nilradical_residual,
        "is_nilpotent_radical": v.is_nilpotent_radical,
        "degenerate_abelian_nilradical": v.degenerate_abelian_nilradical,
        "restricted_type": str(v.restricted_type) if v.restricted_type else None,
        "type_matches": v.type_matches,
        "lminus_min_nonnormality": v.lminus_min_nonnormality,
        "all_passed": v.all_passed,
    }
