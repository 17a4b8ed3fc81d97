"""Constructive extensions of a nilpotent critical point.

Given a critical core lambda on C^m with certificate M = c I + D (c < 0,
positive integer type) and, for each generator A of an extending space of
dimension d1, action maps L_A, R_A on the core, the assembled product

    mu(A + X, B + Y) = [A, B]_f + L_A(Y) + R_B(X) + lambda(X, Y)

is again a critical point, of the core type with a zero eigenvalue of
multiplicity d1 prepended, provided the hypotheses below hold and the
extending generators are orthonormalized under the Gram form

    <A, B> = -(2/c) * (tr ad_A ad_B* + tr L_A L_B* + tr R_A R_B*)

(the ad term only when a reductive bracket f is present).  Hypotheses:
every action map commutes with D and is a derivation of the core; maps of
central generators are normal and no nonzero central combination acts by
zero; maps of semisimple generators (and their ad) are skew-Hermitian.
Nothing is trusted: the assembled product must pass the symmetric Leibniz
identities, or at least the left identity with every right action a
derivation of the result (the relaxed one-sided form of the conclusion),
and its criticality, constant and type are re-certified from scratch
before it is returned.

A clearly-labeled degenerate mode accepts the zero core (abelian
nilradical) when the caller supplies the intended scalar derivation
``core_scale`` and constant ``core_c`` explicitly; the conclusion then
rests entirely on the final certification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bracket import Bracket, check_identities, gl_act, inf_act
from .linalg import left_op
from .moment import (
    CriticalType,
    MomentReport,
    critical_type,
    criticality_decompose,
)

__all__ = [
    "ExtensionSpec",
    "ExtensionError",
    "HypothesisViolation",
    "NotSymmetricLeibniz",
    "GramNotPositive",
    "NotLie",
    "CertificationFailed",
    "build_solvable_extension",
    "build_general_extension",
]


class ExtensionError(Exception):
    """Base class for extension-builder failures."""


class HypothesisViolation(ExtensionError):
    def __init__(self, clause: str, residual: float, detail: str = ""):
        self.clause = clause
        self.residual = residual
        msg = f"hypothesis {clause} violated (residual {residual:.3g})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotSymmetricLeibniz(ExtensionError):
    def __init__(self, left_residual: float, right_residual: float):
        self.left_residual = left_residual
        self.right_residual = right_residual
        super().__init__(
            "assembled product is not symmetric Leibniz "
            f"(left defect {left_residual:.3g}, right defect {right_residual:.3g})"
        )


class GramNotPositive(ExtensionError):
    pass


class NotLie(ExtensionError):
    pass


class CertificationFailed(ExtensionError):
    pass


@dataclass(frozen=True)
class ExtensionSpec:
    """Inputs of the extension builders.

    ``core`` is the critical core with its certificate ``core_report``;
    ``left_maps[a]`` / ``right_maps[a]`` are the maps L_A, R_A of the a-th
    extending generator.  For the general builder ``f_bracket`` holds the
    Lie bracket of the reductive extending algebra with ``semisimple`` and
    ``center`` naming the (0-based) generator indices of the two summands.
    The degenerate abelian-core mode sets ``core`` to the zero bracket and
    supplies ``core_scale`` (D = scale * I) and ``core_c`` explicitly.
    """

    core: Bracket
    core_report: MomentReport | None
    left_maps: tuple[np.ndarray, ...]
    right_maps: tuple[np.ndarray, ...]
    f_bracket: Bracket | None = None
    semisimple: tuple[int, ...] = ()
    center: tuple[int, ...] = ()
    core_scale: float | None = None
    core_c: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "left_maps", tuple(np.asarray(a, dtype=complex) for a in self.left_maps))
        object.__setattr__(self, "right_maps", tuple(np.asarray(a, dtype=complex) for a in self.right_maps))
        if len(self.left_maps) != len(self.right_maps) or not self.left_maps:
            raise ValueError("need one (left, right) map pair per generator, at least one")
        m = self.core.dim
        if m < 1:
            raise ValueError("core dimension must be at least 1")
        for a in (*self.left_maps, *self.right_maps):
            if a.shape != (m, m):
                raise ValueError(f"action maps must be {m}x{m}")

    @property
    def d1(self) -> int:
        return len(self.left_maps)

    @property
    def degenerate_core(self) -> bool:
        return self.core_scale is not None or self.core_c is not None


def _core_data(spec: ExtensionSpec, tol: float) -> tuple[np.ndarray, float, CriticalType]:
    """The core derivation, constant and type, honoring the degenerate mode."""
    m = spec.core.dim
    if spec.degenerate_core:
        if spec.core_scale is None or spec.core_c is None:
            raise ValueError("degenerate mode needs both core_scale and core_c")
        if not spec.core.is_zero:
            raise ValueError("degenerate mode requires the zero core")
        if not (spec.core_scale > 0 and spec.core_c < 0):
            raise ValueError("degenerate mode needs core_scale > 0 and core_c < 0")
        d = spec.core_scale * np.eye(m, dtype=complex)
        return d, spec.core_c, CriticalType((1,), (m,))
    rep = spec.core_report
    if rep is None:
        rep = criticality_decompose(spec.core, tol)
    if not rep.is_critical:
        raise HypothesisViolation(
            "core criticality", rep.residual_tangent, "core is not a certified critical point"
        )
    t = critical_type(rep.D)
    if t.ks[0] <= 0:
        raise HypothesisViolation(
            "core type", 0.0, f"core type {t} must be strictly positive"
        )
    return rep.D, rep.c, t


def _comm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def _check_commute_with_core(spec: ExtensionSpec, d_core: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.linalg.norm(d_core)))
    for a in range(spec.d1):
        for op, side in ((spec.left_maps[a], "L"), (spec.right_maps[a], "R")):
            r = _comm(d_core, op) / (scale * max(1.0, float(np.linalg.norm(op))))
            if r > tol:
                raise HypothesisViolation("(i)", r, f"[D, {side}_{a}] != 0")


def _check_derivations(spec: ExtensionSpec, tol: float) -> None:
    if spec.core.is_zero:
        return
    for a in range(spec.d1):
        for op, side in ((spec.left_maps[a], "L"), (spec.right_maps[a], "R")):
            r = inf_act(op, spec.core).norm / (spec.core.norm * max(1.0, float(np.linalg.norm(op))))
            if r > tol:
                raise HypothesisViolation("core derivation", r, f"{side}_{a} is not a derivation of the core")


def _check_normal_family(maps: list[np.ndarray], tol: float, clause: str) -> None:
    """[X_a, X_b*] = 0 pairwise, so every combination is a normal operator."""
    scale = max(1.0, max((float(np.linalg.norm(x)) for x in maps), default=1.0) ** 2)
    for i, a in enumerate(maps):
        for b in maps[i:]:
            r = float(np.linalg.norm(a @ b.conj().T - b.conj().T @ a)) / scale
            if r > tol:
                raise HypothesisViolation(clause, r, "action maps are not a commuting normal family")


def _check_nonvanishing(pairs: list[tuple[np.ndarray, np.ndarray]], tol: float, clause: str) -> None:
    """No nonzero combination of the generators acts by zero on the core."""
    stacked = np.stack([np.concatenate([l.ravel(), r.ravel()]) for l, r in pairs], axis=1)
    s = np.linalg.svd(stacked, compute_uv=False)
    if s.size == 0 or s[0] <= tol or s[-1] <= tol * s[0]:
        raise HypothesisViolation(
            clause, float(s[-1]) if s.size else 0.0,
            "some nonzero generator combination has zero left and right action",
        )


def _check_skew(maps: list[np.ndarray], tol: float, clause: str) -> None:
    for x in maps:
        r = float(np.linalg.norm(x + x.conj().T)) / max(1.0, float(np.linalg.norm(x)))
        if r > tol:
            raise HypothesisViolation(clause, r, "map is not skew-Hermitian")


def _orthonormalize(gram: np.ndarray) -> np.ndarray:
    """Transition matrix s with s* gram s = I; raises when gram is not PD."""
    gram = 0.5 * (gram + gram.conj().T)
    w = np.linalg.eigvalsh(gram)
    if w[0] <= 1e-10 * max(w[-1], 0.0):
        raise GramNotPositive(
            f"Gram matrix is not positive definite (eigenvalues {w[0]:.3g}..{w[-1]:.3g})"
        )
    chol = np.linalg.cholesky(gram)
    return np.linalg.inv(chol).conj().T


def _transform(maps: tuple[np.ndarray, ...], s: np.ndarray) -> list[np.ndarray]:
    return [sum(s[a, b] * maps[a] for a in range(s.shape[0])) for b in range(s.shape[1])]


def _assemble(
    core: Bracket,
    lmaps: list[np.ndarray],
    rmaps: list[np.ndarray],
    f_coeffs: np.ndarray | None,
) -> Bracket:
    d1, m = len(lmaps), core.dim
    n = d1 + m
    c = np.zeros((n, n, n), dtype=complex)
    c[d1:, d1:, d1:] = core.coeffs
    for a in range(d1):
        c[a, d1:, d1:] = lmaps[a].T  # mu(A_a, e_j) = L_a e_j
        c[d1:, a, d1:] = rmaps[a].T  # mu(e_i, A_a) = R_a e_i
    if f_coeffs is not None:
        c[:d1, :d1, :d1] = f_coeffs
    return Bracket(n, c)


def _identity_gate(
    out: Bracket, rmaps: list[np.ndarray], d1: int, tol: float
) -> None:
    """Accept symmetric Leibniz output, or left Leibniz with R in Der(out)."""
    idr = check_identities(out)
    if idr.is_symmetric_leibniz:
        return
    if idr.is_left_leibniz:
        worst = 0.0
        for r in rmaps:
            full = np.zeros((out.dim, out.dim), dtype=complex)
            full[d1:, d1:] = r
            worst = max(worst, inf_act(full, out).norm / out.norm)
        if worst <= tol:
            return
    raise NotSymmetricLeibniz(idr.left_residual, idr.right_residual)


def _certify(
    out: Bracket,
    rmaps: list[np.ndarray],
    core_c: float,
    core_type: CriticalType,
    d1: int,
    tol: float,
) -> MomentReport:
    _identity_gate(out, rmaps, d1, tol)
    rep = criticality_decompose(out, tol)
    if not rep.is_critical:
        raise CertificationFailed(
            f"assembled product is not critical (tangent residual {rep.residual_tangent:.3g})"
        )
    if abs(rep.c - core_c) > 1e-8 * abs(core_c):
        raise CertificationFailed(
            f"constant changed: core {core_c:.12g} vs assembled {rep.c:.12g}"
        )
    expected = CriticalType((0,) + core_type.ks, (d1,) + core_type.ds)
    got = critical_type(rep.D)
    if got != expected:
        raise CertificationFailed(f"type {got} differs from expected {expected}")
    return rep


def build_solvable_extension(
    spec: ExtensionSpec, tol: float = 1e-8
) -> tuple[Bracket, MomentReport]:
    """Extend the core by an abelian algebra acting through (L, R).

    Returns the assembled product with its fresh criticality certificate;
    the result is solvable of the core type with (0; d1) prepended.
    """
    if spec.f_bracket is not None:
        raise ValueError("solvable extension takes no reductive bracket; use the general builder")
    d_core, core_c, core_type = _core_data(spec, tol)
    _check_commute_with_core(spec, d_core, tol)
    _check_derivations(spec, tol)
    pairs = list(zip(spec.left_maps, spec.right_maps))
    _check_nonvanishing(pairs, tol, "(ii)")
    _check_normal_family(list(spec.left_maps), tol, "(ii)")
    _check_normal_family(list(spec.right_maps), tol, "(ii)")

    gram = np.empty((spec.d1, spec.d1), dtype=complex)
    for a in range(spec.d1):
        for b in range(spec.d1):
            gram[a, b] = -2.0 / core_c * (
                np.trace(spec.left_maps[a] @ spec.left_maps[b].conj().T)
                + np.trace(spec.right_maps[a] @ spec.right_maps[b].conj().T)
            )
    s = _orthonormalize(gram)
    lmaps = _transform(spec.left_maps, s)
    rmaps = _transform(spec.right_maps, s)
    _check_normal_family(lmaps, tol, "(ii) after orthonormalization")
    _check_normal_family(rmaps, tol, "(ii) after orthonormalization")

    out = _assemble(spec.core, lmaps, rmaps, None)
    rep = _certify(out, rmaps, core_c, core_type, spec.d1, tol)
    return out, rep


def build_general_extension(
    spec: ExtensionSpec, tol: float = 1e-8
) -> tuple[Bracket, MomentReport]:
    """Extend the core by a reductive Lie algebra f = semisimple + center.

    Semisimple generators must act skew-Hermitianly through ad, L and R;
    central generators obey the abelian-extension clauses.  The Gram form
    gains the tr(ad ad*) term.
    """
    f = spec.f_bracket
    if f is None:
        raise ValueError("general extension needs the reductive bracket f_bracket")
    d1 = spec.d1
    if f.dim != d1:
        raise ValueError(f"f_bracket has dimension {f.dim}, expected {d1}")
    if sorted((*spec.semisimple, *spec.center)) != list(range(d1)):
        raise ValueError("semisimple and center must partition the generator indices")
    idr_f = check_identities(f)
    if not f.is_zero and not idr_f.is_lie:
        raise NotLie(
            f"f_bracket is not a Lie algebra (anticommutativity defect "
            f"{idr_f.anticommutativity_residual:.3g}, Jacobi defect {idr_f.jacobi_residual:.3g})"
        )

    d_core, core_c, core_type = _core_data(spec, tol)
    _check_commute_with_core(spec, d_core, tol)
    _check_derivations(spec, tol)

    basis = np.eye(d1, dtype=complex)
    ads = [left_op(f, basis[:, a]) for a in range(d1)]
    for z in spec.center:
        r = float(np.linalg.norm(ads[z])) / max(1.0, f.norm)
        if r > tol:
            raise HypothesisViolation("center", r, f"generator {z} is not central in f")
    _check_skew([ads[h] for h in spec.semisimple], tol, "ad skewness")
    _check_skew([spec.left_maps[h] for h in spec.semisimple], tol, "L skewness")
    _check_skew([spec.right_maps[h] for h in spec.semisimple], tol, "R skewness")
    if spec.center:
        zpairs = [(spec.left_maps[z], spec.right_maps[z]) for z in spec.center]
        _check_nonvanishing(zpairs, tol, "(ii)")
        _check_normal_family([spec.left_maps[z] for z in spec.center], tol, "(ii)")
        _check_normal_family([spec.right_maps[z] for z in spec.center], tol, "(ii)")

    gram = np.empty((d1, d1), dtype=complex)
    for a in range(d1):
        for b in range(d1):
            gram[a, b] = -2.0 / core_c * (
                np.trace(ads[a] @ ads[b].conj().T)
                + np.trace(spec.left_maps[a] @ spec.left_maps[b].conj().T)
                + np.trace(spec.right_maps[a] @ spec.right_maps[b].conj().T)
            )
    s = _orthonormalize(gram)
    lmaps = _transform(spec.left_maps, s)
    rmaps = _transform(spec.right_maps, s)
    f2 = _gl_act_by_inverse(f, s)
    ads2 = [left_op(f2, basis[:, a]) for a in range(d1)]
    # the hypotheses are stated in the orthonormal basis: re-verify there
    _check_skew([ads2[h] for h in spec.semisimple], tol, "ad skewness after orthonormalization")
    _check_skew([lmaps[h] for h in spec.semisimple], tol, "L skewness after orthonormalization")
    _check_skew([rmaps[h] for h in spec.semisimple], tol, "R skewness after orthonormalization")

    out = _assemble(spec.core, lmaps, rmaps, f2.coeffs)
    rep = _certify(out, rmaps, core_c, core_type, d1, tol)
    return out, rep


def _gl_act_by_inverse(f: Bracket, s: np.ndarray) -> Bracket:
    """The bracket of f in the new basis with transition matrix s."""
    return gl_act(np.linalg.inv(s), f)
