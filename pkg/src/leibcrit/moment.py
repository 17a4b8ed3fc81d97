"""Moment matrix, the functional F, criticality certificates and types.

For a nonzero product mu on C^n the Hermitian moment matrix is

    M = 2 sum_i L_i L_i* - 2 sum_i L_i* L_i - 2 sum_i R_i* R_i,

where L_i, R_i are left/right multiplication by the i-th basis vector.
Its trace is always -2 |mu|^2, and the scale- and unitary-invariant
functional studied here is F = tr(M^2) / |mu|^4.

The projective class of mu is a critical point of F exactly when
M = c I + D for a real constant c and a derivation D of mu, in which
case c = tr(M^2)/tr(M) < 0 and there is a constant s > 0 making the
eigenvalues of s D coprime integers; those integers with their
multiplicities form the critical type, and they determine F through
:func:`critical_value_formula`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bracket import Bracket, inf_act, inner_product
from .linalg import hermitian_eigen, cluster_values, derivation_space, _nullspace

__all__ = [
    "MomentReport",
    "CriticalType",
    "IrrationalTypeError",
    "moment_matrix",
    "functional_value",
    "criticality_decompose",
    "critical_type",
    "critical_value_formula",
    "hermitian_derivations",
    "DEFAULT_CRITICAL_TOL",
    "DEFAULT_TYPE_TOL",
    "DEFAULT_MAX_DENOMINATOR",
]

DEFAULT_CRITICAL_TOL = 1e-8
DEFAULT_TYPE_TOL = 1e-6
DEFAULT_MAX_DENOMINATOR = 100


class IrrationalTypeError(ArithmeticError):
    """No positive constant makes the spectrum integral within tolerance."""


@dataclass(frozen=True)
class CriticalType:
    """Coprime integer spectrum with multiplicities.

    ``scale`` is the positive constant relating the certified derivation
    part D to the integers, ``scale * eig(D) ~ ks``; it is excluded from
    equality so types compare by their integer data alone.
    """

    ks: tuple[int, ...]
    ds: tuple[int, ...]
    scale: float = field(compare=False, default=1.0)

    def __post_init__(self) -> None:
        if len(self.ks) != len(self.ds) or not self.ks:
            raise ValueError("ks and ds must be nonempty and of equal length")
        if any(d <= 0 for d in self.ds):
            raise ValueError("multiplicities must be positive")
        if any(a >= b for a, b in zip(self.ks, self.ks[1:])):
            raise ValueError("ks must be strictly increasing")
        nonzero = [abs(k) for k in self.ks if k != 0]
        if nonzero:
            if math.gcd(*nonzero) != 1:
                raise ValueError("nonzero entries must be coprime")
        elif self.ks != (0,):
            raise ValueError("all-zero type must be written (0; n)")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def n(self) -> int:
        return sum(self.ds)

    @classmethod
    def zero(cls, n: int) -> "CriticalType":
        return cls((0,), (n,), 1.0)

    def __str__(self) -> str:
        ks = "<".join(str(k) for k in self.ks)
        ds = ",".join(str(d) for d in self.ds)
        return f"({ks};{ds})"


@dataclass(frozen=True)
class MomentReport:
    """Moment matrix of a product with its criticality certificate.

    ``residual_tangent`` is the certifying residual: the component of M.mu
    orthogonal to mu, relative to |M| |mu|.  ``residual_decomp`` is the
    distance (relative to |M|) from M to the affine set c I + Hermitian
    derivations, an independent cross-check.  ``c`` and ``D`` always hold
    the candidate decomposition M = c I + D with c = tr(M^2)/tr(M); its
    defect as a derivation is ``derivation_defect = |D.mu| / |mu|``.
    """

    M: np.ndarray
    norm_sq: float
    F: float
    c: float
    D: np.ndarray
    residual_decomp: float
    residual_tangent: float
    derivation_defect: float
    is_critical: bool
    tol: float


def moment_matrix(mu: Bracket) -> np.ndarray:
    """Hermitian moment matrix of mu (zero bracket gives the zero matrix)."""
    c = mu.coeffs
    t1 = np.einsum("iju,ijv->uv", c, c.conj())
    t2 = np.einsum("ivj,iuj->uv", c, c.conj())
    t3 = np.einsum("vij,uij->uv", c, c.conj())
    m = 2.0 * (t1 - t2 - t3)
    return 0.5 * (m + m.conj().T)


def functional_value(mu: Bracket) -> float:
    """F = tr(M^2) / |mu|^4; invariant under scaling and unitary base change."""
    nsq = mu.norm_sq
    if nsq == 0.0:
        raise ValueError("the zero bracket has no projective class")
    m = moment_matrix(mu)
    return float(np.vdot(m, m).real) / nsq**2


def hermitian_derivations(mu: Bracket, tol: float = 1e-9) -> list[np.ndarray]:
    """Real-orthonormal basis of the Hermitian derivations of mu.

    The complex derivation space is first computed, then the real-linear
    condition a = a* is solved inside its realification; the result is
    orthonormal under the real trace pairing Re tr(a b*).
    """
    ders = derivation_space(mu, tol)
    if not ders:
        return []
    n = mu.dim
    cands = ders + [1j * a for a in ders]
    defect = np.stack([(a - a.conj().T).ravel() for a in cands], axis=1)
    real_defect = np.vstack([defect.real, defect.imag])
    null = _nullspace(real_defect.astype(complex), abs_tol=1e-10 * max(1.0, np.abs(defect).max()))
    coeffs = null.real  # nullspace of a real matrix has a real basis
    herms = []
    for j in range(coeffs.shape[1]):
        a = sum(coeffs[l, j] * cands[l] for l in range(len(cands)))
        herms.append(0.5 * (a + a.conj().T))
    if not herms:
        return []
    # real orthonormalization under Re tr(a b*)
    stack = np.stack([np.concatenate([a.real.ravel(), a.imag.ravel()]) for a in herms], axis=1)
    q, r = np.linalg.qr(stack)
    keep = np.abs(np.diag(r)) > 1e-10 * max(1.0, np.abs(np.diag(r)).max())
    out = []
    for j in range(q.shape[1]):
        if not keep[j]:
            continue
        v = q[:, j]
        a = v[: n * n].reshape(n, n) + 1j * v[n * n :].reshape(n, n)
        out.append(0.5 * (a + a.conj().T))
    return out


def criticality_decompose(
    mu: Bracket, tol: float = DEFAULT_CRITICAL_TOL
) -> MomentReport:
    """Compute M, F and the criticality certificate of a nonzero product."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    nsq = mu.norm_sq
    if nsq == 0.0:
        raise ValueError("the zero bracket has no projective class")
    m = moment_matrix(mu)
    norm_m = float(np.linalg.norm(m))
    tr_m = float(np.trace(m).real)
    tr_m2 = float(np.vdot(m, m).real)
    f = tr_m2 / nsq**2
    c = tr_m2 / tr_m
    d = m - c * np.eye(mu.dim)
    d_defect = inf_act(d, mu).norm / mu.norm

    v = inf_act(m, mu)
    along = inner_product(v, mu) / nsq
    v_perp = v.coeffs - along * mu.coeffs
    residual_tangent = float(np.linalg.norm(v_perp)) / (norm_m * mu.norm)

    # independent residual: project M onto span_R{I} + Hermitian derivations
    basis = [np.eye(mu.dim, dtype=complex) / math.sqrt(mu.dim)]
    basis.extend(hermitian_derivations(mu))
    stack = np.stack(
        [np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in basis], axis=1
    )
    q, _ = np.linalg.qr(stack)
    mv = np.concatenate([m.real.ravel(), m.imag.ravel()])
    resid = mv - q @ (q.T @ mv)
    residual_decomp = float(np.linalg.norm(resid)) / norm_m

    return MomentReport(
        M=m,
        norm_sq=nsq,
        F=f,
        c=c,
        D=d,
        residual_decomp=residual_decomp,
        residual_tangent=residual_tangent,
        derivation_defect=d_defect,
        is_critical=residual_tangent < tol,
        tol=tol,
    )


def critical_type(
    d: np.ndarray,
    tol: float = DEFAULT_TYPE_TOL,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> CriticalType:
    """Integer type of a Hermitian map with (projectively) rational spectrum.

    Eigenvalues are clustered within ``tol * max(1, |d|)``; the cluster
    representatives are scaled by the positive constant reconstructed from
    their ratios by continued fractions (denominators bounded by
    ``max_denominator``) so that they become coprime integers.  Raises
    :class:`IrrationalTypeError` when no admissible constant exists.
    """
    w, _ = hermitian_eigen(d)
    n = len(w)
    if n == 0:
        raise ValueError("empty matrix has no type")
    gap = tol * max(1.0, float(np.abs(w).max()))
    clusters = cluster_values(w, gap)
    reps = np.array([cl[0] for cl in clusters])
    mults = [cl[2] - cl[1] for cl in clusters]
    if np.abs(reps).max() <= gap:
        return CriticalType.zero(n)

    ref = reps[int(np.argmax(np.abs(reps)))]
    fracs = [Fraction(float(r / ref)).limit_denominator(max_denominator) for r in reps]
    common = math.lcm(*(fr.denominator for fr in fracs))
    ints = [fr.numerator * (common // fr.denominator) for fr in fracs]
    sign = 1 if ref > 0 else -1
    ints = [sign * m for m in ints]
    g = math.gcd(*(abs(m) for m in ints if m != 0))
    ks = [m // g for m in ints]
    scale = common / (g * abs(ref))
    err = float(np.abs(scale * reps - np.array(ks, dtype=float)).max())
    if err >= tol:
        raise IrrationalTypeError(
            f"no admissible scaling found (best rounding error {err:.3g})"
        )
    return CriticalType(tuple(ks), tuple(mults), scale)


def critical_value_formula(t: CriticalType, n: int) -> float:
    """Value of F forced by a critical type in ambient dimension n."""
    if t.n != n:
        raise ValueError(f"type has total multiplicity {t.n}, expected {n}")
    if t.ks == (0,):
        return 4.0 / n
    s1 = sum(k * d for k, d in zip(t.ks, t.ds))
    s2 = sum(k * k * d for k, d in zip(t.ks, t.ds))
    denom = n - s1 * s1 / s2
    if denom <= 1e-12:
        raise ValueError(f"inadmissible type {t}: degenerate denominator")
    return 4.0 / denom
