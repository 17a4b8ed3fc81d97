"""Structure-constant tensors on C^n and the natural group actions.

A bilinear product mu on C^n is stored through its structure constants
``c[i, j, k]`` with respect to the standard orthonormal basis: the product
of ``e_i`` and ``e_j`` is ``sum_k c[i, j, k] e_k``.  The standard Hermitian
inner product on C^n induces the inner product on the space of products

    <mu, lam> = sum_{i,j,k} c_mu[i,j,k] * conj(c_lam[i,j,k]),

which is what :func:`inner_product` computes; it is invariant under the
unitary subgroup of the GL(n) action implemented by :func:`gl_act`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

__all__ = [
    "Bracket",
    "IdentityReport",
    "evaluate",
    "gl_act",
    "inf_act",
    "inner_product",
    "check_identities",
    "direct_sum",
    "DEFAULT_IDENTITY_TOL",
]

DEFAULT_IDENTITY_TOL = 1e-9

#: Acting matrices with a larger condition number are rejected.
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class Bracket:
    """Immutable bilinear product on C^n given by its coefficient tensor."""

    dim: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        arr = np.array(self.coeffs, dtype=complex, copy=True)
        if arr.shape != (self.dim,) * 3:
            raise ValueError(
                f"coefficient tensor must have shape {(self.dim,) * 3}, got {arr.shape}"
            )
        if arr.size and not np.isfinite(arr).all():
            raise ValueError("coefficients must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def zero(cls, dim: int) -> "Bracket":
        return cls(dim, np.zeros((dim, dim, dim), dtype=complex))

    @classmethod
    def from_entries(
        cls,
        dim: int,
        entries: Mapping[tuple[int, int, int], complex],
        *,
        one_based: bool = True,
        antisymmetrize: bool = False,
    ) -> "Bracket":
        """Build a bracket from a sparse table of coefficients.

        With ``antisymmetrize=True`` every entry ``(i, j, k) -> v`` also
        contributes ``(j, i, k) -> -v``, which turns a Lie multiplication
        table (one product per unordered pair) into the full tensor.
        """
        off = 1 if one_based else 0
        c = np.zeros((dim, dim, dim), dtype=complex)
        for (i, j, k), v in entries.items():
            ii, jj, kk = i - off, j - off, k - off
            for idx in (ii, jj, kk):
                if not 0 <= idx < dim:
                    raise ValueError(f"index {(i, j, k)} out of range for dim {dim}")
            c[ii, jj, kk] += v
            if antisymmetrize:
                if ii == jj:
                    raise ValueError("antisymmetric table cannot have equal first indices")
                c[jj, ii, kk] -= v
        return cls(dim, c)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def normalized(self) -> "Bracket":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero bracket")
        return Bracket(self.dim, self.coeffs / n)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        nnz = int(np.count_nonzero(self.coeffs))
        return f"Bracket(dim={self.dim}, nonzero={nnz}, norm_sq={self.norm_sq:.6g})"


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the defining identities, measured on the unit-norm bracket.

    Each residual is the maximum over basis triples (pairs for
    anticommutativity) of the norm of the corresponding defect vector.
    """

    left_residual: float
    right_residual: float
    anticommutativity_residual: float
    jacobi_residual: float
    tol: float

    @property
    def is_left_leibniz(self) -> bool:
        return self.left_residual <= self.tol

    @property
    def is_right_leibniz(self) -> bool:
        return self.right_residual <= self.tol

    @property
    def is_symmetric_leibniz(self) -> bool:
        return self.is_left_leibniz and self.is_right_leibniz

    @property
    def is_lie(self) -> bool:
        return (
            self.anticommutativity_residual <= self.tol
            and self.jacobi_residual <= self.tol
        )


def _check_vector(x: np.ndarray, dim: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (dim,):
        raise ValueError(f"{name} must be a vector of length {dim}, got shape {x.shape}")
    return x


def evaluate(mu: Bracket, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of the vectors x and y under mu."""
    x = _check_vector(x, mu.dim, "x")
    y = _check_vector(y, mu.dim, "y")
    return np.einsum("i,j,ijk->k", x, y, mu.coeffs)


def gl_act(g: np.ndarray, mu: Bracket) -> Bracket:
    """Base change of mu by an invertible matrix g.

    The new product sends (x, y) to ``g mu(g^-1 x, g^-1 y)``, so the orbit
    of mu under all invertible g is its isomorphism class.
    """
    g = np.asarray(g, dtype=complex)
    n = mu.dim
    if g.shape != (n, n):
        raise ValueError(f"g must be {n}x{n}, got shape {g.shape}")
    if n == 0:
        return mu
    cond = np.linalg.cond(g)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ValueError(f"matrix is singular or ill-conditioned (cond={cond:.3g})")
    ginv = np.linalg.inv(g)
    c = np.einsum("ai,bj,kc,abc->ijk", ginv, ginv, g, mu.coeffs, optimize=True)
    return Bracket(n, c)


def inf_act(a: np.ndarray, mu: Bracket) -> Bracket:
    """Infinitesimal version of :func:`gl_act` for a matrix a.

    Sends (x, y) to ``a mu(x, y) - mu(a x, y) - mu(x, a y)``; the result is
    zero exactly when a is a derivation of mu.
    """
    a = np.asarray(a, dtype=complex)
    n = mu.dim
    if a.shape != (n, n):
        raise ValueError(f"matrix must be {n}x{n}, got shape {a.shape}")
    c = mu.coeffs
    out = (
        np.einsum("km,ijm->ijk", a, c)
        - np.einsum("mi,mjk->ijk", a, c)
        - np.einsum("mj,imk->ijk", a, c)
    )
    return Bracket(n, out)


def inner_product(mu: Bracket, lam: Bracket) -> complex:
    """Hermitian inner product <mu, lam> on the space of products."""
    if mu.dim != lam.dim:
        raise ValueError(f"dimension mismatch: {mu.dim} vs {lam.dim}")
    return complex(np.vdot(lam.coeffs, mu.coeffs))


def _max_defect_norm(t: np.ndarray) -> float:
    """Max over leading indices of the vector norm along the last axis."""
    if t.size == 0:
        return 0.0
    return float(np.sqrt((np.abs(t) ** 2).sum(axis=-1)).max())


def check_identities(mu: Bracket, tol: float = DEFAULT_IDENTITY_TOL) -> IdentityReport:
    """Residuals of the left/right Leibniz identities plus the Lie pair.

    The bracket is normalized to unit norm first so the residuals, and the
    flags derived from them, do not depend on the overall scale.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mu.is_zero:
        return IdentityReport(0.0, 0.0, 0.0, 0.0, tol)
    c = mu.coeffs / mu.norm
    # x(yz), (xy)z, y(xz), (xz)y indexed [a, b, c, k] for the triple
    # (x, y, z) = (e_a, e_b, e_c).
    x_yz = np.einsum("bcm,amk->abck", c, c)
    xy_z = np.einsum("abm,mck->abck", c, c)
    y_xz = np.einsum("acm,bmk->abck", c, c)
    xz_y = np.einsum("acm,mbk->abck", c, c)
    left = _max_defect_norm(x_yz - xy_z - y_xz)
    right = _max_defect_norm(xy_z - xz_y - x_yz)
    anti = _max_defect_norm(c + c.transpose(1, 0, 2))
    jac = _max_defect_norm(
        x_yz
        + np.einsum("cam,bmk->abck", c, c)
        + np.einsum("abm,cmk->abck", c, c)
    )
    return IdentityReport(left, right, anti, jac, tol)


def direct_sum(mu1: Bracket, mu2: Bracket) -> Bracket:
    """Block-diagonal product on C^(n1+n2) with no cross terms."""
    n1, n2 = mu1.dim, mu2.dim
    c = np.zeros((n1 + n2,) * 3, dtype=complex)
    c[:n1, :n1, :n1] = mu1.coeffs
    c[n1:, n1:, n1:] = mu2.coeffs
    return Bracket(n1 + n2, c)
