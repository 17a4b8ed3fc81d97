"""Operator-level utilities: multiplication operators, derivation spaces,
Hermitian eigendecomposition and orthonormal subspaces.

Linear maps are plain complex ndarrays of shape (n, n); the pairing used
throughout is the trace form ``(A, B) = tr(A B*)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bracket import Bracket, inf_act

__all__ = [
    "Subspace",
    "left_op",
    "right_op",
    "trace_pairing",
    "is_hermitian",
    "hermitian_eigen",
    "derivation_space",
    "subspace_product",
    "restrict",
    "cluster_values",
    "RANK_RTOL",
]

#: Relative singular-value threshold for numerical rank decisions.
RANK_RTOL = 1e-9

HERMITIAN_CERT_TOL = 1e-12


def left_op(mu: Bracket, x: np.ndarray) -> np.ndarray:
    """Matrix of y -> mu(x, y)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (mu.dim,):
        raise ValueError(f"x must have length {mu.dim}")
    return np.einsum("i,ijk->kj", x, mu.coeffs)


def right_op(mu: Bracket, x: np.ndarray) -> np.ndarray:
    """Matrix of y -> mu(y, x)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (mu.dim,):
        raise ValueError(f"x must have length {mu.dim}")
    return np.einsum("j,ijk->ki", x, mu.coeffs)


def trace_pairing(a: np.ndarray, b: np.ndarray) -> complex:
    """tr(a b*)."""
    return complex(np.vdot(b, a))


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_CERT_TOL) -> bool:
    nrm = np.linalg.norm(a)
    return float(np.linalg.norm(a - a.conj().T)) <= tol * max(nrm, 1.0)


def hermitian_eigen(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition h = U diag(w) U* with w ascending.

    Raises ValueError when h is not (certifiably) Hermitian.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    if not is_hermitian(h):
        raise ValueError("matrix is not Hermitian")
    w, u = np.linalg.eigh(h)
    return w, u


def _nullspace(m: np.ndarray, abs_tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of {v : m v = 0} with |m v| <= abs_tol."""
    if m.size == 0:
        k = m.shape[1]
        return np.eye(k, dtype=complex)
    _, s, vh = np.linalg.svd(m)
    ncols = m.shape[1]
    small = np.ones(ncols, dtype=bool)
    small[: s.size] = s <= abs_tol
    return vh.conj().T[:, small]


def derivation_space(mu: Bracket, tol: float = RANK_RTOL) -> list[np.ndarray]:
    """Orthonormal basis of the complex space of derivations of mu.

    The linear operator a -> a.mu is materialized as an (n^3, n^2) matrix
    and its nullspace extracted by singular values; every returned map a
    satisfies ``|a.mu| <= tol * |mu|``.  For the zero bracket all n^2
    elementary maps are derivations.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = mu.dim
    if n == 0:
        return []
    cols = []
    basis = np.eye(n, dtype=complex)
    for p in range(n):
        for q in range(n):
            e = np.outer(basis[:, p], basis[:, q])
            cols.append(inf_act(e, mu).coeffs.ravel())
    op = np.column_stack(cols) if cols else np.zeros((n**3, 0))
    null = _nullspace(op, abs_tol=tol * mu.norm)
    return [null[:, j].reshape(n, n) for j in range(null.shape[1])]


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of C^n stored as orthonormal columns."""

    basis: np.ndarray

    def __post_init__(self) -> None:
        b = np.array(self.basis, dtype=complex, copy=True)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        gram = b.conj().T @ b
        if gram.size and np.linalg.norm(gram - np.eye(b.shape[1])) > 1e-12 * max(1, b.shape[1]):
            raise ValueError("basis columns are not orthonormal")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def dim_ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0), dtype=complex))

    @classmethod
    def from_span(cls, n: int, vectors: np.ndarray, rtol: float = RANK_RTOL) -> "Subspace":
        """Orthonormal span of the given column vectors.

        Rank is the number of singular values above ``rtol`` times the
        largest one (or above ``rtol`` itself when all are tiny).
        """
        m = np.asarray(vectors, dtype=complex).reshape(n, -1)
        if m.shape[1] == 0:
            return cls.zero(n)
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        if s.size == 0 or s[0] <= rtol:
            return cls.zero(n)
        keep = s > rtol * s[0]
        return cls(u[:, keep])

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.conj().T @ v)

    def contains(self, other: "Subspace", tol: float = 1e-10) -> bool:
        if other.rank == 0:
            return True
        d = other.basis - self.project(other.basis)
        return float(np.linalg.norm(d)) <= tol * max(1.0, float(np.linalg.norm(other.basis)))


def subspace_product(mu: Bracket, u: Subspace, w: Subspace, rtol: float = RANK_RTOL) -> Subspace:
    """Orthonormal span of all products mu(x, y) with x in u, y in w."""
    n = mu.dim
    if u.dim_ambient != n or w.dim_ambient != n:
        raise ValueError("ambient dimensions must match the bracket")
    if u.rank == 0 or w.rank == 0:
        return Subspace.zero(n)
    imgs = np.einsum("ia,jb,ijk->kab", u.basis, w.basis, mu.coeffs)
    return Subspace.from_span(n, imgs.reshape(n, -1), rtol=rtol)


def restrict(mu: Bracket, sub: Subspace) -> Bracket:
    """Compression of mu to a subspace, in its orthonormal basis.

    This is the honest restriction when the subspace is closed under mu;
    in general it is the orthogonal projection of the products.
    """
    b = sub.basis
    c = np.einsum("ia,jb,ijk,kc->abc", b, b, mu.coeffs, b.conj(), optimize=True)
    return Bracket(sub.rank, c)


def cluster_values(values: np.ndarray, gap: float) -> list[tuple[float, int, int]]:
    """Group ascending real values into clusters separated by more than gap.

    Returns (mean, start, stop) per cluster with stop exclusive.
    """
    out: list[tuple[float, int, int]] = []
    k = len(values)
    start = 0
    for i in range(1, k + 1):
        if i == k or values[i] - values[i - 1] > gap:
            out.append((float(np.mean(values[start:i])), start, i))
            start = i
    return out
