"""Gradient descent of F inside a single GL(n)-orbit.

Within a distinguished orbit F attains its minimum exactly at the critical
set, which is a single unitary orbit; descending F from any starting
product therefore converges to the critical point of the isomorphism
class when one exists.  The descent direction at mu is the orbit tangent
generated by the moment matrix, projected off the radial direction; each
step is followed by renormalization to the unit sphere and accepted only
if it decreases F (backtracking line search).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .bracket import Bracket, gl_act, inf_act, inner_product
from .moment import MomentReport, criticality_decompose, moment_matrix

__all__ = ["FlowParams", "FlowTrace", "descend", "perturb_in_orbit"]

_MAX_BACKTRACKS = 60


@dataclass(frozen=True)
class FlowParams:
    """Line-search and stopping parameters for :func:`descend`.

    The trial step at each iteration is ``step0 / |M|``, so ``step0`` is a
    dimensionless step scale.
    """

    step0: float = 0.1
    armijo_c: float = 1e-4
    shrink: float = 0.5
    max_iter: int = 50_000
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.step0 > 0 and self.max_iter > 0 and self.tol > 0):
            raise ValueError("step0, max_iter and tol must be positive")
        if not (0 < self.armijo_c < 1 and 0 < self.shrink < 1):
            raise ValueError("armijo_c and shrink must lie in (0, 1)")


@dataclass(frozen=True)
class FlowTrace:
    final_bracket: Bracket
    F_history: np.ndarray
    residual_history: np.ndarray
    iterations: int
    converged: bool
    final_report: MomentReport
    message: str = field(default="", compare=False)


def descend(mu0: Bracket, params: FlowParams | None = None) -> FlowTrace:
    """Minimize F over the orbit of mu0, stopping at a certified critical point.

    Iterates are kept at unit norm; convergence means the tangential
    residual of M.mu dropped below ``params.tol``.  A line-search underflow
    is reported as non-convergence with a diagnostic message.
    """
    p = params or FlowParams()
    if mu0.is_zero:
        raise ValueError("cannot flow from the zero bracket")
    mu = mu0.normalized()
    f_hist: list[float] = []
    r_hist: list[float] = []
    message = ""
    converged = False
    it = 0
    while it <= p.max_iter:
        m = moment_matrix(mu)
        norm_m = float(np.linalg.norm(m))
        f = float(np.vdot(m, m).real)  # |mu| = 1
        v = inf_act(m, mu).coeffs
        v_perp = v - inner_product(Bracket(mu.dim, v), mu) * mu.coeffs
        res = float(np.linalg.norm(v_perp)) / norm_m
        f_hist.append(f)
        r_hist.append(res)
        if res < p.tol:
            converged = True
            if it > 0:
                # a gradient limit is only guaranteed to sit in the closure
                # of the starting orbit; isomorphism to the start is not
                # certified (and genuinely fails for some inputs)
                message = "limit may lie outside the starting orbit (closure limit)"
            break
        if it == p.max_iter:
            message = "iteration limit reached"
            break

        h = p.step0 / norm_m
        slope = float(np.vdot(v_perp, v_perp).real)
        # the slack keeps progress possible once per-step decreases of F
        # fall below its floating-point resolution near the minimum
        slack = 1e-14 * max(1.0, f)
        accepted = None
        for _ in range(_MAX_BACKTRACKS):
            cand = mu.coeffs - h * v_perp
            cand_b = Bracket(mu.dim, cand / np.linalg.norm(cand))
            mc = moment_matrix(cand_b)
            f_cand = float(np.vdot(mc, mc).real)
            if f_cand <= f - p.armijo_c * h * slope + slack:
                accepted = cand_b
                break
            h *= p.shrink
        if accepted is None:
            message = "line search underflow"
            break
        mu = accepted
        it += 1

    final_report = criticality_decompose(mu, p.tol)
    return FlowTrace(
        final_bracket=mu,
        F_history=np.array(f_hist),
        residual_history=np.array(r_hist),
        iterations=it,
        converged=converged,
        final_report=final_report,
        message=message,
    )


def perturb_in_orbit(mu: Bracket, magnitude: float, seed: int) -> Bracket:
    """Move mu inside its orbit by exp(a) for a seeded random a of given norm."""
    if magnitude < 0:
        raise ValueError("magnitude must be nonnegative")
    if magnitude == 0.0:
        return mu
    rng = np.random.default_rng(seed)
    n = mu.dim
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a *= magnitude / np.linalg.norm(a)
    return gl_act(scipy.linalg.expm(a), mu)
