import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_bracket, random_hermitian, random_unitary
from leibcrit.bracket import Bracket, evaluate, gl_act, inf_act, inner_product
from leibcrit.linalg import trace_pairing
from leibcrit.moment import (
    CriticalType,
    IrrationalTypeError,
    critical_type,
    critical_value_formula,
    criticality_decompose,
    functional_value,
    hermitian_derivations,
    moment_matrix,
)

LIE2 = Bracket.from_entries(2, {(1, 2, 2): 1}, antisymmetrize=True)
NONLIE2 = Bracket.from_entries(2, {(1, 1, 2): 1})
HEIS = Bracket.from_entries(3, {(1, 2, 3): 1}, antisymmetrize=True)
SO3 = Bracket.from_entries(3, {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1}, antisymmetrize=True)
SL2 = Bracket.from_entries(3, {(3, 1, 1): 2, (3, 2, 2): -2, (1, 2, 3): 1}, antisymmetrize=True)


def moment_entrywise(mu: Bracket) -> np.ndarray:
    """Independent oracle: the defining sums evaluated basis pair by pair."""
    n = mu.dim
    e = np.eye(n)
    m = np.zeros((n, n), dtype=complex)
    prods = {(i, j): evaluate(mu, e[:, i], e[:, j]) for i in range(n) for j in range(n)}
    for u in range(n):
        for v in range(n):
            t1 = t2 = t3 = 0.0
            for i in range(n):
                for j in range(n):
                    t1 += np.conj(prods[i, j][v]) * prods[i, j][u]
                    t2 += prods[i, v][j] * np.conj(prods[i, u][j])
                    t3 += prods[v, i][j] * np.conj(prods[u, i][j])
            m[u, v] = 2.0 * (t1 - t2 - t3)
    return m


class TestMomentMatrix:
    @pytest.mark.parametrize(
        "mu,expected",
        [
            (LIE2, np.diag([-4.0, 0.0])),
            (NONLIE2, np.diag([-4.0, 2.0])),
            (HEIS, np.diag([-4.0, -4.0, 4.0])),
            (SL2, np.diag([-4.0, -4.0, -28.0])),
        ],
    )
    def test_golden_diagonals(self, mu, expected):
        np.testing.assert_allclose(moment_matrix(mu), expected, atol=1e-12)

    def test_matches_entrywise_oracle(self, rng):
        for n in (2, 3, 4):
            mu = random_bracket(n, rng)
            np.testing.assert_allclose(
                moment_matrix(mu), moment_entrywise(mu), atol=1e-10 * mu.norm_sq
            )

    def test_zero_bracket(self):
        assert np.all(moment_matrix(Bracket.zero(3)) == 0)

    def test_hermitian(self, rng):
        m = moment_matrix(random_bracket(4, rng))
        np.testing.assert_array_equal(m, m.conj().T)

    def test_unitary_equivariance(self, rng):
        mu = random_bracket(3, rng)
        k = random_unitary(3, rng)
        lhs = moment_matrix(gl_act(k, mu))
        rhs = k @ moment_matrix(mu) @ k.conj().T
        np.testing.assert_allclose(lhs, rhs, atol=1e-10 * mu.norm_sq)

    def test_scaling(self, rng):
        mu = random_bracket(3, rng)
        c = 0.7 - 2.1j
        np.testing.assert_allclose(
            moment_matrix(Bracket(3, c * mu.coeffs)),
            abs(c) ** 2 * moment_matrix(mu),
            atol=1e-10 * mu.norm_sq,
        )

    def test_trace_identity_500_random(self):
        rng = np.random.default_rng(612)
        for trial in range(500):
            n = 2 + trial % 4
            mu = random_bracket(n, rng, scale=10.0 ** rng.uniform(-2, 2))
            m = moment_matrix(mu)
            assert abs(np.trace(m).real + 2 * mu.norm_sq) < 1e-9 * mu.norm_sq

    def test_pairing_identity(self):
        # tr(M A) = 2 <A.mu, mu> for Hermitian A
        rng = np.random.default_rng(613)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            mu = random_bracket(n, rng)
            a = random_hermitian(n, rng)
            lhs = np.trace(moment_matrix(mu) @ a).real
            rhs = 2.0 * inner_product(inf_act(a, mu), mu).real
            assert abs(lhs - rhs) < 1e-8 * mu.norm_sq * np.linalg.norm(a)

    def test_finite_difference_derivative(self):
        # tr(M A) equals d/dt |exp(tA).mu|^2 at t = 0
        rng = np.random.default_rng(614)
        h = 1e-5
        for _ in range(100):
            n = int(rng.integers(2, 5))
            mu = random_bracket(n, rng).normalized()
            a = random_hermitian(n, rng)
            plus = gl_act(scipy.linalg.expm(h * a), mu).norm_sq
            minus = gl_act(scipy.linalg.expm(-h * a), mu).norm_sq
            deriv = (plus - minus) / (2 * h)
            lhs = np.trace(moment_matrix(mu) @ a).real
            assert abs(lhs - deriv) <= 1e-4 * max(abs(lhs), abs(deriv), 1e-12)

    def test_trace_pairing_with_derivations(self, rng):
        # Hermitian derivations pair to zero with M; general derivations
        # give nonnegative tr M [A, A*]
        for mu in (NONLIE2, HEIS, SO3):
            m = moment_matrix(mu)
            for d in hermitian_derivations(mu):
                assert abs(np.trace(m @ d).real) < 1e-8 * np.linalg.norm(m) * np.linalg.norm(d)
            from leibcrit.linalg import derivation_space

            for a in derivation_space(mu):
                comm = a @ a.conj().T - a.conj().T @ a
                assert np.trace(m @ comm).real >= -1e-8


class TestFunctionalValue:
    def test_golden_values(self):
        assert functional_value(LIE2) == pytest.approx(4.0)
        assert functional_value(NONLIE2) == pytest.approx(20.0)
        assert functional_value(SO3) == pytest.approx(4.0 / 3.0)

    def test_scale_and_unitary_invariance(self, rng):
        mu = random_bracket(3, rng)
        k = random_unitary(3, rng)
        f = functional_value(mu)
        assert functional_value(Bracket(3, 5.5j * mu.coeffs)) == pytest.approx(f, rel=1e-10)
        assert functional_value(gl_act(k, mu)) == pytest.approx(f, rel=1e-10)

    def test_zero_bracket_rejected(self):
        with pytest.raises(ValueError, match="zero bracket"):
            functional_value(Bracket.zero(2))

    def test_lower_bound_and_scalar_gap(self):
        rng = np.random.default_rng(615)
        for _ in range(200):
            n = int(rng.integers(2, 6))
            mu = random_bracket(n, rng)
            f = functional_value(mu)
            assert f >= 4.0 / n - 1e-10
            # F - 4/n equals the squared distance of m to its trace part
            m = moment_matrix(mu) / mu.norm_sq
            gap = m - (np.trace(m).real / n) * np.eye(n)
            assert f - 4.0 / n == pytest.approx(
                np.vdot(gap, gap).real, abs=1e-9 * max(1.0, f)
            )

    def test_equality_iff_scalar(self):
        assert functional_value(SO3) == pytest.approx(4.0 / 3.0, abs=1e-9)
        m = moment_matrix(SO3)
        assert np.linalg.norm(m - (np.trace(m) / 3) * np.eye(3)) < 1e-12


class TestCriticalityDecompose:
    def test_nonlie2(self):
        rep = criticality_decompose(NONLIE2)
        assert rep.c == pytest.approx(-10.0)
        np.testing.assert_allclose(rep.D, np.diag([6.0, 12.0]), atol=1e-12)
        assert rep.is_critical
        assert rep.residual_tangent < 1e-12 and rep.residual_decomp < 1e-12
        assert rep.derivation_defect < 1e-12

    def test_lie2(self):
        rep = criticality_decompose(LIE2)
        assert rep.c == pytest.approx(-4.0)
        np.testing.assert_allclose(rep.D, np.diag([0.0, 4.0]), atol=1e-12)
        assert rep.is_critical

    def test_sl2_weight_basis_not_critical(self):
        rep = criticality_decompose(SL2)
        assert not rep.is_critical
        assert rep.residual_tangent > 0.1
        assert rep.residual_decomp > 0.01

    def test_residuals_vanish_together(self):
        from leibcrit.catalog import standard_rows

        for entry in standard_rows():
            rep = criticality_decompose(entry.bracket)
            if rep.residual_tangent < rep.tol:
                assert rep.residual_decomp < 10 * rep.tol, entry.label
            if rep.residual_decomp < rep.tol:
                assert rep.residual_tangent < 10 * rep.tol, entry.label

    def test_trace_relation(self, rng):
        mu = random_bracket(3, rng)
        rep = criticality_decompose(mu)
        assert np.trace(rep.M).real == pytest.approx(-2 * rep.norm_sq, rel=1e-10)
        assert rep.F >= 4.0 / 3 - 1e-10

    def test_zero_rejected(self):
        with pytest.raises(ValueError, match="zero bracket"):
            criticality_decompose(Bracket.zero(2))


class TestHermitianDerivations:
    def test_nonlie2_contains_weight_map(self):
        herms = hermitian_derivations(NONLIE2)
        target = np.diag([1.0 + 0j, 2.0])
        proj = sum(h * np.real(trace_pairing(target, h)) for h in herms)
        assert np.linalg.norm(proj - target) < 1e-9

    def test_all_hermitian_and_derivations(self, rng):
        mu = random_bracket(3, rng)
        for h in hermitian_derivations(mu):
            assert np.linalg.norm(h - h.conj().T) < 1e-9
            assert inf_act(h, mu).norm < 1e-7 * mu.norm


class TestCriticalType:
    def test_weighted_pair(self):
        t = critical_type(np.diag([6.0, 12.0]))
        assert (t.ks, t.ds) == ((1, 2), (1, 1))
        assert t.scale == pytest.approx(1.0 / 6.0)

    def test_zero_map(self):
        t = critical_type(np.zeros((3, 3)))
        assert t == CriticalType.zero(3)
        assert str(t) == "(0;3)"

    def test_s1_spectrum(self):
        t = critical_type(np.diag([12.0, 10.0, 6.0]))
        assert (t.ks, t.ds) == ((3, 5, 6), (1, 1, 1))
        assert t.scale == pytest.approx(0.5)

    def test_multiplicity_clustering(self):
        t = critical_type(np.diag([4.0, 4.0 + 1e-9, 8.0]))
        assert (t.ks, t.ds) == ((1, 2), (2, 1))

    def test_negative_entries_allowed(self):
        t = critical_type(np.diag([-2.0, 4.0]))
        assert t.ks == (-1, 2)
        assert t.scale > 0

    def test_irrational_raises(self):
        with pytest.raises(IrrationalTypeError):
            critical_type(np.diag([1.0, np.sqrt(2.0)]), tol=1e-8, max_denominator=50)

    def test_str_format(self):
        assert str(CriticalType((0, 1), (1, 2))) == "(0<1;1,2)"
        assert str(CriticalType((3, 5, 6), (1, 1, 1))) == "(3<5<6;1,1,1)"

    def test_type_validation(self):
        with pytest.raises(ValueError, match="coprime"):
            CriticalType((2, 4), (1, 1))
        with pytest.raises(ValueError, match="increasing"):
            CriticalType((2, 1), (1, 1))
        with pytest.raises(ValueError, match="positive"):
            CriticalType((1, 2), (1, 0))

    @given(
        st.lists(st.integers(-6, 8), min_size=1, max_size=4, unique=True),
        st.floats(0.1, 10.0),
        st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_round_trip_from_integer_spectrum(self, raw_ks, inv_scale, seed):
        rng = np.random.default_rng(seed)
        ks = sorted(raw_ks)
        nonzero = [abs(k) for k in ks if k]
        if nonzero:
            g = math.gcd(*nonzero)
            ks = [k // g for k in ks]
        else:
            ks = [0]
        ds = [int(rng.integers(1, 4)) for _ in ks]
        eigs = np.repeat(np.array(ks, dtype=float) / inv_scale, ds)
        u = random_unitary(len(eigs), rng)
        d = u @ np.diag(eigs) @ u.conj().T
        t = critical_type(0.5 * (d + d.conj().T))
        if ks == [0]:
            assert t == CriticalType.zero(int(sum(ds)))
        else:
            assert t.ks == tuple(ks)
            assert t.ds == tuple(ds)


class TestCriticalValueFormula:
    @pytest.mark.parametrize(
        "ks,ds,n,expected",
        [
            ((0,), (3,), 3, 4.0 / 3.0),
            ((1, 2), (2, 1), 3, 12.0),
            ((3, 5, 6), (1, 1, 1), 3, 20.0),
            ((0, 1), (1, 2), 3, 4.0),
            ((0, 3, 5, 6), (1, 1, 1, 1), 4, 10.0 / 3.0),
            ((0, 3, 5, 6), (3, 1, 1, 1), 6, 1.25),
            ((2, 3, 4), (2, 1, 1), 4, 12.0),
        ],
    )
    def test_golden(self, ks, ds, n, expected):
        assert critical_value_formula(CriticalType(ks, ds), n) == pytest.approx(expected)

    def test_degenerate_denominator(self):
        with pytest.raises(ValueError, match="degenerate"):
            critical_value_formula(CriticalType((1,), (3,)), 3)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="multiplicity"):
            critical_value_formula(CriticalType((0, 1), (1, 1)), 3)

    def test_consistency_on_criticals(self):
        for mu, n in ((LIE2, 2), (NONLIE2, 2), (HEIS, 3), (SO3, 3)):
            rep = criticality_decompose(mu)
            assert rep.is_critical
            t = critical_type(rep.D)
            assert critical_value_formula(t, n) == pytest.approx(rep.F, rel=1e-8)
