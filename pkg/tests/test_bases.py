import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from annihilator import bases
from annihilator.errors import BasisError, ConditioningError, DimensionError
from conftest import crandn, spec_of

SKEW = np.array([[1, 1 / math.sqrt(2)], [0, 1 / math.sqrt(2)]])


def skew():
    return bases.Basis(SKEW)


# ----------------------------------------------------------- construction


@pytest.mark.parametrize(
    "cols,invariant",
    [
        (np.ones((2, 3)), "square"),
        (np.array([[2.0, 0], [0, 1]]), "unit_norm"),
        (np.array([[1.0, 1.0], [0, 0]]), "independent"),
    ],
)
def test_invalid_bases_name_the_invariant(cols, invariant):
    with pytest.raises(BasisError) as exc:
        bases.Basis(cols)
    assert exc.value.invariant == invariant


def test_json_round_trip(rng):
    phi = bases.random_basis(5, rng)
    back = bases.Basis.from_json(phi.to_json())
    np.testing.assert_array_equal(back.columns, phi.columns)


def test_json_loader_reports_failed_invariant():
    text = '{"dim": 2, "columns": [[[1,0],[0,0]], [[1,0],[0,0]]]}'
    with pytest.raises(BasisError) as exc:
        bases.Basis.from_json(text)
    assert exc.value.invariant == "independent"
    with pytest.raises(BasisError) as exc:
        bases.Basis.from_json('{"dim": 3, "columns": [[[1,0],[0,0]], [[0,0],[1,0]]]}')
    assert exc.value.invariant == "dim"


# ------------------------------------------------------------------- dual


def test_dual_of_orthonormal_is_itself(rng):
    phi = bases.random_orthonormal_basis(6, rng)
    np.testing.assert_allclose(bases.dual_basis(phi), phi.columns, atol=1e-12)
    np.testing.assert_array_equal(bases.dual_basis(bases.standard_basis(5)), np.eye(5))


def test_dual_of_skew_basis():
    dual = bases.dual_basis(skew())
    np.testing.assert_allclose(dual[:, 0], [1, -1], atol=1e-12)
    np.testing.assert_allclose(dual[:, 1], [0, math.sqrt(2)], atol=1e-12)


def test_dual_biorthogonality(rng):
    phi = bases.random_basis(7, rng)
    G = phi.dual.conj().T @ phi.columns  # entry (k, j) = <Phi_j, Phi*_k>
    np.testing.assert_allclose(G, np.eye(7), atol=1e-10)


def test_dual_of_dual(rng):
    cols = bases.random_basis(6, rng).columns
    np.testing.assert_allclose(bases.dual_basis(bases.dual_basis(cols)), cols, atol=1e-9)


def test_dual_near_singular():
    with pytest.raises(ConditioningError):
        bases.dual_basis(np.array([[1.0, 1.0], [0.0, 1e-14]]))


# ------------------------------------------------------------------ riesz


def test_riesz_examples(rng):
    assert bases.riesz_bounds(bases.random_orthonormal_basis(5, rng)) == pytest.approx((1, 1), abs=1e-12)
    assert bases.riesz_bounds(bases.standard_basis(4)) == (1.0, 1.0)
    alpha, beta = bases.riesz_bounds(skew())
    assert alpha == pytest.approx(0.76537, abs=1e-5)
    assert beta == pytest.approx(1.84776, abs=1e-5)
    # closed form: reciprocal square roots of 1 +- 1/sqrt 2
    assert alpha == pytest.approx(1 / math.sqrt(1 + 1 / math.sqrt(2)), abs=1e-14)
    assert beta == pytest.approx(1 / math.sqrt(1 - 1 / math.sqrt(2)), abs=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_riesz_sandwich(seed):
    r = np.random.default_rng(seed)
    phi = bases.random_basis(6, r)
    assert phi.alpha <= 1 + 1e-12 <= phi.beta + 2e-12
    a = crandn(r, 100, 6)
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    c = np.linalg.norm(bases.analysis(a, phi), axis=1)
    assert np.all(c >= phi.alpha - 1e-10) and np.all(c <= phi.beta + 1e-10)


def test_orthonormal_flag(rng):
    assert bases.random_orthonormal_basis(8, rng).is_orthonormal
    assert not skew().is_orthonormal


# -------------------------------------------------------------- coherence


def test_coherence_examples(rng):
    assert bases.coherence(bases.standard_basis(4), bases.fourier_basis(spec_of("4"))) == pytest.approx(0.5)
    phi = bases.random_orthonormal_basis(8, rng)
    assert bases.coherence(phi, phi) == pytest.approx(1.0)
    psi = bases.random_orthonormal_basis(8, rng)
    M = bases.coherence(phi, psi)
    assert 1 / math.sqrt(8) - 1e-12 <= M <= 1
    brute = max(abs(np.vdot(psi[k], phi[j])) for j in range(8) for k in range(8))
    assert M == pytest.approx(brute, abs=1e-14)


def test_coherence_dimension_mismatch():
    with pytest.raises(DimensionError):
        bases.coherence(bases.standard_basis(3), bases.standard_basis(4))


# ---------------------------------------------------------------- fourier


def test_fourier_z2():
    F = bases.fourier_basis(spec_of("2")).columns
    np.testing.assert_allclose(F[:, 0], [1 / math.sqrt(2)] * 2, atol=1e-15)
    np.testing.assert_allclose(F[:, 1], [1 / math.sqrt(2), -1 / math.sqrt(2)], atol=1e-15)


def test_fourier_z2xz2_is_hadamard():
    F = bases.fourier_basis(spec_of("2x2")).columns
    H = np.array([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]) / 2
    np.testing.assert_allclose(F, H, atol=1e-15)


@pytest.mark.parametrize("text", ["4", "6", "2x3", "3x3"])
def test_fourier_unbiased(text):
    spec = spec_of(text)
    F = bases.fourier_basis(spec)
    assert F.is_orthonormal
    assert bases.coherence(F, bases.standard_basis(spec.cardinality)) == pytest.approx(
        1 / math.sqrt(spec.cardinality), abs=1e-14
    )


# ------------------------------------------------------- analysis/synthesis


def test_analysis_of_basis_vector(rng):
    phi = bases.random_basis(5, rng)
    np.testing.assert_allclose(bases.analysis(phi[3], phi), np.eye(5)[3], atol=1e-12)
    np.testing.assert_array_equal(bases.analysis(np.zeros(5), phi), np.zeros(5))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_round_trip_property(d, seed):
    r = np.random.default_rng(seed)
    phi = bases.random_basis(d, r)
    a = crandn(r, d)
    np.testing.assert_allclose(bases.synthesis(bases.analysis(a, phi), phi), a, atol=1e-10)
    # linear-solve oracle
    np.testing.assert_allclose(bases.analysis(a, phi), np.linalg.solve(phi.columns, a), atol=1e-10)


def test_orthonormal_analysis_is_inner_product(rng):
    phi = bases.random_orthonormal_basis(6, rng)
    a = crandn(rng, 6)
    np.testing.assert_allclose(bases.analysis(a, phi), [np.vdot(phi[j], a) for j in range(6)], atol=1e-12)


def test_random_orthonormal_sign_convention():
    # R's diagonal positive real: recomputing the QR of Q reproduces identity-phase R
    Q = bases.random_orthonormal_basis(5, np.random.default_rng(3)).columns
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(5), atol=1e-12)
    again = bases.random_orthonormal_basis(5, np.random.default_rng(3)).columns
    np.testing.assert_array_equal(Q, again)


def test_analysis_dimension_mismatch():
    with pytest.raises(DimensionError):
        bases.analysis(np.zeros(3), bases.standard_basis(4))
    with pytest.raises(DimensionError):
        bases.synthesis(np.zeros(3), bases.standard_basis(4))
