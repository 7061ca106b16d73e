import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from annihilator import groups
from annihilator.errors import DimensionError, GroupSpecError
from conftest import SMALL_GROUPS, crandn, spec_of


# ----------------------------------------------------------------- parsing


@pytest.mark.parametrize("text,orders", [("4", (4,)), ("2x3x5", (2, 3, 5)), ("1", (1,))])
def test_parse(text, orders):
    spec = spec_of(text)
    assert spec.orders == orders
    assert spec.cardinality == math.prod(orders)
    assert str(spec) == text


@pytest.mark.parametrize("text", ["4y3", "", "0", "2X3", "2x", "x2", "-3", "2x0"])
def test_parse_rejects(text):
    with pytest.raises(GroupSpecError):
        spec_of(text)


def test_row_major_ordering():
    spec = spec_of("2x3")
    assert spec.elements() == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert spec.index((1, 2)) == 5
    assert spec.index((3, -1)) == spec.index((1, 2))


def test_element_arithmetic():
    spec = spec_of("4x6")
    assert spec.add((3, 5), (2, 4)) == (1, 3)
    assert spec.neg((1, 0)) == (3, 0)
    assert spec.sub((0, 0), (1, 1)) == (3, 5)


# -------------------------------------------------------------- characters


def test_character_examples():
    assert groups.character(spec_of("4"), 1, 1) == pytest.approx(1j, abs=1e-15)
    spec = spec_of("2x3")
    for x in spec.elements():
        assert groups.character(spec, (0, 0), x) == 1
    assert groups.character(spec, (1, 1), (1, 2)) == pytest.approx(0.5 + 0.8660254037844386j, abs=1e-12)


def test_character_coordinate_mismatch():
    with pytest.raises(DimensionError):
        groups.character(spec_of("2x3"), (1,), (1, 1))


@pytest.mark.parametrize("text", SMALL_GROUPS)
def test_character_properties(text):
    spec = spec_of(text)
    els = spec.elements()
    for xi in els:
        for x in els:
            c = groups.character(spec, xi, x)
            assert abs(abs(c) - 1) < 1e-15
            assert abs(groups.character(spec, spec.neg(xi), x) - np.conj(c)) < 1e-14
    # bilinearity on a sample of triples
    for xi, eta, x in zip(els, reversed(els), els[1:] + els[:1]):
        lhs = groups.character(spec, spec.add(xi, eta), x)
        assert abs(lhs - groups.character(spec, xi, x) * groups.character(spec, eta, x)) < 1e-14


# --------------------------------------------------------------------- dft


@pytest.mark.parametrize("d", [1, 2, 5, 8])
def test_dft_of_delta_is_constant(d):
    spec = spec_of(str(d))
    f = np.zeros(d)
    f[0] = 1
    np.testing.assert_allclose(groups.dft(spec, f), np.full(d, 1 / math.sqrt(d)), atol=1e-15)
    np.testing.assert_allclose(groups.idft(spec, np.full(d, 1 / math.sqrt(d))), f, atol=1e-15)


def test_dft_comb_is_self_dual():
    spec = spec_of("4")
    np.testing.assert_allclose(groups.dft(spec, [1, 0, 1, 0]), [1, 0, 1, 0], atol=1e-15)


@pytest.mark.parametrize("text", SMALL_GROUPS + ["2x2x2", "4x4", "16", "3x5"])
def test_dft_matches_naive_and_fast(text, rng):
    spec = spec_of(text)
    f = crandn(rng, spec.cardinality)
    naive = groups.dft_naive(spec, f)
    np.testing.assert_allclose(groups.dft(spec, f), naive, atol=1e-12)
    np.testing.assert_allclose(groups.dft(spec, f, fast=True), naive, atol=1e-12)
    np.testing.assert_allclose(groups.idft(spec, naive, fast=True), f, atol=1e-12)
    assert abs(np.linalg.norm(naive) - np.linalg.norm(f)) < 1e-12 * np.linalg.norm(f)


def test_fast_path_large_group(rng):
    spec = spec_of("4x8x8")
    f = crandn(rng, spec.cardinality)
    np.testing.assert_allclose(groups.dft(spec, f, fast=True), groups.dft(spec, f), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
def test_round_trip_property(orders, seed):
    spec = groups.GroupSpec(tuple(orders))
    r = np.random.default_rng(seed)
    f = crandn(r, spec.cardinality)
    scale = max(1.0, np.linalg.norm(f))
    assert np.linalg.norm(groups.idft(spec, groups.dft(spec, f)) - f) < 1e-12 * scale
    assert np.linalg.norm(groups.dft(spec, groups.idft(spec, f)) - f) < 1e-12 * scale
    assert abs(np.linalg.norm(groups.dft(spec, f)) - np.linalg.norm(f)) < 1e-12 * scale


def test_dft_length_mismatch():
    with pytest.raises(DimensionError):
        groups.dft(spec_of("4"), np.ones(5))


# ------------------------------------------------------------ product dft


def test_dft_product_examples(rng):
    spec = spec_of("2")
    np.testing.assert_array_equal(groups.dft_product(spec, np.zeros((2, 2))), 0)
    F = np.zeros((2, 2))
    F[0, 0] = 1
    np.testing.assert_allclose(groups.dft_product(spec, F), np.full((2, 2), 0.5), atol=1e-15)
    spec3 = spec_of("3")
    F = crandn(rng, 3, 3)
    assert abs(np.linalg.norm(groups.dft_product(spec3, F)) - np.linalg.norm(F)) < 1e-12


@pytest.mark.parametrize("text", ["3", "2x2", "4"])
def test_dft_product_matches_direct_sum(text, rng):
    spec = spec_of(text)
    els = spec.elements()
    n = len(els)
    F = crandn(rng, n, n)
    out = np.zeros((n, n), dtype=complex)
    for i, eta in enumerate(els):
        for j, u in enumerate(els):
            out[i, j] = sum(
                F[a, b] * np.conj(groups.character(spec, eta, x) * groups.character(spec, xi, u))
                for a, x in enumerate(els)
                for b, xi in enumerate(els)
            ) / n
    np.testing.assert_allclose(groups.dft_product(spec, F), out, atol=1e-12)


def test_dft_product_shape_error():
    with pytest.raises(DimensionError):
        groups.dft_product(spec_of("3"), np.zeros((3, 2)))


# -------------------------------------------------------------------- json


def test_signal_json_round_trip(rng):
    f = crandn(rng, 6)
    g = groups.parse_signal_json(groups.signal_to_json(f), spec_of("2x3"))
    np.testing.assert_array_equal(f, g)
    with pytest.raises(DimensionError):
        groups.parse_signal_json(groups.signal_to_json(f), spec_of("5"))
