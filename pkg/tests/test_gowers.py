import math

import numpy as np
import pytest

from torusres import gowers as gw
from torusres.errors import DomainError


def unit_modulus(rng, n):
    return gw.BoxFunction(1, n, np.exp(1j * rng.uniform(0, 2 * np.pi, 2 * n + 1)))


def test_alt_constant_and_linear_phase():
    f = gw.BoxFunction.indicator(1, 5)
    assert np.allclose(gw.alt(f, 0).values, 1.0)
    alpha = 0.9
    g = gw.BoxFunction.from_callable(1, 5, lambda x: np.exp(1j * alpha * x))
    a = gw.alt(g, 2).values
    assert np.allclose(a[:-2], np.exp(-1j * 2 * alpha))
    assert np.all(a[-2:] == 0)


def test_alt_commutes():
    rng = np.random.default_rng(0)
    f = unit_modulus(rng, 6)
    a = gw.alt(gw.alt(f, 2), -3).values
    b = gw.alt(gw.alt(f, -3), 2).values
    # the same four factors, multiplied in a different association order
    assert np.allclose(a, b, rtol=0, atol=1e-14)


def test_alt_out_of_range_gives_zero():
    f = gw.BoxFunction.indicator(1, 3)
    assert not gw.alt(f, 100).values.any()


def test_explicit_equals_recursive_1d():
    rng = np.random.default_rng(1)
    for _ in range(25):
        n = int(rng.integers(2, 17))
        k = int(rng.integers(1, 5))
        f = unit_modulus(rng, n)
        a = gw.gowers_numerator_explicit(f, k)
        b = gw.gowers_numerator_recursive(f, k)
        assert b == pytest.approx(a, rel=1e-10)


def test_explicit_equals_recursive_2d():
    rng = np.random.default_rng(2)
    for _ in range(4):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, 4))
        side = 2 * n + 1
        f = gw.BoxFunction(2, n, np.exp(1j * rng.uniform(0, 2 * np.pi, (side, side))))
        a = gw.gowers_numerator_explicit(f, k)
        b = gw.gowers_numerator_recursive(f, k)
        assert b == pytest.approx(a, rel=1e-10)


def test_s2_fourier_route():
    rng = np.random.default_rng(3)
    for dim in (1, 2):
        n = 4
        shape = (2 * n + 1,) if dim == 1 else (2 * n + 1, 2 * n + 1)
        f = gw.BoxFunction(dim, n, rng.normal(size=shape) + 1j * rng.normal(size=shape))
        a = gw.gowers_numerator_explicit(f, 2)
        c = gw.numerator_fourier_s2(f)
        assert c == pytest.approx(a, rel=1e-9)


def test_indicator_closed_form():
    for n in (2, 3, 5):
        for k in (1, 2, 3, 4):
            f = gw.BoxFunction.indicator(1, n)
            assert gw.gowers_numerator_explicit(f, k) == pytest.approx(
                gw.indicator_numerator(1, n, k), rel=1e-10)
    f2 = gw.BoxFunction.indicator(2, 3)
    assert gw.gowers_numerator_explicit(f2, 2) == pytest.approx(
        gw.indicator_numerator(2, 3, 2), rel=1e-10)


def test_indicator_norm_is_one():
    for (d, n, k) in [(1, 6, 2), (1, 4, 3), (2, 3, 2)]:
        f = gw.BoxFunction.indicator(d, n)
        assert gw.gowers_norm_explicit(f, k) == pytest.approx(1.0, abs=1e-12)


def test_polynomial_phase_norm_one():
    rng = np.random.default_rng(4)
    for (n, k) in [(6, 1), (6, 2), (5, 3), (4, 4)]:
        coefs = rng.normal(size=k + 1)
        f = gw.BoxFunction.from_callable(
            1, n, lambda x: np.exp(1j * sum(c * x ** j for j, c in enumerate(coefs))))
        assert abs(gw.gowers_norm_explicit(f, k + 1) - 1.0) < 1e-9


def test_zero_function():
    f = gw.BoxFunction(1, 4, np.zeros(9))
    assert gw.gowers_norm_recursive(f, 3) == 0.0


def test_u1_group_is_mean():
    rng = np.random.default_rng(5)
    f = gw.BoxFunction(1, 4, rng.normal(size=9) + 1j * rng.normal(size=9))
    side = gw.embedding_side(4, 1)
    v = gw.gowers_norm_explicit(f, 1, normalized=False, group_side=side)
    assert v == pytest.approx(abs(f.values.sum()) / side, rel=1e-12)


def test_group_profile_monotone():
    rng = np.random.default_rng(6)
    for _ in range(10):
        n = int(rng.integers(2, 9))
        f = unit_modulus(rng, n)
        prof = gw.gowers_group_profile(f, 4)
        assert all(prof[i] <= prof[i + 1] * (1 + 1e-12) for i in range(3))


def test_modulation_invariance():
    rng = np.random.default_rng(7)
    f = gw.BoxFunction(1, 6, rng.normal(size=13) + 1j * rng.normal(size=13))
    fm = gw.BoxFunction(1, 6, f.values * np.exp(1j * 1.3 * np.arange(-6, 7)))
    for k in (2, 3):
        assert gw.gowers_norm_explicit(fm, k) == pytest.approx(
            gw.gowers_norm_explicit(f, k), rel=1e-10)


def test_norm_axioms():
    rng = np.random.default_rng(8)
    n = 5
    side = 2 * n + 1
    for k in (2, 3):
        f = gw.BoxFunction(1, n, rng.normal(size=side) + 1j * rng.normal(size=side))
        g = gw.BoxFunction(1, n, rng.normal(size=side) + 1j * rng.normal(size=side))
        nf = gw.gowers_norm_explicit(f, k)
        ng = gw.gowers_norm_explicit(g, k)
        nsum = gw.gowers_norm_explicit(gw.BoxFunction(1, n, f.values + g.values), k)
        assert nsum <= (nf + ng) * (1 + 1e-9)
        assert gw.gowers_norm_explicit(gw.BoxFunction(1, n, 2.5 * f.values), k) == \
            pytest.approx(2.5 * nf, rel=1e-10)


def test_order_cap():
    f = gw.BoxFunction.indicator(1, 2)
    with pytest.raises(DomainError):
        gw.gowers_numerator_explicit(f, 7)


def test_sparse_matches_dense_numerator():
    rng = np.random.default_rng(9)
    n = 6
    vals = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
    f = gw.BoxFunction(1, n, vals)
    pos = np.arange(-n, n + 1)
    for k in (1, 2, 3):
        assert gw.sparse_numerator(pos, vals, k) == pytest.approx(
            gw.gowers_numerator_explicit(f, k), rel=1e-10)


def test_line_embedding_equality():
    rng = np.random.default_rng(10)
    for (d, n) in [(1, 5), (2, 4)]:
        side = 2 * n + 1
        g = gw.BoxFunction(2, n, rng.normal(size=(side, side)) + 1j * rng.normal(size=(side, side)))
        assert gw.line_embedding_check(g, d)


def test_line_embedding_indicator():
    g = gw.BoxFunction.indicator(2, 3)
    assert gw.line_embedding_check(g, 2)


def test_line_embedding_positions_injective():
    pos = gw.line_embedding_positions(8)
    assert len(set(pos.tolist())) == pos.size


# rectangle-correlation norms ------------------------------------------------

def test_rect_norm_bruteforce():
    rng = np.random.default_rng(11)
    f = gw.BoxFunction(2, 4, rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9)))
    assert gw.rect_norm(f) ** 4 == pytest.approx(gw.rect_norm_fourth_bruteforce(f), rel=1e-9)


def test_rect_norm_indicator():
    ind = gw.BoxFunction.indicator(2, 4)
    assert gw.rect_norm(ind) == pytest.approx(9.0, rel=1e-12)


def test_rect_tensor_identity():
    rng = np.random.default_rng(12)
    g = rng.normal(size=11) + 1j * rng.normal(size=11)
    h = rng.normal(size=11) + 1j * rng.normal(size=11)
    t = gw.tensor_box(g, h, 5)
    assert gw.rect_norm(t) == pytest.approx(np.linalg.norm(g) * np.linalg.norm(h), rel=1e-9)


def test_cs_chain_equality_and_random():
    rng = np.random.default_rng(13)
    f = gw.BoxFunction(2, 4, rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9)))
    assert abs(gw.rect_form(f, f, f, f)) == pytest.approx(gw.rect_norm(f) ** 4, rel=1e-10)
    for _ in range(40):
        quad = [gw.BoxFunction(2, 3, rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7)))
                for _ in range(4)]
        assert gw.cs_chain_check(*quad)


def test_cs_chain_rank_one_factors():
    # f12 = g x delta_0, f21 = delta_0 x h, f22 = delta_0 gives
    # |<f, g x h>| <= rect_norm(f) ||g||_2 ||h||_2
    rng = np.random.default_rng(14)
    n = 4
    side = 2 * n + 1
    f = gw.BoxFunction(2, n, rng.normal(size=(side, side)) + 1j * rng.normal(size=(side, side)))
    g = rng.normal(size=side) + 1j * rng.normal(size=side)
    h = rng.normal(size=side) + 1j * rng.normal(size=side)
    delta = np.zeros(side); delta[n] = 1.0
    f12 = gw.tensor_box(g, delta, n)
    f21 = gw.tensor_box(delta, h, n)
    f22 = gw.tensor_box(delta, delta, n)
    assert gw.rect_norm(f12) == pytest.approx(np.linalg.norm(g), rel=1e-10)
    assert gw.rect_norm(f22) == pytest.approx(1.0, rel=1e-12)
    lhs = abs(gw.rect_form(f, f12, f21, f22))
    inner = abs(np.vdot(np.outer(g, h), f.values))
    assert lhs == pytest.approx(inner, rel=1e-9)
    assert inner <= gw.rect_norm(f) * np.linalg.norm(g) * np.linalg.norm(h) * (1 + 1e-9)


def test_best_tensor_correlate():
    rng = np.random.default_rng(15)
    for _ in range(10):
        v = rng.uniform(0, 1, size=(9, 9)) * np.exp(1j * rng.uniform(0, 2 * np.pi, (9, 9)))
        v[rng.uniform(size=(9, 9)) < 0.3] = 0
        f = gw.BoxFunction(2, 4, v)
        g, h, corr = gw.best_tensor_correlate(f)
        assert f.support_size() * corr >= gw.rect_norm(f) ** 4 * (1 - 1e-9)
    zf = gw.BoxFunction(2, 3, np.zeros((7, 7)))
    assert gw.best_tensor_correlate(zf)[2] == 0.0
    with pytest.raises(DomainError):
        gw.best_tensor_correlate(gw.BoxFunction(2, 2, np.full((5, 5), 3.0)))


def test_rotated_norm_unit_direction():
    rng = np.random.default_rng(16)
    f = gw.BoxFunction(2, 5, rng.normal(size=(11, 11)) + 1j * rng.normal(size=(11, 11)))
    assert gw.rect_norm_rotated_fourth(f, (1, 0)) == pytest.approx(
        gw.rect_norm(f) ** 4, rel=1e-10)


def test_rotated_norm_two_forms():
    rng = np.random.default_rng(17)
    f = gw.BoxFunction(2, 5, rng.normal(size=(11, 11)) + 1j * rng.normal(size=(11, 11)))
    for eta in [(1, 1), (2, 1), (1, -2)]:
        a = gw.rect_norm_rotated_fourth(f, eta)
        b = gw.rect_norm_rotated_fourth_altsum(f, eta)
        assert b == pytest.approx(a, rel=1e-10)


def test_rotated_multiplicativity_exact():
    rng = np.random.default_rng(18)
    for _ in range(8):
        vals = (rng.integers(-3, 4, size=(11, 11))
                + 1j * rng.integers(-3, 4, size=(11, 11))).astype(complex)
        f = gw.BoxFunction(2, 5, vals)
        assert gw.rotated_multiplicativity_gap(f, (1, 1), (1, 2)) == 0.0
        assert gw.rotated_multiplicativity_gap(f, (2, 1), (1, 1)) == 0.0


def test_two_tensor_inner_inequality():
    rng = np.random.default_rng(19)
    for _ in range(10):
        g = rng.normal(size=13) + 1j * rng.normal(size=13)
        restricted, full = gw.two_tensor_inner_inequality(g, 2, 3)
        assert restricted <= full * (1 + 1e-12)


# Weyl sums -------------------------------------------------------------------

def test_weyl_examples():
    assert gw.weyl_sum(gw.WeylSumQuery(0, 0, 50)) == pytest.approx(1.0)
    n = 17
    assert gw.weyl_sum(gw.WeylSumQuery(0, math.pi, n)) == pytest.approx(1 / (2 * n + 1))


def test_weyl_major_vs_minor_arc():
    major = gw.weyl_sum(gw.WeylSumQuery(2 * math.pi / 5, 0, 1000))
    minor = gw.weyl_sum(gw.WeylSumQuery(math.sqrt(2), 0, 1000))
    assert major >= 0.4
    assert minor <= 0.1
    m, dist = gw.weyl_major_arc(2 * math.pi / 5)
    assert m == 5 and dist < 1e-12
