"""Gowers uniformity norms, rectangle-correlation norms, and Weyl sums.

Functions live on boxes [N]^d = {-N..N}^d (d = 1 or 2) and are extended by
zero outside the box.  The multiplicative difference operator is

    alt(f, eta)(x) = f(x) * conj f(x + eta),

commuting in eta.  The Gowers U^k quantity is driven by the configuration sum
("numerator")

    S_k(f) = sum over x, eta_1..eta_k of alt(f, eta_1, .., eta_k)(x),

a real nonnegative number.  Embedding the box into a cyclic group of side
N' >= 2^(k+1) N changes nothing (no configuration wraps around), so S_k is
evaluated directly over Z^d with finite ranges.  Two norm flavours:

* group norm: (S_k / N'^(d(k+1)))^(1/2^k) for an explicit embedding side N';
  monotone in k at fixed N'.
* box norm: (S_k(f) / S_k(indicator))^(1/2^k), independent of N'.  The
  normalizer is the indicator of [N]^d, the d-dimensional box f lives on.

S_k is computed by two routes that must agree to 1e-10: an iterative
prefix-enumeration closing with a strided-window contraction
(`gowers_numerator_explicit`) and a literal per-shift recursion down to the
squared mean (`gowers_numerator_recursive`).  Closed-form anchors (indicator
numerator, polynomial phases, the Fourier form of S_2) pin both down in the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .lattice import Point, coset_representatives, gaussian_product

MAX_ORDER = 6  # U^k supported for k <= 6


@dataclass
class BoxFunction:
    """Complex values on [N]^d with zero extension outside."""

    dimension: int
    halfwidth: int
    values: np.ndarray

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise DomainError("dimension must be 1 or 2")
        side = 2 * self.halfwidth + 1
        expect = (side,) if self.dimension == 1 else (side, side)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != expect:
            raise DomainError(f"values shape {self.values.shape} != {expect}")
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise DomainError("values must be finite")

    @staticmethod
    def from_callable(dimension: int, halfwidth: int, func: Callable) -> "BoxFunction":
        n = halfwidth
        if dimension == 1:
            vals = np.array([func(x) for x in range(-n, n + 1)])
        else:
            vals = np.array([[func(x, y) for y in range(-n, n + 1)]
                             for x in range(-n, n + 1)])
        return BoxFunction(dimension, n, vals)

    @staticmethod
    def indicator(dimension: int, halfwidth: int) -> "BoxFunction":
        side = 2 * halfwidth + 1
        shape = (side,) if dimension == 1 else (side, side)
        return BoxFunction(dimension, halfwidth, np.ones(shape))

    def l2_norm(self) -> float:
        return float(np.sqrt((np.abs(self.values) ** 2).sum()))

    def support_size(self) -> int:
        return int(np.count_nonzero(self.values))


def alt(f: BoxFunction, eta) -> BoxFunction:
    """Pointwise f(x) * conj f(x + eta) with zero extension."""
    eta = tuple(int(e) for e in (eta if hasattr(eta, "__len__") else (eta,)))
    if len(eta) != f.dimension:
        raise DomainError("shift dimension mismatch")
    return BoxFunction(f.dimension, f.halfwidth, f.values * np.conj(_shift(f.values, eta)))


def _shift(vals: np.ndarray, eta: tuple[int, ...]) -> np.ndarray:
    """Array of f(x + eta) on the same index window, zero-filled."""
    out = np.zeros_like(vals)
    src, dst = [], []
    for ax, e in enumerate(eta):
        n = vals.shape[ax]
        if e >= n or e <= -n:
            return out
        if e >= 0:
            src.append(slice(e, n))
            dst.append(slice(0, n - e))
        else:
            src.append(slice(0, n + e))
            dst.append(slice(-e, n))
    out[tuple(dst)] = vals[tuple(src)]
    return out


# ---------------------------------------------------------------------------
# configuration-sum numerators
# ---------------------------------------------------------------------------

def _window_view_1d(vals: np.ndarray) -> np.ndarray:
    """W[a, x] = vals[x + a - (m-1)] as a strided view; a in [0, 2m-2]."""
    m = vals.shape[0]
    buf = np.zeros(3 * m - 2, dtype=np.complex128)
    buf[m - 1:2 * m - 1] = vals
    s = buf.strides[0]
    return np.lib.stride_tricks.as_strided(buf, shape=(2 * m - 1, m), strides=(s, s))


def _window_view_2d(vals: np.ndarray) -> np.ndarray:
    """W[a, b, x, y] = vals[x + a - (mx-1), y + b - (my-1)], strided."""
    mx, my = vals.shape
    buf = np.zeros((3 * mx - 2, 3 * my - 2), dtype=np.complex128)
    buf[mx - 1:2 * mx - 1, my - 1:2 * my - 1] = vals
    st = buf.strides
    return np.lib.stride_tricks.as_strided(
        buf, shape=(2 * mx - 1, 2 * my - 1, mx, my), strides=(st[0], st[1], st[0], st[1]))


def _close_pair_sum(vals: np.ndarray, dim: int) -> float:
    """sum over (eta, x) pairs of |sum_x alt(f, eta-prefix)| collapse step:
    returns sum_eta |sum_x vals(x) conj vals(x+eta)|^2."""
    if dim == 1:
        w = _window_view_1d(vals)
        corr = w @ np.conj(vals)
    else:
        w = _window_view_2d(vals)
        corr = np.einsum("xy,abxy->ab", np.conj(vals), w)
    return float((corr.real ** 2 + corr.imag ** 2).sum())


def _num_explicit(vals: np.ndarray, k: int, dim: int) -> float:
    # S_k = sum over the (k-1)-prefix of shifts of |sum_x alt(prefix)(x)|^2;
    # the prefix is enumerated iteratively with zero-support skipping, and the
    # last shift + x are contracted in one strided-window pass.
    if k == 1:
        tot = vals.sum()
        return float(tot.real ** 2 + tot.imag ** 2)
    total = 0.0
    stack = [(vals, k)]
    ranges = _shift_range(vals, dim)
    while stack:
        g, kk = stack.pop()
        if kk == 2:
            total += _close_pair_sum(g, dim)
            continue
        for e in ranges:
            h = g * np.conj(_shift(g, e))
            if h.any():
                stack.append((h, kk - 1))
    return total


def _shift_range(vals: np.ndarray, dim: int) -> list[tuple[int, ...]]:
    m = vals.shape[0]
    span = range(-(m - 1), m)
    if dim == 1:
        return [(e,) for e in span]
    return [(ex, ey) for ex in span for ey in span]


def _num_recursive(vals: np.ndarray, k: int, dim: int) -> float:
    # literal recursion S_k(f) = sum_eta S_{k-1}(alt(f, eta)) down to
    # S_1 = |sum f|^2; the 1D two-shift base goes through np.correlate.
    if k == 1:
        tot = vals.sum()
        return float(tot.real ** 2 + tot.imag ** 2)
    if k == 2:
        if dim == 1:
            corr = np.correlate(vals, vals, mode="full")
            return float((corr.real ** 2 + corr.imag ** 2).sum())
        return _close_pair_sum(vals, dim)
    total = 0.0
    for e in _shift_range(vals, dim):
        g = vals * np.conj(_shift(vals, e))
        if g.any():
            total += _num_recursive(g, k - 1, dim)
    return total


def gowers_numerator_explicit(f: BoxFunction, k: int) -> float:
    """Configuration sum S_k(f), prefix-iterative route."""
    _check_order(k)
    return _num_explicit(f.values, k, f.dimension)


def gowers_numerator_recursive(f: BoxFunction, k: int) -> float:
    """S_k(f) through the shift recursion."""
    _check_order(k)
    return _num_recursive(f.values, k, f.dimension)


def _check_order(k: int) -> None:
    if not (1 <= k <= MAX_ORDER):
        raise DomainError(f"supported Gowers orders are 1..{MAX_ORDER}")


def numerator_fourier_s2(f: BoxFunction) -> float:
    """Independent Fourier-side evaluation of S_2 on a cyclic embedding:
    S_2 = (1/M) sum_j |DFT_M(f)|^4 for any M >= 4N+1 (test anchor)."""
    side = f.values.shape[0]
    m = 4 * side
    if f.dimension == 1:
        buf = np.zeros(m, dtype=np.complex128)
        buf[:side] = f.values
        ft = np.fft.fft(buf)
        return float((np.abs(ft) ** 4).sum() / m)
    buf = np.zeros((m, m), dtype=np.complex128)
    buf[:side, :side] = f.values
    ft = np.fft.fft2(buf)
    return float((np.abs(ft) ** 4).sum() / m ** 2)


def indicator_numerator(dimension: int, halfwidth: int, k: int) -> float:
    """S_k of the box indicator in closed form.

    In one dimension S_k = sum over eta in Z^k of max(0, 2N+1 - sum |eta_j|)
    (the overlap length of the shifted copies); boxes factorize, so the
    d-dimensional value is the d-th power.
    """
    _check_order(k)
    n = halfwidth
    side = 2 * n + 1
    if k == 1:
        return (float(side) ** 2) ** dimension
    w = np.zeros(2 * n + 1)
    w[0] = 1.0
    w[1:] = 2.0
    dist = np.array([1.0])
    for _ in range(k):
        dist = np.convolve(dist, w)
    totals = np.arange(dist.shape[0])
    one_d = float((dist * np.maximum(0, side - totals)).sum())
    return one_d ** dimension


def embedding_side(halfwidth: int, k: int) -> int:
    """Cyclic-group side 2^(k+1) N sufficient for wrap-free U^k."""
    return (1 << (k + 1)) * halfwidth


def gowers_norm_explicit(f: BoxFunction, k: int, normalized: bool = True,
                         group_side: Optional[int] = None) -> float:
    """U^k norm of f; box-normalized by default, else on the cyclic embedding
    of side ``group_side`` (default 2^(k+1) N)."""
    return _normalize(f, k, gowers_numerator_explicit(f, k), normalized, group_side)


def gowers_norm_recursive(f: BoxFunction, k: int, normalized: bool = True,
                          group_side: Optional[int] = None) -> float:
    return _normalize(f, k, gowers_numerator_recursive(f, k), normalized, group_side)


def _normalize(f: BoxFunction, k: int, num: float, normalized: bool,
               group_side: Optional[int]) -> float:
    if normalized:
        ref = indicator_numerator(f.dimension, f.halfwidth, k)
        return (max(num, 0.0) / ref) ** (1.0 / (1 << k))
    side = group_side if group_side is not None else embedding_side(f.halfwidth, k)
    if side < embedding_side(f.halfwidth, k):
        raise DomainError("embedding side too small; configurations would wrap")
    denom = float(side) ** (f.dimension * (k + 1))
    return (max(num, 0.0) / denom) ** (1.0 / (1 << k))


def gowers_group_profile(f: BoxFunction, kmax: int,
                         group_side: Optional[int] = None) -> list[float]:
    """[U^1 .. U^kmax] on one shared cyclic embedding; monotone in k."""
    _check_order(kmax)
    side = group_side if group_side is not None else embedding_side(f.halfwidth, kmax)
    return [gowers_norm_recursive(f, k, normalized=False, group_side=side)
            for k in range(1, kmax + 1)]


# ---------------------------------------------------------------------------
# sparse 1D numerators (functions on scattered integer positions)
# ---------------------------------------------------------------------------

def sparse_numerator(positions: np.ndarray, values: np.ndarray, k: int) -> float:
    """S_k for a sparse 1D function given by (positions, values).

    Shifts are enumerated from the difference set of the support at every
    recursion level; no structure of the support is assumed.
    """
    _check_order(k)
    pos = np.asarray(positions, dtype=np.int64)
    val = np.asarray(values, dtype=np.complex128)
    keep = val != 0
    return _sparse_num(pos[keep], val[keep], k)


def _sparse_num(pos: np.ndarray, val: np.ndarray, k: int) -> float:
    if pos.size == 0:
        return 0.0
    if k == 1:
        tot = val.sum()
        return float(tot.real ** 2 + tot.imag ** 2)
    total = 0.0
    index = {int(p): i for i, p in enumerate(pos)}
    diffs = np.unique(pos[None, :] - pos[:, None])
    for e in diffs.tolist():
        pairs = [(i, index[int(p) + e]) for i, p in enumerate(pos) if int(p) + e in index]
        if not pairs:
            continue
        ii = np.array([a for a, _ in pairs])
        jj = np.array([b for _, b in pairs])
        total += _sparse_num(pos[ii], val[ii] * np.conj(val[jj]), k - 1)
    return total


# ---------------------------------------------------------------------------
# line embedding of [N]^2 (Freiman-isomorphic packing into an interval)
# ---------------------------------------------------------------------------

LINE_EMBED_MULTIPLIER = 1 << 9  # spacing 2^9 N: no configuration overlap up to U^7


def line_embedding_positions(halfwidth: int) -> np.ndarray:
    """Packed positions n1 + (2^9 N) n2 for (n1, n2) in [N]^2."""
    n = halfwidth
    big = LINE_EMBED_MULTIPLIER * n
    n1 = np.arange(-n, n + 1)
    return (n1[:, None] + big * n1[None, :]).reshape(-1)


def line_embedding(g: BoxFunction) -> tuple[np.ndarray, np.ndarray]:
    """Sparse 1D image of a 2D box function under n1 + 2^9 N n2."""
    if g.dimension != 2:
        raise DomainError("line embedding takes a 2D box function")
    return line_embedding_positions(g.halfwidth), g.values.reshape(-1).copy()


def line_embedding_check(g: BoxFunction, d: int, rel_tol: float = 1e-12) -> bool:
    """Unnormalized U^(d+1) configuration sums agree between [N]^2 and its
    packed 1D image (the packing is injective on configurations for d <= 6)."""
    if d > MAX_ORDER - 1:
        raise DomainError(f"d must be <= {MAX_ORDER - 1}")
    k = d + 1
    num2d = gowers_numerator_explicit(g, k)
    pos, val = line_embedding(g)
    num1d = sparse_numerator(pos, val, k)
    scale = max(abs(num2d), abs(num1d), 1e-300)
    return abs(num2d - num1d) <= rel_tol * scale


# ---------------------------------------------------------------------------
# rectangle-correlation norms
# ---------------------------------------------------------------------------

def rect_form(f11: BoxFunction, f12: BoxFunction, f21: BoxFunction,
              f22: BoxFunction) -> complex:
    """sum over x1,x2,y1,y2 of
    f11(x1,y1) conj f12(x1,y2) conj f21(x2,y1) f22(x2,y2), via row
    correlations in O(n^3)."""
    shapes = {f.values.shape for f in (f11, f12, f21, f22)}
    if len(shapes) != 1 or f11.dimension != 2:
        raise DomainError("rect_form needs four 2D box functions of equal shape")
    a = f11.values @ np.conj(f21.values).T   # a[x1,x2] = sum_y f11(x1,y) conj f21(x2,y)
    b = np.conj(f12.values) @ f22.values.T   # b[x1,x2] = sum_y conj f12(x1,y) f22(x2,y)
    return complex((a * b).sum())


def rect_norm(f: BoxFunction) -> float:
    """Fourth root of rect_form(f,f,f,f); a norm on 2D box functions."""
    if f.dimension != 2:
        raise DomainError("rect_norm is defined for 2D box functions")
    return rect_norm_fourth(f) ** 0.25


def rect_norm_fourth(f: BoxFunction) -> float:
    g = f.values @ np.conj(f.values).T
    return float((g.real ** 2 + g.imag ** 2).sum())


def rect_norm_fourth_bruteforce(f: BoxFunction) -> float:
    """Direct 4-index evaluation of rect_form(f,f,f,f) (test oracle)."""
    v = f.values
    total = np.einsum("ac,bd,ad,bc->", v, v, np.conj(v), np.conj(v))
    return float(total.real)


def cs_chain_check(f11: BoxFunction, f12: BoxFunction, f21: BoxFunction,
                   f22: BoxFunction, slack: float = 1e-9) -> bool:
    """|rect_form| <= product of the four rect norms, with relative slack."""
    lhs = abs(rect_form(f11, f12, f21, f22))
    rhs = rect_norm(f11) * rect_norm(f12) * rect_norm(f21) * rect_norm(f22)
    return lhs <= rhs * (1.0 + slack) + 1e-300


def tensor_box(g: np.ndarray, h: np.ndarray, halfwidth: int) -> BoxFunction:
    """Rank-one 2D function g(x) h(y) from two 1D value arrays."""
    side = 2 * halfwidth + 1
    g = np.asarray(g, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    if g.shape != (side,) or h.shape != (side,):
        raise DomainError("tensor factors must live on the same box")
    return BoxFunction(2, halfwidth, np.outer(g, h))


def best_tensor_correlate(f: BoxFunction) -> tuple[np.ndarray, np.ndarray, float]:
    """Constructive tensor correlate of a 2D function bounded by 1.

    Picks the base point z0 maximizing |sum_{m,n} alt(f, (m,0), (0,n))(z0)|
    and returns the slices g(x) = f(z0 + (x,0)), h(y) = f(z0 + (0,y)) together
    with the correlation |<f, (g x h)(. - z0)>|, which satisfies
    supp(f) * correlation >= rect_norm(f)^4.
    """
    if f.dimension != 2:
        raise DomainError("needs a 2D box function")
    v = f.values
    if np.abs(v).max(initial=0.0) > 1.0 + 1e-12:
        raise DomainError("f must be bounded by 1 in modulus")
    side = v.shape[0]
    if not v.any():
        z = np.zeros(side, dtype=np.complex128)
        return z, z.copy(), 0.0
    best_val, best_z = -1.0, (0, 0)
    for zx in range(side):
        for zy in range(side):
            if v[zx, zy] == 0:
                continue
            # T(z) = f(z) sum_{m,n} conj f(z+m e1) conj f(z+n e2) f(z+m e1+n e2)
            col = np.conj(v[:, zy])
            row = np.conj(v[zx, :])
            t = abs(v[zx, zy] * (col @ v @ row))
            if t > best_val:
                best_val, best_z = t, (zx, zy)
    zx, zy = best_z
    g = v[:, zy].copy()
    h = v[zx, :].copy()
    rank_one = np.outer(g, h) / v[zx, zy]
    correlation = abs(np.vdot(rank_one, v))
    return g, h, float(correlation)


def rect_norm_rotated(f: BoxFunction, eta: Point) -> float:
    """Rotated rectangle norm along the lattice spanned by eta, perp(eta)."""
    return rect_norm_rotated_fourth(f, eta) ** 0.25


def rect_norm_rotated_fourth(f: BoxFunction, eta: Point) -> float:
    """Fourth power: sum over cosets xi of the (eta, perp eta) sublattice of
    rect_norm(f(m eta + n perp(eta) + xi))^4."""
    if eta == (0, 0):
        raise DomainError("zero direction")
    total = 0.0
    for sub in coset_slices(f, eta):
        total += rect_norm_fourth(sub)
    return total


def rect_norm_rotated_fourth_altsum(f: BoxFunction, eta: Point) -> float:
    """Second form: sum over m, n in Z of sum_z alt(f, m eta, n perp eta)(z)."""
    if eta == (0, 0):
        raise DomainError("zero direction")
    n = f.halfwidth
    a, b = eta
    p = (-b, a)
    span = 2 * n // max(abs(a), abs(b)) + 1
    total = 0.0
    for m in range(-span, span + 1):
        sa = (m * a, m * b)
        if abs(sa[0]) > 2 * n or abs(sa[1]) > 2 * n:
            continue
        fa = f.values * np.conj(_shift(f.values, sa))
        if not fa.any():
            continue
        for q in range(-span, span + 1):
            sb = (q * p[0], q * p[1])
            if abs(sb[0]) > 2 * n or abs(sb[1]) > 2 * n:
                continue
            g = fa * np.conj(_shift(fa, sb))
            total += float(g.sum().real)
    return total


def coset_slices(f: BoxFunction, eta: Point) -> list[BoxFunction]:
    """f restricted to each coset of the (eta, perp eta) sublattice,
    reindexed by the (m, n) lattice coordinates; empty slices dropped."""
    return [s for s in gaussian_coset_slices(f, eta) if s.values.any()]


def gaussian_coset_slices(f: BoxFunction, eta: Point) -> list[BoxFunction]:
    """All coset slices of f along eta (kept even when identically zero)."""
    if f.dimension != 2:
        raise DomainError("needs a 2D box function")
    if eta == (0, 0):
        raise DomainError("zero direction")
    n = f.halfwidth
    a, b = eta
    r = int(math.floor(2.5 * n / math.sqrt(a * a + b * b))) + 2
    mm = list(range(-r, r + 1))
    out = []
    for rep in coset_representatives(eta).representatives:
        vals = np.zeros((2 * r + 1, 2 * r + 1), dtype=np.complex128)
        for i, m in enumerate(mm):
            for j, nn in enumerate(mm):
                x = rep[0] + m * a - nn * b
                y = rep[1] + m * b + nn * a
                if -n <= x <= n and -n <= y <= n:
                    vals[i, j] = f.values[x + n, y + n]
        out.append(BoxFunction(2, r, vals))
    return out


def rotated_multiplicativity_gap(f: BoxFunction, eta1: Point, eta2: Point) -> float:
    """|rect_norm_rotated(f, eta1*eta2)^4 - sum over cosets xi of eta1 of
    rect_norm_rotated(f(eta1 . + xi), eta2)^4| with the Gaussian product."""
    eta = gaussian_product(eta1, eta2)
    lhs = rect_norm_rotated_fourth(f, eta)
    rhs = sum(rect_norm_rotated_fourth(sub, eta2) for sub in gaussian_coset_slices(f, eta1))
    return abs(lhs - rhs)


def two_tensor_inner_inequality(g: np.ndarray, a: int, b: int) -> tuple[float, float]:
    """(restricted, full) pair for the inner sums
    sum_{m,n} |sum_x alt(g, m a, n b)(x)|^2 vs the same with a = b = 1;
    the restricted sum ranges over a sublattice of the full one, so
    restricted <= full holds term by term."""
    if a == 0 or b == 0:
        raise DomainError("both strides must be nonzero")
    gv = np.asarray(g, dtype=np.complex128)
    restricted = _strided_pair_sum(gv, abs(a), abs(b))
    full = _strided_pair_sum(gv, 1, 1)
    return restricted, full


def _strided_pair_sum(g: np.ndarray, a: int, b: int) -> float:
    m = g.shape[0]
    total = 0.0
    for ma in range(-(m - 1) // a, (m - 1) // a + 1):
        ga = g * np.conj(_shift(g, (ma * a,)))
        if not ga.any():
            continue
        for nb in range(-(m - 1) // b, (m - 1) // b + 1):
            val = (ga * np.conj(_shift(ga, (nb * b,)))).sum()
            total += float(val.real ** 2 + val.imag ** 2)
    return total


# ---------------------------------------------------------------------------
# Weyl quadratic exponential sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylSumQuery:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("N must be >= 1")


def weyl_sum(query: WeylSumQuery) -> float:
    """|average over n in [-N..N] of exp(i (a n^2 + b n))|."""
    ns = np.arange(-query.n, query.n + 1, dtype=np.float64)
    return float(abs(np.exp(1j * (query.a * ns * ns + query.b * ns)).mean()))


def weyl_major_arc(a: float, m_max: int = 20) -> tuple[int, float]:
    """The denominator m <= m_max minimizing dist(a, (2 pi / m) Z) and that
    distance.  Large Weyl sums come with a small distance at bounded m; the
    best m found is reported, no specific constant is asserted."""
    best = (1, _dist_to_multiples(a, 2 * math.pi))
    for m in range(2, m_max + 1):
        d = _dist_to_multiples(a, 2 * math.pi / m)
        if d < best[1] - 1e-18:
            best = (m, d)
    return best


def _dist_to_multiples(x: float, step: float) -> float:
    r = math.fmod(x, step)
    if r < 0:
        r += step
    return min(r, step - r)
