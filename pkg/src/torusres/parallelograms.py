"""Counting resonance-graded parallelograms in finite subsets of Z^2.

A parallelogram is an ordered quadruple Q = (xi1, xi2, xi3, xi4) with
xi1 + xi3 = xi2 + xi4; degenerate quadruples (repeated vertices, including
(xi,xi,xi,xi)) are counted.  Its resonance level is

    level(Q) = 2 (xi1 - xi2) . (xi1 - xi4)
             = |xi1|^2 - |xi2|^2 + |xi3|^2 - |xi4|^2,

the Schrodinger phase mismatch of the quadruple; level 0 means the four
vertices form a rectangle.  For a weight f on the points the quadruple weight
is f(Q) = f(xi1) * conj f(xi2) * f(xi3) * conj f(xi4).

The histogram of levels is enumerated in O(n^3) over (xi1, xi2, xi4) with a
membership test for xi3 = xi2 + xi4 - xi1; a literal O(n^4) enumeration is
kept as the oracle.  All arithmetic on levels is exact (int64; coordinates
are capped in :mod:`torusres.lattice`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError, ResourceLimitError
from .lattice import Point, as_point

DEFAULT_SIZE_BOUND = 2000

# dense level-offset arrays are used when the level range fits below this
_DENSE_LEVEL_SPAN = 1 << 24

Quad = tuple[Point, Point, Point, Point]


class PointSet:
    """Deduplicated finite subset of Z^2 with O(1) membership."""

    def __init__(self, points: Iterable[Point]):
        seen: dict[Point, int] = {}
        for p in points:
            q = as_point(*p)
            if q not in seen:
                seen[q] = len(seen)
        self._index = seen
        self.points: list[Point] = list(seen)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: Point) -> bool:
        return p in self._index

    def __iter__(self):
        return iter(self.points)

    def arrays(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), 2)

    def translate(self, v: Point) -> "PointSet":
        return PointSet([(p[0] + v[0], p[1] + v[1]) for p in self.points])

    def rotate(self) -> "PointSet":
        return PointSet([(-p[1], p[0]) for p in self.points])

    @staticmethod
    def from_text(path) -> "PointSet":
        """Read one point per line: two space-separated signed integers."""
        pts = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                x, y = line.split()
                pts.append((int(x), int(y)))
        return PointSet(pts)

    def to_text(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for x, y in self.points:
                fh.write(f"{x} {y}\n")


@dataclass
class LevelHistogram:
    """Map resonance level -> count (or complex weighted sum)."""

    entries: dict[int, complex] = field(default_factory=dict)
    weighted: bool = False

    @property
    def total(self) -> complex:
        return sum(self.entries.values(), start=0j)

    def count(self, level: int) -> complex:
        return self.entries.get(level, 0 if not self.weighted else 0j)

    def cumulative(self, max_level: int, include_zero: bool = True) -> complex:
        lo = 0 if include_zero else 1
        return sum(v for t, v in self.entries.items() if lo <= t <= max_level)

    def to_rows(self) -> list[tuple[int, float, float]]:
        return [(t, float(v.real if self.weighted else v), float(v.imag if self.weighted else 0.0))
                for t, v in sorted(self.entries.items())]


def resonance_level(quad: Quad) -> int:
    """Level 2 (xi1-xi2).(xi1-xi4) of a closed quadruple."""
    x1, x2, x3, x4 = quad
    if (x1[0] + x3[0], x1[1] + x3[1]) != (x2[0] + x4[0], x2[1] + x4[1]):
        raise DomainError(f"quadruple is not closed: {quad}")
    return 2 * ((x1[0] - x2[0]) * (x1[0] - x4[0]) + (x1[1] - x2[1]) * (x1[1] - x4[1]))


def quadratic_form_level(quad: Quad) -> int:
    """|xi1|^2 - |xi2|^2 + |xi3|^2 - |xi4|^2; equals resonance_level."""
    x1, x2, x3, x4 = quad
    q = lambda p: p[0] * p[0] + p[1] * p[1]
    return q(x1) - q(x2) + q(x3) - q(x4)


def _check_size(s: PointSet, size_bound: int) -> None:
    if len(s) > size_bound:
        raise ResourceLimitError(f"point set size {len(s)} exceeds bound {size_bound}")


def _weights_array(s: PointSet, weights) -> Optional[np.ndarray]:
    if weights is None:
        return None
    if callable(weights):
        w = np.array([weights(p) for p in s.points], dtype=np.complex128)
    elif isinstance(weights, Mapping):
        w = np.array([weights[p] for p in s.points], dtype=np.complex128)
    else:
        w = np.asarray(weights, dtype=np.complex128)
        if w.shape != (len(s),):
            raise DomainError("weight array must match the point list")
    return w


def resonance_histogram(s: PointSet, weights=None,
                        size_bound: int = DEFAULT_SIZE_BOUND) -> LevelHistogram:
    """Histogram of levels over all ordered quadruples with vertices in s.

    Enumerates (xi1, xi2, xi4) in s^3 and tests xi3 = xi2 + xi4 - xi1 for
    membership.  ``weights`` (callable, mapping, or array over s.points)
    switches from counting to the weighted sum f(Q).
    """
    _check_size(s, size_bound)
    n = len(s)
    hist = LevelHistogram(weighted=weights is not None)
    if n == 0:
        return hist
    pts = s.arrays()
    w = _weights_array(s, weights)

    # dense membership grid over the bounding box
    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    gw, gh = int(xmax - xmin + 1), int(ymax - ymin + 1)
    if gw * gh > 1 << 26:
        raise ResourceLimitError("bounding box too large for dense membership grid")
    grid = np.full((gw, gh), -1, dtype=np.int64)
    grid[pts[:, 0] - xmin, pts[:, 1] - ymin] = np.arange(n)

    sum24x = pts[:, None, 0] + pts[None, :, 0]
    sum24y = pts[:, None, 1] + pts[None, :, 1]
    wconj = np.conj(w) if w is not None else None
    acc: dict[int, complex] = {}
    use_dense, offset, span = _level_span(pts)
    dense_r = np.zeros(span, dtype=np.float64) if use_dense else None
    dense_i = np.zeros(span, dtype=np.float64) if (use_dense and w is not None) else None
    dense_c = np.zeros(span, dtype=np.int64) if use_dense else None

    for i in range(n):
        x1 = pts[i]
        x3x = sum24x - x1[0]
        x3y = sum24y - x1[1]
        ok = ((x3x >= xmin) & (x3x <= xmax) & (x3y >= ymin) & (x3y <= ymax))
        idx3 = grid[x3x[ok] - xmin, x3y[ok] - ymin]
        hit = idx3 >= 0
        if not hit.any():
            continue
        diff2 = x1 - pts  # xi1 - xi2 along rows / xi1 - xi4 along columns
        lev = 2 * (diff2[:, None, 0] * diff2[None, :, 0]
                   + diff2[:, None, 1] * diff2[None, :, 1])
        lev_ok = lev[ok][hit]
        if w is None:
            if use_dense:
                dense_c += np.bincount(lev_ok + offset, minlength=span)
            else:
                u, c = np.unique(lev_ok, return_counts=True)
                for t, cnt in zip(u.tolist(), c.tolist()):
                    acc[t] = acc.get(t, 0) + int(cnt)
        else:
            pair = (wconj[:, None] * wconj[None, :])[ok][hit]
            vals = w[i] * pair * w[idx3[hit]]
            if use_dense:
                dense_r += np.bincount(lev_ok + offset, weights=vals.real, minlength=span)
                dense_i += np.bincount(lev_ok + offset, weights=vals.imag, minlength=span)
            else:
                u, inv = np.unique(lev_ok, return_inverse=True)
                sr = np.bincount(inv, weights=vals.real)
                si = np.bincount(inv, weights=vals.imag)
                for t, vr, vi in zip(u.tolist(), sr.tolist(), si.tolist()):
                    acc[t] = acc.get(t, 0j) + complex(vr, vi)

    if use_dense:
        if w is None:
            nz = np.nonzero(dense_c)[0]
            hist.entries = {int(t - offset): int(dense_c[t]) for t in nz}
        else:
            nz = np.nonzero((dense_r != 0.0) | (dense_i != 0.0))[0]
            hist.entries = {int(t - offset): complex(dense_r[t], dense_i[t]) for t in nz}
    else:
        hist.entries = acc
    return hist


def _level_span(pts: np.ndarray) -> tuple[bool, int, int]:
    dx = int(pts[:, 0].max() - pts[:, 0].min())
    dy = int(pts[:, 1].max() - pts[:, 1].min())
    bound = 2 * (dx * dx + dy * dy)
    span = 2 * bound + 1
    return span <= _DENSE_LEVEL_SPAN, bound, span


def resonance_histogram_bruteforce(s: PointSet, weights=None,
                                   size_bound: int = 60) -> LevelHistogram:
    """Literal O(n^4) oracle over all ordered quadruples."""
    _check_size(s, size_bound)
    w = _weights_array(s, weights)
    hist = LevelHistogram(weighted=weights is not None)
    acc: dict[int, complex] = {}
    pts = s.points
    for i1, x1 in enumerate(pts):
        for i2, x2 in enumerate(pts):
            for i3, x3 in enumerate(pts):
                x4 = (x1[0] + x3[0] - x2[0], x1[1] + x3[1] - x2[1])
                i4 = s._index.get(x4)
                if i4 is None:
                    continue
                t = 2 * ((x1[0] - x2[0]) * (x1[0] - x4[0])
                         + (x1[1] - x2[1]) * (x1[1] - x4[1]))
                if w is None:
                    acc[t] = acc.get(t, 0) + 1
                else:
                    acc[t] = acc.get(t, 0j) + w[i1] * np.conj(w[i2]) * w[i3] * np.conj(w[i4])
    hist.entries = acc
    return hist


def additive_energy(s: PointSet, size_bound: int = DEFAULT_SIZE_BOUND) -> int:
    """#{(x1,x2,x3,x4) in S^4 : x1 + x3 = x2 + x4}.

    Computed independently of the histogram as sum over sum-values v of
    r(v)^2, r(v) = #{(x1,x3) : x1 + x3 = v}.
    """
    _check_size(s, size_bound)
    pts = s.arrays()
    sums = (pts[:, None, :] + pts[None, :, :]).reshape(-1, 2)
    _, counts = np.unique(sums, axis=0, return_counts=True)
    return int((counts.astype(np.int64) ** 2).sum())


def count_level_range(s: PointSet, max_level: int, include_zero: bool = True,
                      size_bound: int = DEFAULT_SIZE_BOUND) -> int:
    """Cumulative count of quadruples with level in [0, M] or [1, M]."""
    if max_level < 1:
        raise DomainError("max_level must be >= 1")
    hist = resonance_histogram(s, size_bound=size_bound)
    return int(hist.cumulative(max_level, include_zero=include_zero).real)


def ap3_count(s: PointSet, size_bound: int = DEFAULT_SIZE_BOUND) -> int:
    """#{(a, b, c) in S^3 : a + c = 2b}, degenerate triples included."""
    _check_size(s, size_bound)
    total = 0
    for a in s.points:
        for c in s.points:
            m = (a[0] + c[0], a[1] + c[1])
            if m[0] % 2 == 0 and m[1] % 2 == 0 and (m[0] // 2, m[1] // 2) in s:
                total += 1
    return total


def _count_on_line(pts: np.ndarray, base: Point, direction: Point) -> int:
    # p on the line <=> cross(p - base, direction) == 0
    rel = pts - np.array(base, dtype=np.int64)
    cross = rel[:, 0] * direction[1] - rel[:, 1] * direction[0]
    return int(np.count_nonzero(cross == 0))


def cross_count(s: PointSet, xi1: Point, xi2: Point) -> int:
    """Max point count of s on the line through xi1 toward xi2 and on its
    perpendicular through xi1."""
    if xi1 == xi2:
        raise DomainError("cross count needs two distinct points")
    if xi1 not in s or xi2 not in s:
        raise DomainError("both anchor points must belong to the set")
    d = (xi2[0] - xi1[0], xi2[1] - xi1[1])
    pts = s.arrays()
    along = _count_on_line(pts, xi1, d)
    across = _count_on_line(pts, xi1, (-d[1], d[0]))
    return max(along, across)


Line = tuple[int, int, int]


def canonical_line(p: Point, q: Point) -> Line:
    """Primitive (a, b, c) with a x + b y = c through p, q; the first nonzero
    of (a, b) is positive and gcd(a, b, c) = 1."""
    if p == q:
        raise DomainError("two distinct points are needed")
    dx, dy = q[0] - p[0], q[1] - p[1]
    a, b = -dy, dx
    g = math.gcd(a, b)
    a //= g
    b //= g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    c = a * p[0] + b * p[1]
    return (a, b, c)


def is_canonical_line(line: Line) -> bool:
    a, b, c = line
    if a == 0 and b == 0:
        return False
    if math.gcd(math.gcd(abs(a), abs(b)), abs(c)) != 1:
        return False
    return a > 0 or (a == 0 and b > 0)


def rich_lines(s: PointSet, k: int, size_bound: int = DEFAULT_SIZE_BOUND) -> list[tuple[Line, int]]:
    """All distinct lines containing at least k >= 2 points of s."""
    if k < 2:
        raise DomainError("k must be >= 2")
    _check_size(s, size_bound)
    pts = s.points
    n = len(pts)
    if k > n:
        return []
    candidates: set[Line] = set()
    for i in range(n):
        for j in range(i + 1, n):
            candidates.add(canonical_line(pts[i], pts[j]))
    arr = s.arrays()
    out = []
    for (a, b, c) in candidates:
        cnt = int(np.count_nonzero(arr[:, 0] * a + arr[:, 1] * b == c))
        if cnt >= k:
            out.append(((a, b, c), cnt))
    out.sort(key=lambda lc: (-lc[1], lc[0]))
    return out


def point_line_incidences(s: PointSet, lines: Sequence[Line]) -> int:
    """#{(p, l) : p in s, p on l}; lines must be in canonical form."""
    arr = s.arrays()
    total = 0
    for line in lines:
        if not is_canonical_line(line):
            raise DomainError(f"line not in canonical form: {line}")
        a, b, c = line
        total += int(np.count_nonzero(arr[:, 0] * a + arr[:, 1] * b == c))
    return total


def grid_point_set(n: int, spacing: int = 1) -> PointSet:
    """[n]^2-style grid {-n..n}^2 scaled by ``spacing``."""
    rng = range(-n, n + 1)
    return PointSet([(spacing * x, spacing * y) for x in rng for y in rng])


def write_histogram_csv(hist: LevelHistogram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tau,count_or_real,imag\n")
        for t, re, im in hist.to_rows():
            fh.write(f"{t},{re!r},{im!r}\n")
