"""Integer-point primitives on Z^2.

Points are plain ``(x, y)`` integer tuples.  Coordinates are capped at
``COORD_CAP = 2**20`` so that every product appearing in the resonance level
2*(xi1-xi2).(xi1-xi4) stays well inside signed 64-bit range
(2*(2*2**20)**2 < 2**63).

A point is *irreducible* (visible from the origin) when gcd(x, y) = 1.  The
density of irreducible points in a large disc is 6/pi^2 = 1/zeta(2); routines
here expose both the count and the inverse-square sum over irreducible points,
whose growth is (12/pi) * ln R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError

COORD_CAP = 1 << 20

Point = tuple[int, int]

# direct per-point gcd is kept as the readable oracle below this size
_MOBIUS_CUTOVER = 512

_GCD_CHUNK = 1 << 22


def as_point(x: int, y: int) -> Point:
    """Validate and normalize a lattice point."""
    x = int(x)
    y = int(y)
    if abs(x) > COORD_CAP or abs(y) > COORD_CAP:
        raise DomainError(f"coordinate exceeds cap {COORD_CAP}: {(x, y)}")
    return (x, y)


def gcd_point(xi: Point) -> int:
    """gcd of the coordinate pair; gcd(0, n) = |n|.  Zero input is rejected."""
    if xi[0] == 0 and xi[1] == 0:
        raise DomainError("gcd of the zero point is undefined")
    return math.gcd(xi[0], xi[1])


def perp(xi: Point) -> Point:
    """Counterclockwise quarter rotation (x, y) -> (-y, x)."""
    return (-xi[1], xi[0])


def is_irreducible(xi: Point) -> bool:
    return (xi[0] != 0 or xi[1] != 0) and math.gcd(xi[0], xi[1]) == 1


def norm_sq(xi: Point) -> int:
    return xi[0] * xi[0] + xi[1] * xi[1]


@dataclass(frozen=True)
class GaussianCosets:
    """Cosets of the square sublattice {m*eta + n*perp(eta)} of Z^2.

    ``representatives`` lists the integer points of the fundamental cell
    [0,1)eta + [0,1)perp(eta); there are exactly |eta|^2 of them.
    """

    modulus: Point
    representatives: list[Point]

    @property
    def index(self) -> int:
        return norm_sq(self.modulus)


def coset_representatives(eta: Point) -> GaussianCosets:
    """Enumerate Z^2 / (eta Z + perp(eta) Z) by its fundamental-cell points.

    Membership of z in the cell is the pair of exact integer conditions
    0 <= z.eta < |eta|^2 and 0 <= z.perp(eta) < |eta|^2.
    """
    if eta == (0, 0):
        raise DomainError("zero modulus")
    a, b = eta
    n2 = a * a + b * b
    reps: list[Point] = []
    # bounding box of the cell corners 0, eta, perp(eta), eta+perp(eta)
    xs = (0, a, -b, a - b)
    ys = (0, b, a, a + b)
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if 0 <= x * a + y * b < n2 and 0 <= -x * b + y * a < n2:
                reps.append((x, y))
    if len(reps) != n2:
        raise AssertionError(f"cell enumeration produced {len(reps)} != {n2} points")
    return GaussianCosets(modulus=eta, representatives=reps)


def reduce_to_coset(z: Point, eta: Point) -> tuple[Point, int, int]:
    """Write z = m*eta + n*perp(eta) + r with r in the fundamental cell.

    Exact in integer arithmetic: the coefficients of z in the (eta, perp eta)
    basis are rationals with denominator |eta|^2, and floor division gives
    (m, n) directly.
    """
    if eta == (0, 0):
        raise DomainError("zero modulus")
    a, b = eta
    n2 = a * a + b * b
    m = (z[0] * a + z[1] * b) // n2
    n = (-z[0] * b + z[1] * a) // n2
    r = (z[0] - m * a + n * b, z[1] - m * b - n * a)
    return r, m, n


def gaussian_product(u: Point, v: Point) -> Point:
    """Product of u and v viewed as Gaussian integers x + iy."""
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def mobius_sieve(n: int) -> np.ndarray:
    """Mobius function mu(1..n) as an int8 array of length n+1."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    primes_done = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if not primes_done[p]:
            mu[p::p] *= -1
            primes_done[p::p] = True
            p2 = p * p
            if p2 <= n:
                mu[p2::p2] = 0
    return mu


def _punctured_disc_count(radius_num: int, d: int) -> int:
    """#{(x,y) != 0 : d^2 (x^2+y^2) <= radius_num^2}, exact integers."""
    r2 = radius_num * radius_num
    d2 = d * d
    if d2 > r2:
        return 0
    xmax = math.isqrt(r2 // d2)
    total = 0
    for x in range(-xmax, xmax + 1):
        rem = r2 - d2 * x * x
        total += 2 * math.isqrt(rem // d2) + 1
    return total - 1


def coprime_count_mobius(radius: float) -> int:
    """#{eta irreducible, |eta| <= R} by Mobius inversion over d = gcd."""
    if radius < 1:
        return 0
    # work with the exact integer radius^2 when radius is integral
    rnum = int(math.floor(radius))
    exact_int = float(rnum) == float(radius)
    dmax = rnum
    mu = mobius_sieve(max(dmax, 1))
    total = 0
    for d in range(1, dmax + 1):
        m = int(mu[d])
        if m == 0:
            continue
        if exact_int:
            total += m * _punctured_disc_count(rnum, d)
        else:
            total += m * _punctured_disc_count_float(radius, d)
    return total


def _punctured_disc_count_float(radius: float, d: int) -> int:
    r = radius / d
    if r < 1:
        return 0
    xmax = int(math.floor(r))
    total = 0
    r2 = r * r
    for x in range(-xmax, xmax + 1):
        total += 2 * int(math.floor(math.sqrt(max(r2 - x * x, 0.0)))) + 1
    return total - 1


def _first_quadrant_strips(radius: float) -> Iterable[tuple[int, np.ndarray]]:
    """Yield (x, y-array) strips covering {x>=1, y>=1, x^2+y^2 <= R^2}."""
    r2 = radius * radius
    xmax = int(math.floor(math.sqrt(max(r2 - 1.0, 0.0))))
    for x in range(1, xmax + 1):
        ymax = int(math.floor(math.sqrt(r2 - x * x)))
        if ymax >= 1:
            yield x, np.arange(1, ymax + 1, dtype=np.int64)


def coprime_count_direct(radius: float) -> int:
    """Per-point gcd count of irreducible points in the closed disc."""
    if radius < 1:
        return 0
    count = 4  # (+-1, 0), (0, +-1)
    for x, ys in _first_quadrant_strips(radius):
        count += 4 * int(np.count_nonzero(np.gcd(x, ys) == 1))
    return count


def coprime_count(radius: float) -> int:
    """#{eta in Z^2, gcd(eta) = 1, 0 < |eta| <= R}.

    Uses the Mobius sieve above _MOBIUS_CUTOVER and the direct per-point
    gcd below it; the two agree exactly (cross-checked in the test suite).
    """
    if radius < 1:
        return 0
    if radius <= _MOBIUS_CUTOVER:
        return coprime_count_direct(radius)
    return coprime_count_mobius(radius)


def coprime_density(radius: float) -> float:
    """coprime_count(R) / (pi R^2); tends to 6/pi^2 = 0.607927..."""
    return coprime_count(radius) / (math.pi * radius * radius)


def coprime_inverse_square_sum(radius: float) -> float:
    """Sum of 1/|eta|^2 over irreducible eta with 1 <= |eta| <= R.

    Grows like (12/pi) ln R + const.
    """
    if radius < 1:
        return 0.0
    return float(coprime_inverse_square_ladder([radius])[0])


def coprime_inverse_square_ladder(radii: Sequence[float]) -> list[float]:
    """Inverse-square coprime sums at several radii in one enumeration pass."""
    radii = list(radii)
    if any(r < 1 for r in radii):
        raise DomainError("radii must be >= 1")
    rmax = max(radii)
    caps = np.array([r * r for r in radii])
    totals = np.full(len(radii), 4.0)  # the four unit vectors
    for x, ys in _first_quadrant_strips(rmax):
        s = (ys * ys + x * x).astype(np.float64)
        s = s[np.gcd(x, ys) == 1]
        if s.size == 0:
            continue
        inv = 1.0 / s
        for j, cap in enumerate(caps):
            totals[j] += 4.0 * float(inv[s <= cap].sum())
    return [float(t) for t in totals]


def sum_over_irreducible(radius: float, func: Callable[[np.ndarray], np.ndarray]) -> float:
    """Sum func(|eta|^2) over irreducible eta with |eta| <= R.

    ``func`` maps a float64 array of squared norms to summand values; it is
    applied strip by strip so memory stays bounded.
    """
    if radius < 1:
        return 0.0
    total = 4.0 * float(np.asarray(func(np.array([1.0]))).sum())
    for x, ys in _first_quadrant_strips(radius):
        s = (ys * ys + x * x).astype(np.float64)
        s = s[np.gcd(x, ys) == 1]
        if s.size:
            total += 4.0 * float(np.asarray(func(s)).sum())
    return total


def fit_log_slope(radii: Sequence[float], values: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit values ~ slope * ln(radius) + intercept."""
    x = np.log(np.asarray(radii, dtype=np.float64))
    y = np.asarray(values, dtype=np.float64)
    a = np.vstack([x, np.ones_like(x)]).T
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    return float(sol[0]), float(sol[1])
