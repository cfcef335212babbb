"""The projective dynamics on the open simplex of metric parameters.

A point (beta, gamma, delta) with beta + gamma + delta = 1 and every
coordinate below 1/2 encodes a weighted metric on the Grigorchuk group.
The letter maps are p -> M_x p / eta(p, x).  All of that is exact
rational arithmetic; only the Hilbert metric and the spectral data are
floating point.

Products follow the convention ``matrix_product(w) = M_{w[-1]} ... M_{w[0]}``:
the first letter acts first, so its matrix is the rightmost factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

HALF = Fraction(1, 2)

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

MATRICES: dict[int, Matrix] = {
    0: ((1, 1, 1), (0, 2, 0), (0, 0, 2)),
    1: ((2, 0, 0), (1, 1, 1), (0, 0, 2)),
    2: ((2, 0, 0), (0, 2, 0), (1, 1, 1)),
}

IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class PerronError(ValueError):
    """The matrix has no interior Perron eigenvector (not primitive)."""


@dataclass(frozen=True)
class SimplexPoint:
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def __post_init__(self) -> None:
        coords = tuple(Fraction(c) for c in (self.beta, self.gamma, self.delta))
        object.__setattr__(self, "beta", coords[0])
        object.__setattr__(self, "gamma", coords[1])
        object.__setattr__(self, "delta", coords[2])
        if sum(coords) != 1:
            raise ValueError(f"coordinates must sum to 1: {coords}")
        if min(coords) <= 0 or max(coords) >= HALF:
            raise ValueError(f"point is not interior: {coords}")

    @classmethod
    def barycentre(cls) -> SimplexPoint:
        third = Fraction(1, 3)
        return cls(third, third, third)

    @classmethod
    def normalized(cls, coords: Iterable[object]) -> SimplexPoint:
        """Scale nonnegative numbers (floats are taken exactly) to sum 1."""
        c = [Fraction(x) for x in coords]
        total = sum(c)
        return cls(*(x / total for x in c))

    def __iter__(self):
        return iter((self.beta, self.gamma, self.delta))

    def __getitem__(self, x: int) -> Fraction:
        return (self.beta, self.gamma, self.delta)[x]

    def as_floats(self) -> tuple[float, float, float]:
        return (float(self.beta), float(self.gamma), float(self.delta))


@dataclass(frozen=True)
class MetricWeights:
    wa: Fraction
    wb: Fraction
    wc: Fraction
    wd: Fraction

    @property
    def wab(self) -> Fraction:
        return self.wa + self.wb

    @property
    def wac(self) -> Fraction:
        return self.wa + self.wc

    @property
    def wad(self) -> Fraction:
        return self.wa + self.wd

    def of(self, g: str) -> Fraction:
        """Weight of a generator letter; "1" (the identity) weighs 0."""
        if g == "1" or g == "":
            return Fraction(0)
        return {"a": self.wa, "b": self.wb, "c": self.wc, "d": self.wd}[g]

    def as_dict(self) -> dict[str, Fraction]:
        return {"a": self.wa, "b": self.wb, "c": self.wc, "d": self.wd}

    def word_norm(self, word: str) -> Fraction:
        table = self.as_dict()
        return sum((table[ch] for ch in word), Fraction(0))


def weights(p: SimplexPoint) -> MetricWeights:
    wa = 1 - 2 * max(p)
    return MetricWeights(wa, p.beta - wa, p.gamma - wa, p.delta - wa)


def eta(p: SimplexPoint, x: int) -> Fraction:
    return 3 - 2 * p[x]


def _mat_vec(m: Matrix, v: Sequence) -> tuple:
    return tuple(row[0] * v[0] + row[1] * v[1] + row[2] * v[2] for row in m)


def apply_map(p: SimplexPoint, x: int) -> SimplexPoint:
    e = eta(p, x)
    return SimplexPoint(*(c / e for c in _mat_vec(MATRICES[x], tuple(p))))


def mu(p: SimplexPoint) -> Fraction:
    return min(p)


def orbit(p: SimplexPoint, word: str) -> list[SimplexPoint]:
    """The points V_0 = p, V_1, ..., V_len(word)."""
    points = [p]
    for ch in word:
        points.append(apply_map(points[-1], int(ch)))
    return points


def eta_word(p: SimplexPoint, word: str) -> Fraction:
    total = Fraction(1)
    for ch in word:
        x = int(ch)
        total *= eta(p, x)
        p = apply_map(p, x)
    return total


def address(p: SimplexPoint) -> int | None:
    """The letter x whose map image contains p, or None on a seam.

    The image of M_x is where coordinate x is the strict maximum.
    """
    top = max(p)
    winners = [x for x in range(3) if p[x] == top]
    return winners[0] if len(winners) == 1 else None


def hilbert_cross_ratio(p: SimplexPoint, q: SimplexPoint) -> Fraction:
    """Exact cross-ratio whose logarithm is the Hilbert distance."""
    if p == q:
        return Fraction(1)
    d = [qc - pc for pc, qc in zip(p, q)]
    # the chord p + t (q - p) leaves the simplex where a coordinate hits 1/2
    t_plus = min((HALF - pc) / dc for pc, dc in zip(p, d) if dc > 0)
    t_minus = max((HALF - pc) / dc for pc, dc in zip(p, d) if dc < 0)
    return (t_plus * (1 - t_minus)) / ((t_plus - 1) * (-t_minus))


def hilbert_distance(p: SimplexPoint, q: SimplexPoint) -> float:
    if p == q:
        return 0.0
    r = hilbert_cross_ratio(p, q)
    return math.log(r.numerator) - math.log(r.denominator)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def matrix_product(word: str) -> Matrix:
    if not word:
        raise ValueError("matrix_product needs a nonempty word")
    m = IDENTITY
    for ch in word:
        m = mat_mul(MATRICES[int(ch)], m)
    return m


def char_poly(m: Matrix) -> tuple[int, int, int, int]:
    """Coefficients [1, c2, c1, c0] of det(lambda I - m)."""
    tr = m[0][0] + m[1][1] + m[2][2]
    minors = (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return (1, -tr, minors, -det)


# --- exact root isolation -------------------------------------------------

Poly = tuple[int, ...]  # integer coefficients, highest degree first


def _integral(coeffs: Sequence[Fraction]) -> Poly:
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return tuple(int(c * lcm) for c in coeffs)


def _poly_rem(num: Sequence[Fraction], den: Sequence[Fraction]) -> list[Fraction]:
    num = list(num)
    while len(num) >= len(den):
        factor = num[0] / den[0]
        for i in range(len(den)):
            num[i] -= factor * den[i]
        num.pop(0)
    while num and num[0] == 0:
        num.pop(0)
    return num


@lru_cache(maxsize=4096)
def _sturm_chain(coeffs: Poly) -> tuple[Poly, ...]:
    n = len(coeffs) - 1
    p0 = [Fraction(c) for c in coeffs]
    p1 = [Fraction(c * (n - i)) for i, c in enumerate(coeffs[:-1])]
    chain = [p0, p1]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return tuple(_integral(p) for p in chain)


def _sign_at(poly: Poly, num: int, shift: int) -> int:
    """Sign of poly(num / 2**shift), evaluated in integers."""
    deg = len(poly) - 1
    total = 0
    for i, c in enumerate(poly):
        total += c * num ** (deg - i) << (shift * i)
    return (total > 0) - (total < 0)


def _variations(chain: tuple[Poly, ...], num: int, shift: int) -> int:
    signs = [s for s in (_sign_at(p, num, shift) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at_infinity(chain: tuple[Poly, ...]) -> int:
    signs = [(p[0] > 0) - (p[0] < 0) for p in chain]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


@lru_cache(maxsize=65536)
def _largest_root(coeffs: Poly, tol: float) -> float:
    chain = _sturm_chain(coeffs)
    top = _variations_at_infinity(chain)
    bound = 1 + max(abs(c) for c in coeffs[1:])
    shift = 0
    lo, hi = -bound, bound  # dyadic numerators over 2**shift
    # bisect on distinct-root counts in (lo, hi]; the top root stays inside
    while (hi - lo) > tol * 2**shift:
        lo, hi, shift = 2 * lo, 2 * hi, shift + 1
        mid = (lo + hi) // 2
        if _variations(chain, mid, shift) - top >= 1:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2 ** (shift + 1)
    # integer roots (often repeated, where Newton crawls) are returned exactly
    n = round(x)
    if abs(x - n) < 1e-6 and _sign_at(coeffs, n, 0) == 0:
        return float(n)
    # Newton polish in floats, kept only if it stays in the bracket
    a, b = lo / 2**shift, hi / 2**shift
    f = lambda t: ((t + coeffs[1]) * t + coeffs[2]) * t + coeffs[3]
    df = lambda t: (3 * t + 2 * coeffs[1]) * t + coeffs[2]
    for _ in range(3):
        slope = df(x)
        if slope == 0:
            break
        nx = x - f(x) / slope
        if not a <= nx <= b:
            break
        x = nx
    return x


def spectral_radius(m: Matrix, tol: float = 1e-12) -> float:
    """Largest real root of the characteristic polynomial (Perron root)."""
    return _largest_root(char_poly(m), tol)


def is_primitive(m: Matrix) -> bool:
    pattern = tuple(tuple(int(v != 0) for v in row) for row in m)
    power = pattern
    for _ in range(4):  # Wielandt: (n - 1)^2 + 1 = 5 suffices for n = 3
        power = tuple(tuple(int(v != 0) for v in row) for row in mat_mul(power, pattern))
    return all(all(row) for row in power) or all(all(row) for row in pattern)


def perron_vector(m: Matrix, tol: float = 1e-12) -> tuple[float, float, float]:
    if not is_primitive(m):
        raise PerronError("matrix is not primitive; no interior Perron vector")
    rho = spectral_radius(m, tol)
    a = [[float(m[i][j]) - (rho if i == j else 0.0) for j in range(3)] for i in range(3)]
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        u, v = a[i], a[j]
        cross = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        size = sum(c * c for c in cross)
        if best is None or size > best[0]:
            best = (size, cross)
    total = sum(best[1])
    vec = tuple(c / total for c in best[1])
    if min(vec) <= 0 or max(vec) >= 0.5:
        raise PerronError(f"Perron vector {vec} is not interior")
    return vec


def cesaro_exponent(word: str, tol: float = 1e-12) -> tuple[float, float]:
    """(eta, alpha) with eta the per-letter spectral radius, alpha = log 2 / log eta."""
    rho = spectral_radius(matrix_product(word), tol)
    eta_value = rho ** (1.0 / len(word))
    return eta_value, math.log(2) / math.log(eta_value)


ETA_PLUS = _largest_root((1, -1, -2, -4), 1e-15)
ALPHA_MINUS = math.log(2) / math.log(ETA_PLUS)
