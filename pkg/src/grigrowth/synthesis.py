"""Target growth functions and the greedy synthesis of omega.

Growth targets are handled in the log domain: a :class:`TargetGrowth`
maps L = log R to log g(R), so g can be compared with 2^k for prefixes
whose eta product has thousands of digits.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import BudgetExceeded
from .sequences import OmegaSeq
from .simplex import ETA_PLUS, MATRICES, SimplexPoint, eta, eta_word, mu, orbit

LOG2 = math.log(2)


class SynthesisStall(ValueError):
    """The greedy loop left the band a target obeying the doubling condition stays in."""


class ResourceError(RuntimeError):
    pass


# --- Ackermann ------------------------------------------------------------

_ACK_DIGIT_CAP = 10**6


def ackermann(m: int, n: int) -> int:
    """A(m, n) exactly; closed forms for m <= 3, refuses anything larger."""
    if m < 0 or n < 0:
        raise ValueError("ackermann needs natural arguments")
    if m == 0:
        return n + 1
    if m == 1:
        return n + 2
    if m == 2:
        return 2 * n + 3
    if m == 3:
        if n + 3 > _ACK_DIGIT_CAP:
            raise ResourceError(f"A(3, {n}) has too many digits")
        return 2 ** (n + 3) - 3
    if m == 4 and n == 0:
        return 13
    if m == 4 and n == 1:
        return 65533
    raise ResourceError(f"A({m}, {n}) is beyond reach")


# --- targets --------------------------------------------------------------


@dataclass(frozen=True)
class TargetGrowth:
    """Increasing g with g(1) = 1, given through ``log_g(log R)``.

    ``rmin`` is where the doubling condition starts to hold; ``exact`` is
    an optional exact comparator for g(num/den) against 2^k (returns -1, 0, 1).
    """

    name: str
    log_g: Callable[[float], float]
    rmin: float = 1.0
    exact: Callable[[int, int, int], int] | None = field(default=None, compare=False)

    def __call__(self, r: float) -> float:
        return math.exp(self.log_g(math.log(r)))

    def eval(self, r: float) -> float:
        return self(r)


def _pow_target(alpha: Fraction) -> TargetGrowth:
    a = float(alpha)

    def exact(num: int, den: int, k: int) -> int:
        # (num/den)^(p/q) vs 2^k  <=>  num^p vs den^p 2^(kq)
        p, q = alpha.numerator, alpha.denominator
        lhs, rhs = num**p, den**p * 2 ** (k * q)
        return (lhs > rhs) - (lhs < rhs)

    # exact powers only pay off for short exponents; long decimals stay in floats
    small = alpha.denominator <= 10**4 and alpha.numerator <= 10**4
    return TargetGrowth(f"pow:{alpha}", lambda L: a * L, 1.0, exact if small else None)


def _linear_exact(num: int, den: int, k: int) -> int:
    rhs = den * 2**k
    return (num > rhs) - (num < rhs)


# the diagonal n -> A(n, n) for n <= 3, capped after that
_DIAGONAL_LOGS = [math.log(ackermann(n, n)) for n in range(4)]


def _slow_factor(L: float) -> float:
    """Piecewise linear in log R through (log A(n, n), n); constant past n = 3."""
    if L <= 0:
        return 0.0
    if L >= _DIAGONAL_LOGS[-1]:
        return float(len(_DIAGONAL_LOGS) - 1)
    i = bisect.bisect_right(_DIAGONAL_LOGS, L) - 1
    lo, hi = _DIAGONAL_LOGS[i], _DIAGONAL_LOGS[i + 1]
    return i + (L - lo) / (hi - lo)


PRESET_NAMES = ("pow:<alpha>", "linear", "r-over-log", "r-over-loglog", "ackermann-inverse")


def preset_growth(name: str) -> TargetGrowth:
    """Named target g, normalized to g(1) = 1."""
    if name.startswith("pow:"):
        try:
            alpha = Fraction(name[4:])
        except (ValueError, ZeroDivisionError):
            raise KeyError(f"bad exponent in {name!r}") from None
        if alpha <= 0:
            raise KeyError(f"exponent must be positive in {name!r}")
        return _pow_target(alpha)
    if name == "linear":
        return TargetGrowth("linear", lambda L: L, 1.0, _linear_exact)
    if name == "r-over-log":
        return TargetGrowth(name, lambda L: L - math.log1p(L), math.exp(8))
    if name == "r-over-loglog":
        return TargetGrowth(name, lambda L: L - math.log1p(math.log1p(L)), math.exp(4))
    if name == "ackermann-inverse":
        return TargetGrowth(name, lambda L: L - math.log1p(_slow_factor(L)), 61.0)
    raise KeyError(f"unknown growth preset {name!r}")


# --- doubling condition ---------------------------------------------------


@dataclass
class DoublingReport:
    ok: bool
    left_margin: float    # min over R of log(2g(R)) - log g(2R)
    right_margin: float   # min over R of log g(eta+ R) - log(2g(R))
    violations: list[tuple[float, str]]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "left_margin": self.left_margin,
                "right_margin": self.right_margin,
                "violations": [{"R": r, "side": s} for r, s in self.violations]}


def check_doubling(g: TargetGrowth, rmin: float, rmax: float, samples: int = 200,
                   tol: float = 1e-9) -> DoublingReport:
    """Test g(2R) <= 2g(R) <= g(eta+ R) on a log-spaced grid of [rmin, rmax]."""
    if not 1 <= rmin < rmax:
        raise ValueError("need 1 <= rmin < rmax")
    lo, hi = math.log(rmin), math.log(rmax)
    step = math.log(ETA_PLUS)
    left = right = math.inf
    bad = []
    for i in range(samples):
        L = lo + (hi - lo) * i / max(samples - 1, 1)
        base = LOG2 + g.log_g(L)
        lm = base - g.log_g(L + LOG2)
        rm = g.log_g(L + step) - base
        left, right = min(left, lm), min(right, rm)
        if lm < -tol:
            bad.append((math.exp(L), "left"))
        if rm < -tol:
            bad.append((math.exp(L), "right"))
    return DoublingReport(not bad, left, right, bad)


# --- greedy synthesis -----------------------------------------------------


@dataclass(frozen=True)
class BoundaryRecord:
    k: int
    kind: str          # "after-012-block" or "after-2-block"
    log_value: float   # log g(eta(V0, prefix))
    log2_ratio: float  # log2 of g(eta)/2^k
    complete: bool = True

    @property
    def ratio(self) -> float:
        return 2.0**self.log2_ratio

    def as_dict(self) -> dict:
        return {"k": self.k, "kind": self.kind, "log_value": self.log_value,
                "ratio": self.ratio, "complete": self.complete}


@dataclass
class SynthesisTrace:
    prefix: OmegaSeq
    records: list[BoundaryRecord]

    def syllables(self) -> list[tuple[int, int]]:
        """(i, j) exponents of (012)^i 2^j; the last j may be 0."""
        out: list[list[int]] = []
        text = "".join(map(str, self.prefix.data))
        pos = 0
        while pos < len(text):
            i = 0
            while text.startswith("012", pos):
                i, pos = i + 1, pos + 3
            j = 0
            while pos < len(text) and text[pos] == "2":
                j, pos = j + 1, pos + 1
            if i == 0 and j == 0:
                raise ValueError("prefix is not in syllable form")
            out.append([i, j])
        return [tuple(s) for s in out]

    def as_dict(self) -> dict:
        return {"length": len(self.prefix.data),
                "syllables": [list(s) for s in self.syllables()],
                "records": [r.as_dict() for r in self.records]}


class _EtaTracker:
    """eta(V0, w) = sum(u) / den with u the integer vector M_w (den V0)."""

    def __init__(self, v0: SimplexPoint) -> None:
        den = math.lcm(*(c.denominator for c in v0))
        self.den = den
        self.u = [int(c * den) for c in v0]
        self.k = 0

    def push(self, x: int) -> None:
        m = MATRICES[x]
        self.u = [sum(m[i][j] * self.u[j] for j in range(3)) for i in range(3)]
        self.k += 1

    @property
    def num(self) -> int:
        return sum(self.u)

    def log_eta(self) -> float:
        return math.log(self.num) - math.log(self.den)


def _compare(g: TargetGrowth, tr: _EtaTracker, guard: float = 1e-9) -> tuple[int, float]:
    """Sign of g(eta) - 2^k and log g(eta); exact when the floats are too close."""
    lv = g.log_g(tr.log_eta())
    diff = lv - tr.k * LOG2
    if abs(diff) > guard * max(1.0, abs(lv)):
        return (1 if diff > 0 else -1), lv
    if g.exact is not None:
        return g.exact(tr.num, tr.den, tr.k), lv
    return 0, lv


def synthesize_omega(g: TargetGrowth, v0: SimplexPoint, n: int,
                     stall_bits: float = 16.0) -> SynthesisTrace:
    """Greedy prefix of length >= n keeping g(eta(V0, prefix)) near 2^k.

    While g(eta) <= 2^k append 012, while g(eta) > 2^k append 2.
    """
    if n < 3:
        raise ValueError("need N >= 3")
    tr = _EtaTracker(v0)
    letters: list[int] = []
    records: list[BoundaryRecord] = []

    def step(block: tuple[int, ...]) -> tuple[int, float]:
        for x in block:
            tr.push(x)
            letters.append(x)
        sign, lv = _compare(g, tr)
        if abs(lv / LOG2 - tr.k) > stall_bits:
            raise SynthesisStall(f"g(eta)/2^k left [2^-{stall_bits:g}, 2^{stall_bits:g}] "
                                 f"at k = {tr.k}: doubling condition violated")
        return sign, lv

    sign, lv = _compare(g, tr)
    while len(letters) < n:
        if sign <= 0:
            while sign <= 0 and len(letters) < n:
                sign, lv = step((0, 1, 2))
            kind, complete = "after-012-block", sign > 0
        else:
            while sign > 0 and len(letters) < n:
                sign, lv = step((2,))
            kind, complete = "after-2-block", sign <= 0
        records.append(BoundaryRecord(tr.k, kind, lv, lv / LOG2 - tr.k, complete))
    return SynthesisTrace(OmegaSeq.explicit(letters), records)


def verify_sandwich(trace: SynthesisTrace, g: TargetGrowth, v0: SimplexPoint
                    ) -> tuple[float, float]:
    """(min, max) of g(eta(V0, prefix_k))/2^k over the syllable boundaries k."""
    ks = set()
    pos = 0
    for i, j in trace.syllables():
        pos += 3 * i
        ks.add(pos)
        if j:
            pos += j
            ks.add(pos)
    tr = _EtaTracker(v0)
    ratios = []
    for x in trace.prefix.data:
        tr.push(x)
        if tr.k in ks:
            ratios.append((g.log_g(tr.log_eta()) - tr.k * LOG2) / LOG2)
    return 2.0 ** min(ratios), 2.0 ** max(ratios)


# --- concave majorand -----------------------------------------------------


class ConcaveMajorand:
    """Upper concave envelope of sampled points, linear between hull vertices."""

    def __init__(self, samples: Sequence[tuple[float, float]]) -> None:
        pts = sorted((float(r), float(v)) for r, v in samples)
        if not pts:
            raise ValueError("no samples")
        hull: list[tuple[float, float]] = []
        for p in pts:
            if hull and hull[-1][0] == p[0]:
                if p[1] <= hull[-1][1]:
                    continue
                hull.pop()
            # drop vertices lying on or below the chord to the new point
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
                hull.pop()
            hull.append(p)
        self.vertices = hull
        self._xs = [x for x, _ in hull]

    def __call__(self, r: float) -> float:
        xs, vs = self._xs, self.vertices
        if r <= xs[0]:
            return vs[0][1]
        if r >= xs[-1]:
            return vs[-1][1]
        i = bisect.bisect_right(xs, r) - 1
        (x0, y0), (x1, y1) = vs[i], vs[i + 1]
        return y0 + (y1 - y0) * (r - x0) / (x1 - x0)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def concave_majorand(samples: Sequence[tuple[float, float]]) -> ConcaveMajorand:
    return ConcaveMajorand(samples)


# --- growth report --------------------------------------------------------

SKIPPED = "skipped: budget"


def _fit(v: int | str, r: Fraction) -> float | None:
    if not isinstance(v, int) or v <= 1 or r <= 1:
        return None
    lv = math.log(v)
    if lv <= 1:
        return None
    return math.log(lv) / math.log(r)


def _report_row(omega: OmegaSeq, v0: SimplexPoint, k: int, budget: int,
                w_budget: int, with_w: bool) -> dict:
    from .grigorchuk import ball, zeta_tower
    from .orbit import inverted_orbit

    prefix = omega.prefix(k + 1)
    vk = orbit(v0, prefix[:k])[-1]
    r_k = eta_word(v0, prefix[:k]) * mu(vk)
    try:
        v_g: int | str = ball(omega, 0, v0, r_k, budget).count
    except BudgetExceeded:
        v_g = SKIPPED
    v_w: int | str = SKIPPED
    if with_w:
        from .wreath import AbelianSpec, ball_W
        try:
            v_w = ball_W(omega, AbelianSpec(2), v0, r_k, w_budget).count
        except BudgetExceeded:
            v_w = SKIPPED
    word, _ = zeta_tower(omega, k, v0)
    return {"k": k, "R_k": r_k, "mu_k": mu(vk), "eta_k": eta(vk, int(prefix[k])),
            "v_G": v_g, "v_W": v_w, "delta_zeta": inverted_orbit(word, omega).size,
            "exp_G": _fit(v_g, r_k), "exp_W": _fit(v_w, r_k)}


def growth_report(omega: OmegaSeq, v0: SimplexPoint, kmax: int, budget: int = 10**6,
                  w_budget: int | None = None, with_w: bool = True,
                  threads: int = 1) -> list[dict]:
    """One row per k = 0..kmax; cells over budget read "skipped: budget"."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    w_budget = budget if w_budget is None else w_budget
    args = [(omega, v0, k, budget, w_budget, with_w) for k in range(kmax + 1)]
    if threads > 1 and isinstance(omega.data, (str, tuple)):
        with ProcessPoolExecutor(threads) as pool:
            return list(pool.map(_report_row, *zip(*args)))
    return [_report_row(*a) for a in args]


REPORT_COLUMNS = ("k", "R_k", "mu_k", "eta_k", "v_G", "v_W", "delta_zeta", "exp_G", "exp_W")
