"""The permutational wreath products W = A wr_X G with A = Z/m.

An element is a pair (f, g): f a finitely supported map from boundary
points (prefix strings, see :mod:`grigrowth.orbit`) to Z/m, g in G.
Multiplication is (f, g)(f', g') = (p -> f(p) + f'(p.g), gg').
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .errors import BudgetExceeded
from .grigorchuk import GElement, _word_problem, inverse_word, portrait, reduce, wreath_split
from .orbit import RHO, act_point, delta_realizer
from .sequences import OmegaSeq
from .simplex import SimplexPoint, weights


@dataclass(frozen=True)
class AbelianSpec:
    """The lamp group Z/m."""

    m: int = 2

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError("modulus must be >= 2")

    def residues(self) -> range:
        return range(1, self.m)


@dataclass(frozen=True)
class WreathElement:
    """(f, g) with f stored as sorted (point, nonzero residue) pairs."""

    support: tuple[tuple[str, int], ...]
    g: GElement
    m: int = 2

    @classmethod
    def make(cls, f: Mapping[str, int], g: GElement, m: int = 2) -> WreathElement:
        items = tuple(sorted((p, r % m) for p, r in f.items() if r % m))
        return cls(items, g, m)

    @classmethod
    def identity(cls, omega: OmegaSeq, level: int = 0, m: int = 2) -> WreathElement:
        return cls((), GElement("", omega, level), m)

    @property
    def omega(self) -> OmegaSeq:
        return self.g.omega

    @property
    def level(self) -> int:
        return self.g.level

    def lamps(self) -> dict[str, int]:
        return dict(self.support)

    def __mul__(self, other: WreathElement) -> WreathElement:
        return w_multiply(self, other)

    def inverse(self) -> WreathElement:
        return w_inverse(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WreathElement):
            return NotImplemented
        return (self.m == other.m and self.support == other.support
                and self.g.same_as(other.g))

    def __hash__(self) -> int:
        return hash((self.support, self.m, portrait(self.g.word, self.omega, self.level, 6)))

    def to_json(self) -> dict:
        return {"support": [[p, r] for p, r in self.support], "word": self.g.word}

    @classmethod
    def from_json(cls, data: Mapping | str, omega: OmegaSeq, level: int = 0,
                  m: int = 2) -> WreathElement:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.make({p: r for p, r in data["support"]}, GElement(data["word"], omega, level), m)


def _check(x: WreathElement, y: WreathElement) -> None:
    if (x.omega, x.level, x.m) != (y.omega, y.level, y.m):
        raise ValueError("elements live in different wreath products")


def _image(p: str, word: str, g: GElement) -> str:
    return act_point(p, word, g.omega, g.level)


def w_multiply(x: WreathElement, y: WreathElement) -> WreathElement:
    _check(x, y)
    f = x.lamps()
    # f'(p.g) != 0 exactly at p = q.g^-1 for q in the support of f'
    g_inv = inverse_word(x.g.word)
    for q, r in y.support:
        p = _image(q, g_inv, x.g)
        f[p] = f.get(p, 0) + r
    return WreathElement.make(f, x.g * y.g, x.m)


def w_inverse(x: WreathElement) -> WreathElement:
    """(f, g)^-1 = (p -> -f(p.g^-1), g^-1)."""
    f = {_image(q, x.g.word, x.g): -r for q, r in x.support}
    return WreathElement.make(f, x.g.inverse(), x.m)


def lamp(r: int, omega: OmegaSeq, level: int = 0, m: int = 2, at: str = RHO) -> WreathElement:
    return WreathElement.make({at: r}, GElement("", omega, level), m)


def group_element(word: str, omega: OmegaSeq, level: int = 0, m: int = 2) -> WreathElement:
    return WreathElement((), GElement(word, omega, level), m)


@dataclass(frozen=True)
class Generator:
    name: str
    element: WreathElement
    weight: Fraction
    letter: str     # the G part as a word ("" for a pure lamp)
    residue: int    # lamp value put at rho.g^-1 after the letter (0 for none)


def w_generators(omega: OmegaSeq, spec: AbelianSpec, point: SimplexPoint,
                 mixed: bool = False, level: int = 0) -> list[Generator]:
    """S u T by default: a, b, c, d, then t_r for each nonzero r, each t_r of weight wa.

    With ``mixed`` the set is {1, a, b, c, d} x A minus the identity: s.t_r
    weighs as s, and a bare t_r as a.
    """
    w = weights(point).as_dict()
    gens = []
    for s in "abcd":
        gens.append(Generator(s, group_element(s, omega, level, spec.m), w[s], s, 0))
    for r in spec.residues():
        t = lamp(r, omega, level, spec.m)
        gens.append(Generator(f"t{r}", t, w["a"], "", r))
    if mixed:
        for s in "abcd":
            for r in spec.residues():
                el = group_element(s, omega, level, spec.m) * lamp(r, omega, level, spec.m)
                gens.append(Generator(f"{s}t{r}", el, w[s], s, r))
    return gens


def _right_step(support: tuple[tuple[str, int], ...], word: str, gen: Generator, omega: OmegaSeq,
                level: int, m: int) -> tuple[tuple[tuple[str, int], ...], str]:
    """(f, w) . gen as (canonical support, reduced word)."""
    new_word = reduce(word + gen.letter)
    if not gen.residue:
        return support, new_word
    # t_r adds r at rho.(w s)^-1
    f = dict(support)
    p = _lamp_point(new_word, omega, level)
    f[p] = (f.get(p, 0) + gen.residue) % m
    if not f[p]:
        del f[p]
    return tuple(sorted(f.items())), new_word


@lru_cache(maxsize=1 << 18)
def _lamp_point(word: str, omega: OmegaSeq, level: int) -> str:
    return act_point(RHO, inverse_word(word), omega, level)


class _WIndex:
    """Exact set of wreath elements: supports compared directly, G parts by portrait then word problem."""

    def __init__(self, omega: OmegaSeq, level: int, depth: int = 8) -> None:
        self.omega, self.level, self.depth = omega, level, depth
        self._buckets: dict[tuple, list[str]] = {}
        self._count = 0

    def find(self, support: tuple, word: str) -> str | None:
        key = (support, portrait(word, self.omega, self.level, self.depth))
        for other in self._buckets.get(key, ()):
            if other == word or _word_problem(reduce(word + inverse_word(other)),
                                              self.omega, self.level)[0]:
                return other
        return None

    def add(self, support: tuple, word: str) -> None:
        key = (support, portrait(word, self.omega, self.level, self.depth))
        self._buckets.setdefault(key, []).append(word)
        self._count += 1

    def __len__(self) -> int:
        return self._count


@dataclass
class WBallTable:
    radius: Fraction
    entries: list[tuple[Fraction, WreathElement]]

    @property
    def count(self) -> int:
        return len(self.entries)

    def to_csv_rows(self) -> list[tuple[str, str, str]]:
        return [(str(n), json.dumps(x.to_json()["support"]), x.g.word) for n, x in self.entries]


class WNormSearch:
    """Dijkstra over the weighted Cayley graph of W, settling elements by exact norm."""

    def __init__(self, omega: OmegaSeq, spec: AbelianSpec, point: SimplexPoint,
                 budget: int = 10**6, mixed: bool = False, level: int = 0) -> None:
        self.omega, self.spec, self.level = omega, spec, level
        self.gens = w_generators(omega, spec, point, mixed, level)
        # integer norms in units of 1/scale keep the heap fast
        self.scale = math.lcm(*(gen.weight.denominator for gen in self.gens))
        self._steps = [(int(gen.weight * self.scale), gen) for gen in self.gens]
        self.budget = budget
        self.index = _WIndex(omega, level)
        self.settled: list[tuple[Fraction, tuple, str]] = []
        self._norm: dict[tuple, Fraction] = {}
        self._heap: list[tuple[int, tuple, str]] = [(0, (), "")]

    def _pop(self) -> bool:
        while self._heap:
            n, support, word = heapq.heappop(self._heap)
            if self.index.find(support, word) is not None:
                continue
            self.index.add(support, word)
            self.settled.append((Fraction(n, self.scale), support, word))
            self._norm[(support, word)] = Fraction(n, self.scale)
            if len(self.settled) > self.budget:
                raise BudgetExceeded("wreath ball elements", self.budget)
            for step, gen in self._steps:
                s2, w2 = _right_step(support, word, gen, self.omega, self.level, self.spec.m)
                heapq.heappush(self._heap, (n + step, s2, w2))
            return True
        return False

    def expand(self, radius: Fraction) -> None:
        limit = Fraction(radius) * self.scale
        while self._heap and self._heap[0][0] <= limit:
            self._pop()

    def ball(self, radius: Fraction) -> WBallTable:
        radius = Fraction(radius)
        self.expand(radius)
        return WBallTable(radius, [
            (n, WreathElement(s, GElement(w, self.omega, self.level), self.spec.m))
            for n, s, w in self.settled if n <= radius])

    def norm(self, x: WreathElement) -> Fraction:
        while True:
            rep = self.index.find(x.support, x.g.word)
            if rep is not None:
                return self._norm[(x.support, rep)]
            if not self._pop():
                raise RuntimeError("search exhausted without reaching the element")


def ball_W(omega: OmegaSeq, spec: AbelianSpec, point: SimplexPoint, radius: Fraction,
           budget: int = 10**6, mixed: bool = False, level: int = 0) -> WBallTable:
    """All elements of W of norm <= radius, in order of norm."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return WNormSearch(omega, spec, point, budget, mixed, level).ball(Fraction(radius))


def witness_set(omega: OmegaSeq, spec: AbelianSpec, point: SimplexPoint, radius: Fraction,
                budget: int = 10**7) -> list[WreathElement]:
    """Elements w.f over lamp configurations on the inverted orbit of a Delta realizer.

    Lamp values are those of norm <= R/k (k = Delta(R)), so each element has
    norm at most R + k.(R/k) = 2R.
    """
    radius = Fraction(radius)
    k, word = delta_realizer(omega, point, radius, budget)
    wa = weights(point).wa
    values = [0] + ([r for r in spec.residues()] if wa <= radius / k else [])
    # walk the reversed word: after its i-th prefix, a lamp lands on
    # rho.(g_n ... g_{n-i+1})^-1 = rho.g_{n-i+1} ... g_n, a point of the inverted orbit
    rev = word[::-1]
    slots: dict[str, int] = {}
    for i in range(len(rev) + 1):
        p = act_point(RHO, inverse_word(reduce(rev[:i])), omega, 0)
        slots.setdefault(p, i)
    positions = sorted(slots, key=slots.get)
    out = []
    base = GElement(rev, omega)
    for combo in _configurations(len(positions), values):
        f = {p: r for p, r in zip(positions, combo) if r}
        out.append(WreathElement.make(f, base, spec.m))
    return out


def _configurations(n: int, values: list[int]):
    if n == 0:
        yield ()
        return
    for head in values:
        for tail in _configurations(n - 1, values):
            yield (head,) + tail


def witness_word(x: WreathElement, spec: AbelianSpec) -> str:
    """A word over the S u T names spelling x when its G part is read off right to left."""
    lamps = x.lamps()
    word = x.g.word
    parts = []
    for i in range(len(word) + 1):
        p = act_point(RHO, inverse_word(reduce(word[:i])), x.omega, x.level)
        r = lamps.pop(p, 0)
        if r:
            parts.append(f"t{r}")
        if i < len(word):
            parts.append(word[i])
    if lamps:
        raise ValueError("support is not on the lamp path of the word")
    return " ".join(parts)


def psi_split(x: WreathElement) -> tuple[WreathElement, WreathElement, bool]:
    """Lamps split by first letter (u_k(p) = u(kp)); g split by the wreath recursion."""
    g1, g2, swapped = wreath_split(x.g)
    parts: tuple[dict[str, int], dict[str, int]] = ({}, {})
    for p, r in x.support:
        head = p[0] if p else "2"
        parts[0 if head == "1" else 1][p[1:]] = r
    return (WreathElement.make(parts[0], g1, x.m), WreathElement.make(parts[1], g2, x.m), swapped)
