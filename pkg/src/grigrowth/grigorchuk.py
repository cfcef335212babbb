"""Elements of G_omega and of its torsion-free cover.

Words are strings over ``abcd``.  A reduced word alternates between ``a``
and a single letter of {b, c, d}.  Elements carry the level i at which
they live, so that their sections are read with omega_i.

Wreath convention: <u1,u2>s * <v1,v2>t = <u1 v_s(1), u2 v_s(2)> st.  The
tree action is on the right, vertices are strings over ``12``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BudgetExceeded
from .sequences import OmegaSeq, letter_at, section_word
from .simplex import SimplexPoint, orbit, weights

_FOUR = {("b", "c"): "d", ("c", "b"): "d", ("b", "d"): "c",
         ("d", "b"): "c", ("c", "d"): "b", ("d", "c"): "b"}

MAX_NODES = 10**6


def reduce(raw: str) -> str:
    """Normal form under a^2 = x^2 = 1 and bc = d (four-group table)."""
    out: list[str] = []
    for ch in raw:
        if ch not in "abcd":
            if ch == "1":
                continue
            raise ValueError(f"not a generator: {ch!r}")
        if out:
            top = out[-1]
            if top == ch:
                out.pop()
                continue
            if top != "a" and ch != "a":
                out[-1] = _FOUR[top, ch]
                continue
        out.append(ch)
    return "".join(out)


def inverse_word(word: str) -> str:
    return word[::-1]


@lru_cache(maxsize=1 << 18)
def split_word(word: str, x: int) -> tuple[str, str, bool]:
    """Sections and top swap of a reduced word under the letter x."""
    first: list[str] = []
    second: list[str] = []
    swapped = False
    for ch in word:
        if ch == "a":
            swapped = not swapped
            continue
        sec = section_word(x, ch)
        if swapped:
            first.append(ch)
            second.append(sec)
        else:
            first.append(sec)
            second.append(ch)
    return reduce("".join(first)), reduce("".join(second)), swapped


@dataclass(frozen=True)
class GElement:
    word: str
    omega: OmegaSeq
    level: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", reduce(self.word))

    def __mul__(self, other: GElement) -> GElement:
        if (self.omega, self.level) != (other.omega, other.level):
            raise ValueError("elements live in different groups")
        return GElement(self.word + other.word, self.omega, self.level)

    def inverse(self) -> GElement:
        return GElement(inverse_word(self.word), self.omega, self.level)

    def same_as(self, other: GElement) -> bool:
        """Group equality, decided by the word problem."""
        return is_trivial(self * other.inverse())


def wreath_split(g: GElement) -> tuple[GElement, GElement, bool]:
    w1, w2, swapped = split_word(g.word, letter_at(g.omega, g.level))
    return (GElement(w1, g.omega, g.level + 1), GElement(w2, g.omega, g.level + 1), swapped)


def _phase(omega: OmegaSeq, level: int) -> int:
    period = omega.period()
    return level % period if period else level


def word_problem(word: str, omega: OmegaSeq, level: int = 0) -> tuple[bool, int]:
    """(is trivial, recursion depth reached).

    Walks the tree of sections.  The word is nontrivial exactly when some
    section has odd a-count.  For periodic omega a section recurring at the
    same phase adds nothing new, so the walk also stops on repeats.
    """
    return _word_problem(reduce(word), omega, level)


@lru_cache(maxsize=1 << 16)
def _word_problem(word: str, omega: OmegaSeq, level: int) -> tuple[bool, int]:
    seen = set()
    stack = [(word, level, 0)]
    depth = 0
    while stack:
        w, lv, d = stack.pop()
        if not w:
            continue
        key = (w, _phase(omega, lv))
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > MAX_NODES:
            raise RuntimeError("word problem recursion guard exceeded")
        depth = max(depth, d)
        if w.count("a") % 2:
            return False, depth
        w1, w2, _ = split_word(w, letter_at(omega, lv))
        stack.append((w2, lv + 1, d + 1))
        stack.append((w1, lv + 1, d + 1))
    return True, depth


def is_trivial(g: GElement) -> bool:
    return _word_problem(g.word, g.omega, g.level)[0]


# --- torsion-free cover ---------------------------------------------------

_TILDE_INDEX = {"b": 0, "c": 1, "d": 2}


def _tilde_syllables(word: str) -> list[tuple[str, object]]:
    """Free cancellation with <b, c, d> treated as abelian.

    Returns alternating syllables ("a", n) and ("x", (nb, nc, nd)).
    """
    out: list[list] = []
    for ch in word:
        low = ch.lower()
        if low not in "abcd":
            raise ValueError(f"not a generator: {ch!r}")
        sign = 1 if ch == low else -1
        if low == "a":
            if out and out[-1][0] == "a":
                out[-1][1] += sign
            else:
                out.append(["a", sign])
            if out[-1][1] == 0:
                out.pop()
        else:
            vec = [0, 0, 0]
            vec[_TILDE_INDEX[low]] = sign
            if out and out[-1][0] == "x":
                out[-1][1] = [u + v for u, v in zip(out[-1][1], vec)]
            else:
                out.append(["x", vec])
            if out[-1][1] == [0, 0, 0]:
                out.pop()
    return [(kind, value if kind == "a" else tuple(value)) for kind, value in out]


def _power(letter: str, n: int) -> str:
    return (letter if n > 0 else letter.upper()) * abs(n)


def tilde_split(word: str, x: int) -> tuple[str, str]:
    """Coordinate words at residues 0 and 1 of the cover's recursion.

    Assumes a-exponent sum zero.  A generator sitting at cumulative shift s
    contributes itself to residue r when r + s is odd, else its image under x.
    """
    coords = ["", ""]
    shift = 0
    for kind, value in _tilde_syllables(word):
        if kind == "a":
            shift += value
            continue
        for r in (0, 1):
            if (r + shift) % 2:
                coords[r] += "".join(_power(g, n) for g, n in zip("bcd", value))
            else:
                n_a = sum(n for g, n in zip("bcd", value) if section_word(x, g))
                coords[r] += _power("a", n_a)
    return coords[0], coords[1]


def tilde_word_problem(word: str, omega: OmegaSeq, level: int = 0) -> tuple[bool, int]:
    calls = 0
    depth = 0
    stack = [(word, level, 0)]
    while stack:
        w, lv, d = stack.pop()
        calls += 1
        if calls > MAX_NODES:
            raise RuntimeError("tilde word problem recursion guard exceeded")
        depth = max(depth, d)
        syl = _tilde_syllables(w)
        if not syl:
            continue
        if sum(v for k, v in syl if k == "a") != 0 or all(k == "x" for k, _ in syl):
            return False, depth
        w0, w1 = tilde_split(w, letter_at(omega, lv))
        stack.append((w1, lv + 1, d + 1))
        stack.append((w0, lv + 1, d + 1))
    return True, depth


def is_trivial_tilde(word: str, omega: OmegaSeq, level: int = 0) -> bool:
    return tilde_word_problem(word, omega, level)[0]


# --- tree action ----------------------------------------------------------

def _flip(ch: str) -> str:
    return "2" if ch == "1" else "1"


def act_letter(v: str, g: str, omega: OmegaSeq, level: int) -> str:
    """Image of the vertex v under one generator of G_level."""
    if not v:
        return v
    if g == "a":
        return _flip(v[0]) + v[1:]
    j = v.find("1")
    if j < 0 or j + 1 >= len(v):
        return v
    if section_word(letter_at(omega, level + j), g):
        return v[: j + 1] + _flip(v[j + 1]) + v[j + 2 :]
    return v


def apply_to_vertex(g: GElement, v: str) -> str:
    for ch in g.word:
        v = act_letter(v, ch, g.omega, g.level)
    return v


@lru_cache(maxsize=1 << 18)
def portrait(word: str, omega: OmegaSeq, level: int, depth: int) -> object:
    """Canonical key of the permutation a word induces on {1,2}^depth.

    None is the identity; otherwise (swap, key of first, key of second).
    """
    if depth == 0 or not word:
        return None
    w1, w2, swapped = split_word(word, letter_at(omega, level))
    k1 = portrait(w1, omega, level + 1, depth - 1)
    k2 = portrait(w2, omega, level + 1, depth - 1)
    if not swapped and k1 is None and k2 is None:
        return None
    return (swapped, k1, k2)


# --- weighted norms and balls ---------------------------------------------

@dataclass
class BallTable:
    radius: Fraction
    entries: list[tuple[Fraction, str]]

    @property
    def count(self) -> int:
        return len(self.entries)

    def to_csv_rows(self) -> list[tuple[str, str]]:
        return [(str(n), w) for n, w in sorted(self.entries)]


class ElementIndex:
    """Set of group elements keyed by portrait, exact by the word problem."""

    def __init__(self, omega: OmegaSeq, level: int, depth: int = 8) -> None:
        self.omega = omega
        self.level = level
        self.depth = depth
        self._buckets: dict[object, list[str]] = {}
        self._words: set[str] = set()

    def _key(self, word: str) -> object:
        return portrait(word, self.omega, self.level, self.depth)

    def find(self, word: str) -> str | None:
        if word in self._words:
            return word
        for other in self._buckets.get(self._key(word), ()):
            if _word_problem(reduce(word + inverse_word(other)), self.omega, self.level)[0]:
                return other
        return None

    def add(self, word: str) -> None:
        bucket = self._buckets.setdefault(self._key(word), [])
        bucket.append(word)
        self._words.add(word)
        if len(bucket) > 1:
            # distinct elements share a key: look deeper and rebucket
            self.depth += 2
            words = [w for b in self._buckets.values() for w in b]
            self._buckets = {}
            for w in words:
                self._buckets.setdefault(self._key(w), []).append(w)

    def __len__(self) -> int:
        return len(self._words)


class NormSearch:
    """Lazy Dijkstra over the weighted Cayley graph of G_level.

    Elements are settled in order of exact geodesic norm; each keeps the
    first (lexicographically least among geodesic) word that reached it.
    """

    def __init__(self, omega: OmegaSeq, level: int, point: SimplexPoint,
                 budget: int = 10**6) -> None:
        self.omega = omega
        self.level = level
        self.weights = weights(point).as_dict()
        # integer norms in units of 1/scale keep the heap fast
        self.scale = math.lcm(*(w.denominator for w in self.weights.values()))
        self._steps = [(g, int(self.weights[g] * self.scale)) for g in "abcd"]
        self.budget = budget
        self.index = ElementIndex(omega, level)
        self.settled: list[tuple[Fraction, str]] = []
        self._norm_of: dict[str, Fraction] = {}
        self._heap: list[tuple[int, str]] = [(0, "")]
        self._best: dict[str, int] = {"": 0}

    def _pop(self) -> bool:
        while self._heap:
            n, w = heapq.heappop(self._heap)
            if self.index.find(w) is not None:
                continue
            self.index.add(w)
            norm = Fraction(n, self.scale)
            self.settled.append((norm, w))
            self._norm_of[w] = norm
            if len(self.settled) > self.budget:
                raise BudgetExceeded("ball elements", self.budget)
            for g, step in self._steps:
                nw = reduce(w + g)
                nn = n + step
                if nn < self._best.get(nw, nn + 1):
                    self._best[nw] = nn
                    heapq.heappush(self._heap, (nn, nw))
            return True
        return False

    def expand(self, radius: Fraction) -> None:
        limit = Fraction(radius) * self.scale
        while self._heap and self._heap[0][0] <= limit:
            self._pop()

    def ball(self, radius: Fraction) -> BallTable:
        radius = Fraction(radius)
        self.expand(radius)
        return BallTable(radius, [(n, w) for n, w in self.settled if n <= radius])

    def norm(self, word: str) -> Fraction:
        word = reduce(word)
        while True:
            rep = self.index.find(word)
            if rep is not None:
                return self._norm_of[rep]
            if not self._pop():
                raise RuntimeError("search exhausted without reaching the element")

    def representative(self, word: str) -> str:
        self.norm(word)
        return self.index.find(reduce(word))


_SEARCHES: dict[tuple, NormSearch] = {}


def norm_search(omega: OmegaSeq, level: int, point: SimplexPoint,
                budget: int = 10**6) -> NormSearch:
    """Shared search per (omega, level, point); budgets only grow."""
    key = (omega, level, point)
    search = _SEARCHES.get(key)
    if search is None:
        search = _SEARCHES[key] = NormSearch(omega, level, point, budget)
    search.budget = max(search.budget, budget)
    return search


def element_norm(g: GElement, point: SimplexPoint, budget: int = 10**6) -> Fraction:
    return norm_search(g.omega, g.level, point, budget).norm(g.word)


def ball(omega: OmegaSeq, level: int, point: SimplexPoint, radius: Fraction,
         budget: int = 10**6) -> BallTable:
    search = NormSearch(omega, level, point, budget)
    return search.ball(Fraction(radius))


# --- substitutions --------------------------------------------------------

ZETA = {
    0: {"ab": "adabac", "ac": "acac", "ad": "adad"},
    1: {"ab": "abab", "ac": "abacad", "ad": "adad"},
    2: {"ab": "abab", "ac": "acac", "ad": "acadab"},
}


def _blocks(word: str) -> list[str]:
    if len(word) % 2:
        raise ValueError(f"not a word over ab, ac, ad: {word!r}")
    blocks = [word[i : i + 2] for i in range(0, len(word), 2)]
    if any(b not in ("ab", "ac", "ad") for b in blocks):
        raise ValueError(f"not a word over ab, ac, ad: {word!r}")
    return blocks


def substitute_zeta(word: str, x: int) -> str:
    table = ZETA[x]
    return "".join(table[b] for b in _blocks(word))


def block_counts(word: str) -> tuple[int, int, int]:
    blocks = _blocks(word)
    return (blocks.count("ab"), blocks.count("ac"), blocks.count("ad"))


def zeta_tower(omega: OmegaSeq, k: int, start: SimplexPoint) -> tuple[str, Fraction]:
    """The word zeta_{w0} ... zeta_{w(k-1)}(a s) and its word norm at ``start``.

    s is the lightest of b, c, d at the k-th orbit point (ties go b, c, d).
    """
    prefix = omega.prefix(k)
    vk = orbit(start, prefix)[-1]
    s = "bcd"[min(range(3), key=lambda i: (vk[i], i))]
    word = "a" + s
    for ch in reversed(prefix):
        word = substitute_zeta(word, int(ch))
    return word, weights(start).word_norm(word)
