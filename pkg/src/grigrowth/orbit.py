"""The orbit of rho = 222... and inverted orbits.

A boundary point is stored as its prefix before the tail of 2s, so rho
is the empty string and every nonempty point ends in "1".
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded
from .grigorchuk import GElement
from .sequences import OmegaSeq, letter_at, section_word
from .simplex import SimplexPoint, weights

RHO = ""


def normalize_point(prefix: str) -> str:
    if prefix.strip("12"):
        raise ValueError(f"boundary point must be over 1, 2: {prefix!r}")
    return prefix.rstrip("2")


def _flip(ch: str) -> str:
    return "2" if ch == "1" else "1"


def _act(p: str, g: str, omega: OmegaSeq, level: int) -> tuple[str, int]:
    """One generator on prefix.2^inf: (new point, last index read)."""
    if g == "a":
        head = p[0] if p else "2"
        return (_flip(head) + p[1:]).rstrip("2"), 0
    j = p.find("1")
    if j < 0:
        # all 2s: b, c, d fix the point
        return p, len(p)
    if not section_word(letter_at(omega, level + j), g):
        return p, j
    nxt = p[j + 1] if j + 1 < len(p) else "2"
    return (p[: j + 1] + _flip(nxt) + p[j + 2 :]).rstrip("2"), j + 1


def act_point(p: str, g: GElement | str, omega: OmegaSeq | None = None, level: int = 0) -> str:
    return act_point_traced(p, g, omega, level)[0]


def act_point_traced(p: str, g: GElement | str, omega: OmegaSeq | None = None,
                     level: int = 0) -> tuple[str, int]:
    """Image of p and the largest letter index the computation looked at."""
    if isinstance(g, GElement):
        word, omega, level = g.word, g.omega, g.level
    else:
        word = g
    touched = 0
    for ch in word:
        p, idx = _act(p, ch, omega, level)
        touched = max(touched, idx)
    return p, touched


@dataclass(frozen=True)
class InvertedOrbit:
    points: frozenset[str]

    @property
    def size(self) -> int:
        return len(self.points)

    def sorted_points(self) -> list[str]:
        return sorted(self.points, key=lambda s: (len(s), s))


def _step(points: frozenset[str], g: str, omega: OmegaSeq, level: int) -> frozenset[str]:
    if g in "bcd":
        # points without a "1" are fixed; skip the work for them
        moved = {(_act(p, g, omega, level)[0] if p else p) for p in points}
    else:
        moved = {_act(p, g, omega, level)[0] for p in points}
    moved.add(RHO)
    return frozenset(moved)


def inverted_orbit(word: str, omega: OmegaSeq, level: int = 0) -> InvertedOrbit:
    """{rho g_i ... g_n} together with rho, for word = g_1 ... g_n.

    Uses O(w g) = O(w) g + {rho}: one pass over the letters.
    """
    points = frozenset([RHO])
    for ch in word:
        points = _step(points, ch, omega, level)
    return InvertedOrbit(points)


def _moves(last: str) -> str:
    # alternating words: b, c, d never follow each other, nor a after a
    return {"a": "bcd", "x": "a"}.get(last, "abcd")


def _orbit_search(omega: OmegaSeq, point: SimplexPoint, radius: Fraction, budget: int,
                  level: int = 0, floor=None):
    """Dijkstra over (orbit set, kind of last letter) for alternating words.

    Yields (norm, orbit set, word) once per reachable state, at its least
    norm; ties go to the lexicographically least word.  The state fixes all
    continuations, so a heavier word reaching a known state is dropped.
    With ``floor`` set (an int, or a callable read at every expansion),
    states that cannot grow past it are pruned: only a letter a can add a
    point, and it costs wa.
    """
    w = weights(point).as_dict()
    wa = w["a"]
    radius = Fraction(radius)
    bound = floor if callable(floor) or floor is None else (lambda: floor)
    start = (frozenset([RHO]), "")
    best = {start: (Fraction(0), "")}
    heap = [(Fraction(0), "", start)]
    settled = set()
    while heap:
        n, word, state = heapq.heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        if len(settled) > budget:
            raise BudgetExceeded("orbit search nodes", budget)
        points, last = state
        yield n, points, word
        top = bound() if bound is not None else None
        if top is not None and len(points) + int((radius - n) // wa) <= top:
            continue
        for g in _moves(last):
            nn = n + w[g]
            if nn > radius:
                continue
            nxt_points = _step(points, g, omega, level)
            if top is not None and len(nxt_points) + (radius - nn) // wa <= top:
                continue
            nxt = (nxt_points, "a" if g == "a" else "x")
            cand = (nn, word + g)
            if nxt not in best or cand < best[nxt]:
                best[nxt] = cand
                heapq.heappush(heap, (nn, word + g, nxt))


def _beam_word(omega: OmegaSeq, point: SimplexPoint, radius: Fraction,
               level: int = 0, width: int = 64) -> tuple[int, str]:
    """Cheap lower bound: a beam of the largest orbits seen per number of letters."""
    w = weights(point).as_dict()
    radius = Fraction(radius)
    beam = [(frozenset([RHO]), "", Fraction(0), "")]
    top = (1, "")
    while beam:
        layer = {}
        for points, last, n, word in beam:
            for g in _moves(last):
                nn = n + w[g]
                if nn > radius:
                    continue
                nxt = _step(points, g, omega, level)
                kind = "a" if g == "a" else "x"
                key = (nxt, kind)
                if key not in layer or nn < layer[key][2]:
                    layer[key] = (nxt, kind, nn, word + g)
        beam = sorted(layer.values(), key=lambda s: (-len(s[0]), s[2], s[3]))[:width]
        for points, _, _, word in beam:
            if len(points) > top[0]:
                top = (len(points), word)
    return top


def delta_realizer(omega: OmegaSeq, point: SimplexPoint, radius: Fraction,
                   budget: int = 10**7, level: int = 0) -> tuple[int, str]:
    """(Delta(radius), a word of norm <= radius attaining it).

    Exhaustive branch and bound: a beam search seeds the best size, and
    states that cannot beat the current best are never expanded.
    """
    radius = Fraction(radius)
    top = [_beam_word(omega, point, radius, level)]
    for _, points, word in _orbit_search(omega, point, radius, budget, level,
                                         floor=lambda: top[0][0]):
        if len(points) > top[0][0]:
            top[0] = (len(points), word)
    return top[0]


def delta_growth(omega: OmegaSeq, point: SimplexPoint, radius: Fraction,
                 budget: int = 10**7, level: int = 0) -> int:
    """Largest inverted orbit over alternating words of norm <= radius."""
    return delta_realizer(omega, point, radius, budget, level)[0]


def sigma_growth(omega: OmegaSeq, point: SimplexPoint, radius: Fraction,
                 budget: int = 10**7, level: int = 0) -> int:
    """Number of distinct inverted orbits of alternating words of norm <= radius."""
    return len({points for _, points, _ in _orbit_search(omega, point, radius, budget, level)})


def schreier_ball(omega: OmegaSeq, radius: int, level: int = 0
                  ) -> tuple[list[str], list[tuple[str, str, str]]]:
    """Vertices (BFS order) and labelled edges of the Schreier graph around rho.

    Every vertex closer than ``radius`` lists one edge per generator.
    """
    dist = {RHO: 0}
    order = [RHO]
    edges = []
    queue = deque([RHO])
    while queue:
        p = queue.popleft()
        if dist[p] >= radius:
            continue
        for g in "abcd":
            q = _act(p, g, omega, level)[0]
            edges.append((p, g, q))
            if q not in dist:
                dist[q] = dist[p] + 1
                order.append(q)
                queue.append(q)
    return order, edges
