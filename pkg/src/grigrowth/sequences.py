"""Defining sequences over the letters 0, 1, 2.

A letter is one of the three nontrivial homomorphisms from the four-group
{1, b, c, d} onto {1, a}; letter x kills exactly one of b, c, d.  Letters
are plain ints and finite words over them are digit strings such as "012".

An :class:`OmegaSeq` is immutable and hashable, so it can key caches in
the group modules.  Four variants are supported: explicit (finite),
periodic, syllable form (0 1 2)^i 2^j ... and programmatic presets.
"""

from __future__ import annotations

import bisect
import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

LETTERS = (0, 1, 2)

# the generator each letter vanishes on
_KILLS = {0: "b", 1: "c", 2: "d"}


def vanish(x: int, g: str) -> str:
    """Image of g in {b, c, d} under letter x: "1" or "a"."""
    if g not in "bcd" or len(g) != 1:
        raise ValueError(f"vanish is defined on b, c, d only, got {g!r}")
    return "1" if _KILLS[x] == g else "a"


def section_word(x: int, g: str) -> str:
    """Same as :func:`vanish` but as a word: "" or "a"."""
    return "" if _KILLS[x] == g else "a"


class OmegaParseError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _ackermann_diagonal() -> Iterator[float]:
    from .synthesis import ackermann

    for m in itertools.count():
        if m >= 4:
            # A(4, 4) has far more than 2**64 digits: no index can reach past it
            yield math.inf
            return
        yield ackermann(m, m)


def _preset_exponents(name: str) -> Iterator[float]:
    if name == "sqrt":
        return itertools.count(1)
    if name == "geom":
        return (2**t for t in itertools.count())
    if name == "doublegeom":
        return (2 ** (2**t) for t in itertools.count())
    if name == "ackermann":
        return _ackermann_diagonal()
    raise KeyError(name)


PRESETS = ("sqrt", "geom", "doublegeom", "ackermann")


class _LazyLetters:
    """Memoized letters of a programmatic sequence, guarded by a lock."""

    def __init__(self, source: Callable[[int], int] | str) -> None:
        self._lock = threading.Lock()
        self._letters: list[int] = []
        self._fn = source if callable(source) else None
        # preset: syllables (012) 2^j, stored as syllable start offsets
        self._jumps = None if callable(source) else _preset_exponents(source)
        self._starts: list[int] = [0]
        self._exhausted = False

    def get(self, i: int) -> int:
        if self._fn is not None:
            with self._lock:
                while len(self._letters) <= i:
                    x = self._fn(len(self._letters))
                    if x not in LETTERS:
                        raise ValueError(f"programmatic sequence produced {x!r}")
                    self._letters.append(x)
                return self._letters[i]
        with self._lock:
            while not self._exhausted and self._starts[-1] <= i:
                j = next(self._jumps)
                if j == math.inf:
                    self._exhausted = True
                else:
                    self._starts.append(self._starts[-1] + 3 + int(j))
        t = bisect.bisect_right(self._starts, i) - 1
        r = i - self._starts[t]
        return r if r < 3 else 2


_LAZY: dict[object, _LazyLetters] = {}
_LAZY_LOCK = threading.Lock()


def _lazy(source: Callable[[int], int] | str) -> _LazyLetters:
    with _LAZY_LOCK:
        if source not in _LAZY:
            _LAZY[source] = _LazyLetters(source)
        return _LAZY[source]


_STARTS: dict[tuple, list[int]] = {}


def _syllable_starts(pairs: tuple[tuple[int, int], ...]) -> list[int]:
    starts = _STARTS.get(pairs)
    if starts is None:
        starts = [0]
        for i, j in pairs:
            starts.append(starts[-1] + 3 * i)
            starts.append(starts[-1] + j)
        _STARTS[pairs] = starts
    return starts


@dataclass(frozen=True)
class OmegaSeq:
    """A sequence omega_0 omega_1 ... over {0, 1, 2}.

    ``data`` is a tuple of letters (explicit), a nonempty tuple of letters
    (periodic), a tuple of (i, j) pairs (syllable, repeated cyclically),
    or a preset name / index function (programmatic).  ``offset`` counts
    applied shifts.
    """

    kind: str
    data: object
    offset: int = 0

    def __post_init__(self) -> None:
        if self.kind == "explicit":
            _check_letters(self.data)
        elif self.kind == "periodic":
            _check_letters(self.data)
            if not self.data:
                raise ValueError("periodic word must be nonempty")
        elif self.kind == "syllable":
            if not self.data or any(i < 1 or j < 1 for i, j in self.data):
                raise ValueError("syllable exponents must all be >= 1")
        elif self.kind == "programmatic":
            if isinstance(self.data, str) and self.data not in PRESETS:
                raise ValueError(f"unknown preset {self.data!r}")
        else:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.offset < 0:
            raise ValueError("offset must be >= 0")

    @classmethod
    def explicit(cls, letters: Sequence[int] | str) -> OmegaSeq:
        return cls("explicit", tuple(int(x) for x in letters))

    @classmethod
    def periodic(cls, word: Sequence[int] | str) -> OmegaSeq:
        return cls("periodic", tuple(int(x) for x in word))

    @classmethod
    def syllable(cls, pairs: Sequence[tuple[int, int]]) -> OmegaSeq:
        return cls("syllable", tuple((int(i), int(j)) for i, j in pairs))

    @classmethod
    def programmatic(cls, source: Callable[[int], int] | str) -> OmegaSeq:
        return cls("programmatic", source)

    def __getitem__(self, i: int) -> int:
        return letter_at(self, i)

    def prefix(self, n: int) -> str:
        return "".join(str(letter_at(self, i)) for i in range(n))

    def period(self) -> int | None:
        """Length of a period if the sequence is known to be periodic."""
        if self.kind == "periodic":
            return len(self.data)
        if self.kind == "syllable":
            return _syllable_starts(self.data)[-1]
        return None

    def __str__(self) -> str:
        return format_omega(self)


def _check_letters(data: object) -> None:
    if not isinstance(data, tuple) or any(x not in LETTERS for x in data):
        raise ValueError(f"letters must be 0, 1 or 2: {data!r}")


def letter_at(omega: OmegaSeq, i: int) -> int:
    if i < 0:
        raise IndexError("negative index")
    n = omega.offset + i
    if omega.kind == "explicit":
        if n >= len(omega.data):
            raise IndexError(f"explicit sequence has no letter at {i}")
        return omega.data[n]
    if omega.kind == "periodic":
        return omega.data[n % len(omega.data)]
    if omega.kind == "syllable":
        starts = _syllable_starts(omega.data)
        n %= starts[-1]
        t = bisect.bisect_right(starts, n) - 1
        if t % 2:
            return 2
        return (n - starts[t]) % 3
    return _lazy(omega.data).get(n)


def shift(omega: OmegaSeq, k: int = 1) -> OmegaSeq:
    if k < 0:
        raise ValueError("shift must be >= 0")
    if omega.kind == "explicit":
        return OmegaSeq("explicit", omega.data[omega.offset + k :])
    return OmegaSeq(omega.kind, omega.data, omega.offset + k)


def bernoulli_distance(omega: OmegaSeq, other: OmegaSeq, horizon: int) -> Fraction:
    """Partial sum of 2^-i over the indices i < horizon where they differ."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return sum(
        (Fraction(1, 2**i) for i in range(horizon) if letter_at(omega, i) != letter_at(other, i)),
        Fraction(0),
    )


def _word_text(data: tuple[int, ...]) -> str:
    return "".join(str(x) for x in data)


def format_omega(omega: OmegaSeq) -> str:
    """Mini-language text for omega; a nonzero offset is written as @k."""
    if omega.kind == "explicit":
        return "exp:" + _word_text(omega.data[omega.offset :])
    if omega.kind == "periodic":
        r = omega.offset % len(omega.data)
        return "per:" + _word_text(omega.data[r:] + omega.data[:r])
    if omega.kind == "syllable":
        body = "syll:" + ";".join(f"{i},{j}" for i, j in omega.data)
    elif isinstance(omega.data, str):
        body = "prog:" + omega.data
    else:
        raise ValueError("function-backed sequences have no text form")
    return body + (f"@{omega.offset}" if omega.offset else "")


def _parse_word(text: str, start: int) -> tuple[int, ...]:
    if not text:
        raise OmegaParseError("empty word", start)
    for pos, ch in enumerate(text):
        if ch not in "012":
            raise OmegaParseError(f"invalid letter {ch!r}", start + pos)
    return tuple(int(ch) for ch in text)


def _parse_natural(text: str, start: int, least: int = 0) -> int:
    if not text.isdigit():
        raise OmegaParseError(f"expected a number, got {text!r}", start)
    value = int(text)
    if value < least:
        raise OmegaParseError(f"number must be >= {least}", start)
    return value


def parse_omega_spec(text: str) -> OmegaSeq:
    """Parse ``per:``, ``exp:``, ``syll:`` or ``prog:`` text (optional ``@k`` shift)."""
    head, sep, body = text.partition(":")
    if not sep:
        raise OmegaParseError("missing ':' after the sequence kind", len(text))
    start = len(head) + 1
    offset = 0
    if "@" in body:
        at = body.index("@")
        offset = _parse_natural(body[at + 1 :], start + at + 1)
        body = body[:at]
    if head == "per":
        omega = OmegaSeq.periodic(_parse_word(body, start))
    elif head == "exp":
        omega = OmegaSeq.explicit(_parse_word(body, start))
    elif head == "syll":
        pairs = []
        pos = start
        for chunk in body.split(";"):
            parts = chunk.split(",")
            if len(parts) != 2:
                raise OmegaParseError("syllable must be 'i,j'", pos)
            i = _parse_natural(parts[0], pos, 1)
            j = _parse_natural(parts[1], pos + len(parts[0]) + 1, 1)
            pairs.append((i, j))
            pos += len(chunk) + 1
        if not pairs:
            raise OmegaParseError("no syllables", start)
        omega = OmegaSeq.syllable(pairs)
    elif head == "prog":
        if body not in PRESETS:
            raise OmegaParseError(f"unknown preset {body!r}", start)
        omega = OmegaSeq.programmatic(body)
    else:
        raise OmegaParseError(f"unknown sequence kind {head!r}", 0)
    return shift(omega, offset) if offset else omega
