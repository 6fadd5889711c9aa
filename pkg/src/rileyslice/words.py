"""Farey words on the four-times punctured sphere.

A rational slope p/q in (0, 1] indexes a word of length 2q in the letters
x, y which strictly alternates between the two letter bases.  The sign
pattern is the closed form

    sign(i) = (-1)^floor((i-1) * p / q),   i = 1 .. 2q,

with x in the odd positions and y in the even ones.  Words serialize to
ASCII as ``x``/``y`` with uppercase meaning the inverse letter, so the
slope-1/2 word is ``xyXY``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True, order=True)
class Slope:
    """Reduced rational p/q with 1 <= p <= q."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1 or self.p < 1 or self.p > self.q:
            raise ValueError(f"slope {self.p}/{self.q} not in (0, 1]")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q} is not reduced")

    def __str__(self):
        return f"{self.p}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "Slope":
        """Parse 'p/q' (whitespace tolerated)."""
        try:
            p_str, q_str = text.strip().split("/")
            return cls(int(p_str), int(q_str))
        except ValueError as exc:
            raise ValueError(f"cannot parse slope from {text!r}") from exc


@dataclass(frozen=True)
class Letter:
    """One letter of a word: base 'x' or 'y', sign +1 or -1."""

    base: str
    sign: int

    def __post_init__(self):
        if self.base not in ("x", "y") or self.sign not in (1, -1):
            raise ValueError(f"bad letter ({self.base!r}, {self.sign})")

    def inverse(self) -> "Letter":
        return Letter(self.base, -self.sign)

    def to_char(self) -> str:
        return self.base if self.sign == 1 else self.base.upper()

    @classmethod
    def from_char(cls, ch: str) -> "Letter":
        if ch not in "xXyY":
            raise ValueError(f"bad letter character {ch!r}")
        return cls(ch.lower(), 1 if ch.islower() else -1)


@dataclass(frozen=True)
class FareyWord:
    """A slope together with its alternating letter sequence."""

    slope: Slope
    letters: tuple[Letter, ...]

    def __post_init__(self):
        if len(self.letters) != 2 * self.slope.q:
            raise ValueError("word length must be 2q")
        for i, letter in enumerate(self.letters):
            if letter.base != ("x" if i % 2 == 0 else "y"):
                raise ValueError("letters must alternate x, y, x, y, ...")

    def __str__(self):
        return "".join(letter.to_char() for letter in self.letters)

    def __len__(self):
        return len(self.letters)


@dataclass(frozen=True)
class StructureReport:
    """Combinatorial summary of a word: length, alternation, exponent sums."""

    slope: Slope
    length: int
    alternating: bool
    x_exponent_sum: int
    y_exponent_sum: int


def farey_word(slope: Slope) -> FareyWord:
    """Word of slope p/q: length 2q, alternating, signs from the floor rule."""
    p, q = slope.p, slope.q
    letters = []
    for i in range(1, 2 * q + 1):
        base = "x" if i % 2 == 1 else "y"
        sign = -1 if ((i - 1) * p // q) % 2 else 1
        letters.append(Letter(base, sign))
    return FareyWord(slope, tuple(letters))


def word_from_string(text: str, slope: Slope | None = None) -> tuple[Letter, ...]:
    """Decode an ASCII word; returns the raw letter tuple."""
    return tuple(Letter.from_char(ch) for ch in text.strip())


def enumerate_slopes(max_q: int) -> list[Slope]:
    """All reduced p/q with q <= max_q, ordered by q then p."""
    if max_q < 1:
        raise ValueError("max_q must be >= 1")
    out = []
    for q in range(1, max_q + 1):
        for p in range(1, q + 1):
            if gcd(p, q) == 1:
                out.append(Slope(p, q))
    return out


def word_report(word: FareyWord) -> StructureReport:
    """Length, alternation flag and exponent sums of a word."""
    alternating = all(
        letter.base == ("x" if i % 2 == 0 else "y")
        for i, letter in enumerate(word.letters)
    )
    x_sum = sum(l.sign for l in word.letters if l.base == "x")
    y_sum = sum(l.sign for l in word.letters if l.base == "y")
    return StructureReport(
        slope=word.slope,
        length=len(word),
        alternating=alternating,
        x_exponent_sum=x_sum,
        y_exponent_sum=y_sum,
    )
