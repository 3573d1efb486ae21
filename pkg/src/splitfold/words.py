"""Free group words.

A word is a tuple of nonzero ints: ``i`` is the i-th basis letter and ``-i``
its inverse (1-based).  Most algorithms work on raw tuples; ``GroupElement``
is the public wrapper that keeps its word freely reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ValidationError

Word = tuple


def reduce_word(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def mul(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return mul(*([tuple(w)] * k)) if k else ()


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Return (u, c) with w = u c u^-1 and c cyclically reduced."""
    w = reduce_word(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[:i]), tuple(w[i:j + 1])


def least_rotation(w: Sequence[int]) -> Word:
    """Lexicographically least rotation of a cyclically reduced word."""
    w = tuple(w)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def conjugacy_rep(w: Sequence[int]) -> Word:
    """Canonical conjugacy class representative: least rotation of the cyclic reduction."""
    return least_rotation(cyclic_reduce(w)[1])


def letters_used(words: Iterable[Sequence[int]]) -> set[int]:
    return {abs(x) for w in words for x in w}


@dataclass(frozen=True)
class Basis:
    """Free basis of F_n given by letter names."""

    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValidationError("basis must have at least one letter")
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate basis letters: {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", nm):
                raise ValidationError(f"bad letter name {nm!r}")

    @classmethod
    def standard(cls, n: int) -> "Basis":
        if n <= 0:
            raise ValidationError("rank must be positive")
        if n <= 26:
            return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))
        return cls(tuple(f"x{i}" for i in range(1, n + 1)))

    @property
    def rank(self) -> int:
        return len(self.names)

    def letter(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise ValidationError(f"unknown letter {name!r} for basis {self.names}")

    def oriented_letters(self) -> list[int]:
        """All 2n oriented letters in a fixed order: a, A, b, B, ..."""
        out = []
        for i in range(1, self.rank + 1):
            out += [i, -i]
        return out

    def name_of(self, x: int) -> str:
        nm = self.names[abs(x) - 1]
        return nm if x > 0 else nm + "^-1"

    def format(self, w: Sequence[int]) -> str:
        if not w:
            return "1"
        sep = "" if all(len(nm) == 1 for nm in self.names) else " "
        parts = []
        i = 0
        w = tuple(w)
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            run = j - i
            nm = self.names[abs(w[i]) - 1]
            exp = run if w[i] > 0 else -run
            parts.append(nm if exp == 1 else f"{nm}^{exp}")
            i = j
        return sep.join(parts)

    def parse(self, text: str) -> Word:
        """Parse words like ``ab^-1a``, ``a b^-1 a``, ``a^2 b`` or ``1``."""
        s = text.strip()
        if s in ("", "1"):
            return ()
        names = sorted(self.names, key=len, reverse=True)
        out: list[int] = []
        pos = 0
        while pos < len(s):
            if s[pos].isspace() or s[pos] == "*" or s[pos] == ".":
                pos += 1
                continue
            for nm in names:
                if s.startswith(nm, pos):
                    break
            else:
                raise ValidationError(f"cannot parse word {text!r} at offset {pos}")
            pos += len(nm)
            exp = 1
            m = re.match(r"\^\(?(-?\d+)\)?", s[pos:])
            if m:
                exp = int(m.group(1))
                pos += m.end()
            x = self.letter(nm)
            out.extend([x if exp > 0 else -x] * abs(exp))
        return reduce_word(out)


@dataclass(frozen=True, order=True)
class GroupElement:
    """Element of F_n stored as its freely reduced word."""

    word: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "word", reduce_word(self.word))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(mul(self.word, other.word))

    def inverse(self) -> "GroupElement":
        return GroupElement(inverse(self.word))

    def __len__(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return not self.word

    def format(self, basis: Basis) -> str:
        return basis.format(self.word)
