"""Exact digit-sequence representations of reals in [0,1].

Digits are small ints: binary words over {0,1}, signed words over {-1,0,1}.
Words are plain tuples; ultimately periodic streams are ``Lasso`` values.
All arithmetic is exact (``fractions.Fraction``); floats never appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

BINARY = "binary"
SIGNED = "signed"
PRODUCT = "product"

_CHAR_TO_DIGIT = {"0": 0, "1": 1, "m": -1}
_DIGIT_TO_CHAR = {0: "0", 1: "1", -1: "m"}


def word(text: str) -> tuple[int, ...]:
    """Parse a digit string; 'm' denotes -1."""
    return tuple(_CHAR_TO_DIGIT[c] for c in text)


def word_str(digits: Iterable[int]) -> str:
    return "".join(_DIGIT_TO_CHAR[d] for d in digits)


def check_binary(digits: Iterable[int]) -> tuple[int, ...]:
    w = tuple(digits)
    if any(d not in (0, 1) for d in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def check_signed(digits: Iterable[int]) -> tuple[int, ...]:
    w = tuple(digits)
    if any(d not in (-1, 0, 1) for d in w):
        raise ValueError(f"not a signed word: {w!r}")
    return w


def value_binary(w: Iterable[int]) -> Fraction:
    """Value of a finite binary word: sum of w[s] * 2^-(s+1)."""
    num = 0
    n = 0
    for d in w:
        num = (num << 1) + d
        n += 1
    return Fraction(num, 1 << n)


def value_signed(w: Iterable[int]) -> Fraction:
    """Value of a finite signed word; lies in (-1, 1)."""
    num = 0
    n = 0
    for d in w:
        num = (num << 1) + d
        n += 1
    return Fraction(num, 1 << n)


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic word prefix + period^omega."""

    prefix: tuple
    period: tuple
    alphabet: str = BINARY

    def __post_init__(self):
        if not self.period:
            raise ValueError("lasso period must be nonempty")
        if self.alphabet == BINARY:
            check_binary(self.prefix)
            check_binary(self.period)
        elif self.alphabet == SIGNED:
            check_signed(self.prefix)
            check_signed(self.period)

    def digit(self, i: int):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def digits(self) -> Iterator:
        """Infinite digit stream."""
        yield from self.prefix
        while True:
            yield from self.period

    def head(self, n: int) -> tuple:
        it = self.digits()
        return tuple(next(it) for _ in range(n))

    def __str__(self) -> str:
        if self.alphabet == PRODUCT:
            pre = "".join(f"{a}{b}" for a, b in self.prefix)
            per = "".join(f"{a}{b}" for a, b in self.period)
        else:
            pre = word_str(self.prefix)
            per = word_str(self.period)
        return f"{pre}({per})"


def lasso(prefix: str, period: str, alphabet: str = BINARY) -> Lasso:
    return Lasso(word(prefix), word(period), alphabet)


def parse_lasso(text: str, alphabet: str = BINARY) -> Lasso:
    """Parse "prefix(period)" notation."""
    if "(" not in text or not text.endswith(")"):
        raise ValueError(f"bad lasso syntax: {text!r}")
    pre, per = text[:-1].split("(", 1)
    return Lasso(word(pre), word(per), alphabet)


def value_lasso(w: Lasso) -> Fraction:
    """Exact value via the geometric series for the periodic tail."""
    if w.alphabet == PRODUCT:
        raise ValueError("product lassos have no numeric value")
    p, c = len(w.prefix), len(w.period)
    head = value_binary(w.prefix) if w.alphabet == BINARY else value_signed(w.prefix)
    tail = value_binary(w.period) if w.alphabet == BINARY else value_signed(w.period)
    return head + Fraction(1, 1 << p) * tail / (1 - Fraction(1, 1 << c))


def normalize_lasso(w: Lasso) -> Lasso:
    """Canonical form: shortest prefix and primitive period.

    An ultimately periodic word has a unique such representation, so two
    lassos denote the same omega-word iff they normalize identically.
    """
    prefix, period = list(w.prefix), list(w.period)
    n = len(period)
    for k in range(1, n + 1):
        if n % k == 0 and period == period[k:] + period[:k]:
            period = period[:k]
            break
    while prefix and prefix[-1] == period[-1]:
        prefix.pop()
        period = period[-1:] + period[:-1]
    return Lasso(tuple(prefix), tuple(period), w.alphabet)


def binary_expansions(q: Fraction | int) -> set[Lasso]:
    """All minimal-lasso binary representations of q in [0,1].

    Dyadic q in (0,1) has exactly two (0^omega and 1^omega tails);
    every other rational has exactly one.
    """
    q = Fraction(q)
    if q < 0 or q > 1:
        raise ValueError(f"{q} outside [0,1]")
    if q == 0:
        return {Lasso((), (0,))}
    if q == 1:
        return {Lasso((), (1,))}
    den = q.denominator
    if den & (den - 1) == 0:
        # dyadic: finite expansion sigma ending in 1
        n = den.bit_length() - 1
        bits = tuple((q.numerator >> (n - 1 - i)) & 1 for i in range(n))
        assert bits[-1] == 1
        return {
            Lasso(bits, (0,)),
            Lasso(bits[:-1] + (0,), (1,)),
        }
    # long division by 2 with remainder cycle detection
    seen: dict[Fraction, int] = {}
    digits: list[int] = []
    r = q
    while r not in seen:
        seen[r] = len(digits)
        r *= 2
        d = 1 if r >= 1 else 0
        digits.append(d)
        r -= d
    start = seen[r]
    return {Lasso(tuple(digits[:start]), tuple(digits[start:]))}


def canonical_expansion(q: Fraction | int) -> Lasso:
    """The preferred representative: 0^omega tail for dyadics below 1."""
    q = Fraction(q)
    for w in sorted(binary_expansions(q), key=lambda w: w.period):
        return w
    raise AssertionError


def dy(eta: Iterable[int]) -> tuple[int, ...]:
    """Binary word of the same length representing max(value_signed(eta), 0)."""
    eta = check_signed(eta)
    n = len(eta)
    num = 0
    for d in eta:
        num = (num << 1) + d
    if num <= 0:
        return (0,) * n
    return tuple((num >> (n - 1 - i)) & 1 for i in range(n))


def sanitize_signed(source: Iterable[int]) -> Iterator[int]:
    """Replace the stream with 0^omega if its first nonzero digit is -1.

    Leading zeros pass through unchanged (they are shared by both
    outcomes), so one symbol decides everything.
    """
    it = iter(source)
    for d in it:
        if d == 0:
            yield 0
            continue
        if d == -1:
            while True:
                yield 0
        yield d
        break
    yield from it


def sanitize_lasso(w: Lasso) -> Lasso:
    """Lasso-level sanitize_signed."""
    if w.alphabet != SIGNED:
        return w
    for i in range(len(w.prefix) + len(w.period)):
        d = w.digit(i)
        if d == 1:
            return w
        if d == -1:
            return Lasso((), (0,), SIGNED)
    return w
