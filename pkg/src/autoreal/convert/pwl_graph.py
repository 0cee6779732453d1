"""Graph automata of dyadic piecewise-linear functions.

One branch per linear piece: an interval component checks that the
input lies in the piece's closed dyadic interval by lexicographic
comparison against the two boundary expansions, and a remainder
component checks the linear relation A*x - B*y + C = 0 digit by digit
with a bounded integer carry.  Runs die on violation; every surviving
infinite run certifies membership in the graph, so all states are
accepting and the automaton is a safety automaton.
"""

from __future__ import annotations

from fractions import Fraction

from ..buchi import GRAPH_ALPHABET, BuchiAutomaton
from ..pwl import PwlFunction, has_dyadic_breakpoints


def _dyadic_bits(q: Fraction) -> tuple[int, ...]:
    """Terminating expansion of a dyadic in (0,1), ending in 1."""
    n = q.denominator.bit_length() - 1
    return tuple((q.numerator >> (n - 1 - i)) & 1 for i in range(n))


class _IntervalCheck:
    """Lexicographic membership in a closed dyadic interval [lo, hi].

    x < lo iff the input word is lexicographically below the lower
    expansion of lo (tail 1s); x > hi iff above the terminating
    expansion of hi (tail 0s).  States track the compare position while
    either comparison is still tied.
    """

    def __init__(self, lo: Fraction, hi: Fraction):
        if lo == 0:
            self.lo_word: tuple[int, ...] | None = None
        else:
            bits = _dyadic_bits(lo)
            self.lo_word = bits[:-1] + (0,)  # then tail 1s
        if hi == 1:
            self.hi_word: tuple[int, ...] | None = None
        else:
            self.hi_word = _dyadic_bits(hi)  # then tail 0s
        self.cap = max(
            len(self.lo_word) if self.lo_word is not None else 0,
            len(self.hi_word) if self.hi_word is not None else 0,
        )

    def initial(self) -> tuple:
        return (0, self.lo_word is not None, self.hi_word is not None)

    def _expected(self, word, pos: int, tail: int) -> int:
        if word is None:
            return tail
        return word[pos] if pos < len(word) else tail

    def step(self, state: tuple, a: int) -> tuple | None:
        """None = input provably outside the interval (run dies)."""
        pos, eq_lo, eq_hi = state
        if eq_lo:
            want = self._expected(self.lo_word, pos, 1)
            if a < want:
                return None
            if a > want:
                eq_lo = False
        if eq_hi:
            want = self._expected(self.hi_word, pos, 0)
            if a > want:
                return None
            if a < want:
                eq_hi = False
        if not (eq_lo or eq_hi):
            return (self.cap, False, False)
        return (min(pos + 1, self.cap), eq_lo, eq_hi)


class _RelationCheck:
    """Bounded-carry checker for A*x - B*y + C = 0 on digit pairs."""

    def __init__(self, slope: Fraction, intercept: Fraction):
        lcm = slope.denominator * intercept.denominator // _gcd(
            slope.denominator, intercept.denominator
        )
        self.A = slope.numerator * (lcm // slope.denominator)
        self.B = lcm
        self.C = intercept.numerator * (lcm // intercept.denominator)
        self.bound = abs(self.A) + abs(self.B) + abs(self.C)

    def initial(self) -> int:
        return self.C

    def step(self, e: int, a: int, b: int) -> int | None:
        e2 = 2 * e + self.A * a - self.B * b
        if abs(e2) > self.bound:
            return None
        assert abs(e2) <= self.bound
        return e2


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def pwl_to_buchi(f: PwlFunction) -> BuchiAutomaton:
    """Graph automaton accepting x (+) y iff f(x) = y, all representations."""
    if not has_dyadic_breakpoints(f):
        raise ValueError("breakpoints must have dyadic coordinates")
    for _, y in f.points:
        if y < 0 or y > 1:
            raise ValueError(f"range value {y} outside [0,1]")

    pieces = []
    for (x0, y0), (x1, y1) in zip(f.points, f.points[1:]):
        slope = (y1 - y0) / (x1 - x0)
        intercept = y0 - slope * x0
        pieces.append((_IntervalCheck(x0, x1), _RelationCheck(slope, intercept)))

    index: dict[tuple, int] = {}
    order: list[tuple] = []

    def intern(st: tuple) -> int:
        if st not in index:
            index[st] = len(order)
            order.append(st)
        return index[st]

    initial = [intern((i, iv.initial(), rel.initial()))
               for i, (iv, rel) in enumerate(pieces)]
    transitions: list[tuple] = []
    k = 0
    while k < len(order):
        piece, iv_state, e = order[k]
        iv, rel = pieces[piece]
        for a, b in GRAPH_ALPHABET:
            iv2 = iv.step(iv_state, a)
            if iv2 is None:
                continue
            e2 = rel.step(e, a, b)
            if e2 is None:
                continue
            transitions.append((k, (a, b), intern((piece, iv2, e2))))
        k += 1
    return BuchiAutomaton(
        n_states=len(order),
        alphabet=GRAPH_ALPHABET,
        initial=frozenset(initial),
        accepting=frozenset(range(len(order))),
        transitions=tuple(transitions),
    )
