"""Witness functions and hand-built machines used as fixtures and oracles.

Everything here is exact: evaluators return Fractions, and the
instrumented ones carry an abstract step meter (one unit per digit
read, written, or table lookup) for the linearity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .buchi import GRAPH_ALPHABET, BuchiAutomaton
from .digits import check_binary, value_binary
from .pwl import PwlFunction
from .transducer import Fst


# ---------------------------------------------------------------------------
# support predicates and the interval family J_n


@dataclass(frozen=True)
class SupportPredicate:
    """Finite description of r: N -> {0,1}.

    ``cofinite=False``: r(n) = 1 iff n in support.
    ``cofinite=True``:  r(n) = 1 iff n not in support.
    """

    support: frozenset
    cofinite: bool = False

    def __call__(self, n: int) -> int:
        inside = n in self.support
        return int(inside != self.cofinite)

    @classmethod
    def finite(cls, *ns: int) -> "SupportPredicate":
        return cls(frozenset(ns), cofinite=False)

    @classmethod
    def cofinite_all(cls, *excluded: int) -> "SupportPredicate":
        return cls(frozenset(excluded), cofinite=True)


def interval_J(n: int) -> tuple[Fraction, Fraction]:
    """The open interval J_n = (2^-n - 2^-2n, 2^-n + 2^-2n), n >= 3."""
    if n < 3:
        raise ValueError("need n >= 3")
    c = Fraction(1, 1 << n)
    w = Fraction(1, 1 << (2 * n))
    return (c - w, c + w)


# ---------------------------------------------------------------------------
# instrumented evaluators


class StepMeter:
    def __init__(self):
        self.steps = 0

    def tick(self, n: int = 1):
        self.steps += n


@dataclass
class StreamingEvaluator:
    """Maps a finite binary word to the exact value of f at its dyadic.

    ``evaluate`` returns (value, steps); ``value_at`` is the pure case
    arithmetic at an arbitrary rational, used as the oracle side.
    """

    name: str
    word_fn: Callable  # (sigma, StepMeter) -> Fraction
    value_fn: Callable  # Fraction -> Fraction

    def evaluate(self, sigma: Iterable[int]) -> tuple[Fraction, int]:
        meter = StepMeter()
        v = self.word_fn(check_binary(sigma), meter)
        return v, meter.steps

    def __call__(self, x) -> Fraction:
        return self.value_fn(Fraction(x))


def _first_one(sigma: tuple[int, ...], meter: StepMeter) -> int | None:
    for i, d in enumerate(sigma):
        meter.tick()
        if d == 1:
            return i
    return None


def delta(sigma: Iterable[int], meter: StepMeter | None = None) -> tuple[int, ...]:
    """1^n when the word's value lies in J_n (n > 2), else "0".

    Two scans as in the linear-time argument: the right half
    [2^-n, 2^-n + 2^-2n) has its first 1 at position n-1 followed by
    zeros through position 2n-1; the left half (2^-n - 2^-2n, 2^-n)
    is ones on positions n..2n-1 plus another 1 beyond.
    """
    sigma = check_binary(sigma)
    meter = meter or StepMeter()
    p = _first_one(sigma, meter)
    if p is None or p <= 1:
        meter.tick()
        return (0,)
    # delta+ branch: candidate n = p + 1, zeros through 2n-1
    n = p + 1
    plus = True
    for j in range(n, min(len(sigma), 2 * n)):
        meter.tick()
        if sigma[j] == 1:
            plus = False
            break
    if plus:
        meter.tick(n)
        return (1,) * n
    # delta- branch: candidate n = p, ones on n..2n-1 and one more beyond
    n = p
    if n < 3:
        meter.tick()
        return (0,)
    if len(sigma) < 2 * n + 1:
        meter.tick()
        return (0,)
    for j in range(n, 2 * n):
        meter.tick()
        if sigma[j] == 0:
            meter.tick()
            return (0,)
    for j in range(2 * n, len(sigma)):
        meter.tick()
        if sigma[j] == 1:
            meter.tick(n)
            return (1,) * n
    meter.tick()
    return (0,)


def _j_index(x: Fraction) -> int | None:
    """The unique n > 2 with x in J_n, if any."""
    if x <= 0:
        return None
    # J_n subset (2^-n-1, 2^-n+1); candidates straddle the two dyadic scales
    n = 1
    while Fraction(1, 1 << n) > x:
        n += 1
    for cand in (n, n - 1, n + 1):
        if cand > 2:
            lo, hi = interval_J(cand)
            if lo < x < hi:
                return cand
    return None


def f_z(r: SupportPredicate) -> StreamingEvaluator:
    """The bump family: a plateau of height 2^-2n-1 over the middle of
    J_n when r(n) = 1, zero elsewhere; 1-Lipschitz, rationals to
    rationals."""

    def value_fn(x: Fraction) -> Fraction:
        n = _j_index(x)
        if n is None or r(n) == 0:
            return Fraction(0)
        c = Fraction(1, 1 << n)
        w = Fraction(1, 1 << (2 * n))
        h = w / 2
        if x <= c - h:
            return x + w - c
        if x < c + h:
            return h
        return -x + w + c

    def word_fn(sigma: tuple[int, ...], meter: StepMeter) -> Fraction:
        d = delta(sigma, meter)
        if d == (0,):
            return Fraction(0)
        n = len(d)
        meter.tick()  # r(n) lookup
        if r(n) == 0:
            return Fraction(0)
        x = value_binary(sigma)
        meter.tick(min(len(sigma), 2 * n + 2))  # subcase decision scans
        v = value_fn(x)
        meter.tick(max(1, 2 * n + 1))  # output digits
        return v

    return StreamingEvaluator(f"f_z[{r}]", word_fn, value_fn)


def f_z_pwl(r: SupportPredicate) -> PwlFunction:
    """Piecewise-linear form of f_z for finite support; dyadic breakpoints."""
    if r.cofinite:
        raise ValueError("cofinite support has infinitely many bumps")
    pts: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(0)),
                                            (Fraction(1), Fraction(0))]
    for n in sorted(r.support):
        if n < 3 or r(n) == 0:
            continue
        c = Fraction(1, 1 << n)
        w = Fraction(1, 1 << (2 * n))
        h = w / 2
        pts += [(c - w, Fraction(0)), (c - h, h), (c + h, h), (c + w, Fraction(0))]
    return PwlFunction(pts)


def f_tilde() -> StreamingEvaluator:
    """The linear-time-but-not-pointwise witness over
    J~_n = (2^-n - 2^-n^2, 2^-n + 2^-n^2); peaks with f(2^-n) = 2^-n^2."""

    def j_tilde_index(x: Fraction) -> int | None:
        if x <= 0:
            return None
        n = 1
        while Fraction(1, 1 << n) > x:
            n += 1
        for cand in (n, n - 1, n + 1):
            if cand >= 3:
                c = Fraction(1, 1 << cand)
                w = Fraction(1, 1 << (cand * cand))
                if c - w < x < c + w:
                    return cand
        return None

    def value_fn(x: Fraction) -> Fraction:
        n = j_tilde_index(x)
        if n is None:
            return Fraction(0)
        c = Fraction(1, 1 << n)
        w = Fraction(1, 1 << (n * n))
        if x < c:
            return x + w - c
        return -x + w + c

    def word_fn(sigma: tuple[int, ...], meter: StepMeter) -> Fraction:
        # membership scan is linear; emitting the exact value at the peak
        # costs ~n^2 digits, which is precisely why the function is not
        # pointwise linear-time (use ``approx`` for the linear-time mode)
        p = _first_one(sigma, meter)
        if p is None or p < 2:
            meter.tick()
            return Fraction(0)
        x = value_binary(sigma)
        n = j_tilde_index(x)
        meter.tick(min(len(sigma), (p + 2) * (p + 2)) - p)
        if n is None:
            meter.tick()
            return Fraction(0)
        v = value_fn(x)
        meter.tick(max(1, v.denominator.bit_length()))
        return v

    return StreamingEvaluator("f_tilde", word_fn, value_fn)


def f_tilde_approx(sigma: Iterable[int], m: int) -> tuple[tuple[int, ...], int]:
    """m output digits of f~ at the word's value, metered linearly.

    Truncates the exact value to m digits; at a peak 2^-n the output is
    0^m while m < n^2, comparing m against n^2 by lazily generating
    1^(n^2) capped at m+1 symbols, so the cost stays O(|sigma| + m).
    """
    sigma = check_binary(sigma)
    meter = StepMeter()
    p = _first_one(sigma, meter)
    if p is None or p < 2:
        meter.tick(m)
        return (0,) * m, meter.steps
    ev = f_tilde()
    x = value_binary(sigma)
    n_sq_cap = min((p + 2) * (p + 2), m + 1)
    meter.tick(n_sq_cap)  # lazy 1^(n^2) comparison, capped
    v = ev.value_fn(x)
    meter.tick(m)  # emit m digits
    num = (v.numerator * (1 << m)) // v.denominator
    return tuple((num >> (m - 1 - i)) & 1 for i in range(m)), meter.steps


# ---------------------------------------------------------------------------
# the deterministic/nondeterministic separating function


def counterexample_fn() -> StreamingEvaluator:
    """Continuous f with f(0) = 1/2 computable nondeterministically but by
    no deterministic binary transducer: on each block (2^-n-1, 2^-n] it
    rises above 1/2, dips below, and returns."""

    def value_fn(x: Fraction) -> Fraction:
        if x == 0:
            return Fraction(1, 2)
        if x < 0 or x > 1:
            raise ValueError(f"{x} outside [0,1]")
        n = 0
        while x <= Fraction(1, 1 << (n + 1)):
            n += 1
        lo = Fraction(1, 1 << (n + 1))
        q = Fraction(1, 1 << (n + 3))
        if x <= lo + q:
            return x + Fraction(1, 2) - lo
        if x <= lo + 3 * q:
            return -x + Fraction(1, 2) + lo + Fraction(1, 1 << (n + 2))
        return x + Fraction(1, 2) - Fraction(1, 1 << n)

    def word_fn(sigma: tuple[int, ...], meter: StepMeter) -> Fraction:
        meter.tick(len(sigma) + 1)
        v = value_fn(value_binary(sigma))
        meter.tick(max(1, v.denominator.bit_length()))
        return v

    return StreamingEvaluator("counterexample", word_fn, value_fn)


def _fst_from_symbolic(states, initial, transitions, delay=0, delay_transitions=()):
    index = {s: i for i, s in enumerate(states)}
    return Fst(
        n_states=len(states),
        input_alphabet=(0, 1),
        output_alphabet=(0, 1),
        initial=frozenset(index[s] for s in initial),
        delay=delay,
        transitions=tuple(
            (index[s], a, b, index[t]) for s, a, b, t in transitions
        ),
        delay_transitions=tuple(
            (index[s], a, index[t]) for s, a, t in delay_transitions
        ),
    )


def counterexample_transducer() -> Fst:
    """Hand-built nondeterministic transducer for ``counterexample_fn``.

    Two runs write the dual prefixes 10^k and 01^k of 1/2 until the
    first 1-bit of the input; the following two bits select copy,
    complement, or an all-zeros/all-ones lock, killing the wrong run.
    """
    trans = [
        ("A0", 0, 1, "AZ"), ("A0", 1, 1, "AW1"),
        ("AZ", 0, 0, "AZ"), ("AZ", 1, 0, "AW1"),
        ("AW1", 0, 0, "AW2_0"), ("AW1", 1, 0, "AW2_1"),
        ("AW2_0", 0, 0, "ACOPY"), ("AW2_0", 1, 0, "ACOMP"),
        ("AW2_1", 0, 0, "ALKZ"), ("AW2_1", 1, 0, "ALKO"),
        ("ACOPY", 0, 0, "ACOPY"), ("ACOPY", 1, 1, "ACOPY"),
        ("ACOMP", 0, 1, "ACOMP"), ("ACOMP", 1, 0, "ACOMP"),
        ("ALKZ", 0, 0, "ALKZ"),              # dies on 1
        ("ALKO", 1, 0, "ALKO"),              # dies on 0
        ("B0", 0, 0, "BZ"), ("B0", 1, 0, "BW1"),
        ("BZ", 0, 1, "BZ"), ("BZ", 1, 1, "BW1"),
        ("BW1", 0, 1, "BW2_0"), ("BW1", 1, 1, "BW2_1"),
        ("BW2_0", 0, 1, "BLK1"), ("BW2_0", 1, 1, "BLK0"),
        ("BW2_1", 0, 1, "BCOMP"), ("BW2_1", 1, 1, "BCOPY"),
        ("BCOPY", 0, 0, "BCOPY"), ("BCOPY", 1, 1, "BCOPY"),
        ("BCOMP", 0, 1, "BCOMP"), ("BCOMP", 1, 0, "BCOMP"),
        ("BLK1", 0, 1, "BLK1"),              # dies on 1
        ("BLK0", 1, 1, "BLK0"),              # dies on 0
    ]
    states = sorted({s for s, _, _, _ in trans} | {t for _, _, _, t in trans})
    return _fst_from_symbolic(states, ["A0", "B0"], trans)


def constant_zero_fst() -> Fst:
    """Writes 0 forever: computes the constant 0."""
    return Fst(
        n_states=1,
        input_alphabet=(0, 1),
        output_alphabet=(0, 1),
        initial=frozenset([0]),
        delay=0,
        transitions=((0, 0, 0, 0), (0, 1, 0, 0)),
    )


def copier_fst(delay: int = 0) -> Fst:
    """Echoes the input after ``delay`` steps: computes x / 2^delay.

    States are the buffered last ``delay`` digits.
    """
    if delay == 0:
        return Fst(
            n_states=1,
            input_alphabet=(0, 1),
            output_alphabet=(0, 1),
            initial=frozenset([0]),
            delay=0,
            transitions=((0, 0, 0, 0), (0, 1, 1, 0)),
        )
    bufs: list[tuple[int, ...]] = [()]
    frontier = [()]
    for _ in range(delay):
        frontier = [b + (d,) for b in frontier for d in (0, 1)]
        bufs += frontier
    index = {b: i for i, b in enumerate(bufs)}
    delay_trans = [
        (index[b], d, index[b + (d,)])
        for b in bufs if len(b) < delay for d in (0, 1)
    ]
    run_trans = [
        (index[b], d, b[0], index[b[1:] + (d,)])
        for b in bufs if len(b) == delay for d in (0, 1)
    ]
    return Fst(
        n_states=len(bufs),
        input_alphabet=(0, 1),
        output_alphabet=(0, 1),
        initial=frozenset([index[()]]),
        delay=delay,
        transitions=tuple(run_trans),
        delay_transitions=tuple(delay_trans),
    )


def broken_transducer() -> Fst:
    """Negative control: echoes the first input bit forever.

    Not representation-independent (the two expansions of 1/2 give
    outputs 0 and 1), so it computes no real function; continuity
    probes must report failure on it.
    """
    # states: 0 undecided, 1 locked-on-0, 2 locked-on-1
    return Fst(
        n_states=3,
        input_alphabet=(0, 1),
        output_alphabet=(0, 1),
        initial=frozenset([0]),
        delay=0,
        transitions=(
            (0, 0, 0, 1), (0, 1, 1, 2),
            (1, 0, 0, 1), (1, 1, 0, 1),
            (2, 0, 1, 2), (2, 1, 1, 2),
        ),
    )


# ---------------------------------------------------------------------------
# hand-built graph automata


def step_function_buchi() -> BuchiAutomaton:
    """Graph automaton of the step function: 0 below 1/2, 1 from 1/2 on.

    Handles both representations of 1/2 on the input side; the only
    expansions of the outputs 0 and 1 are the constant ones.  The
    automaton is deterministic: INIT, then ONES (x >= 1/2 committed,
    output all ones), ZB (x may still equal 1/2 via 01^omega, output
    zeros so far, not accepting), ZA (x < 1/2 certain), OB (x = 1/2 via
    01^omega still live, output ones).
    """
    INIT, ONES, ZA, ZB, OB, T = range(6)
    trans = [
        (INIT, (1, 1), ONES), (INIT, (0, 0), ZB),
        (INIT, (0, 1), OB), (INIT, (1, 0), T),
        (ONES, (0, 1), ONES), (ONES, (1, 1), ONES),
        (ONES, (0, 0), T), (ONES, (1, 0), T),
        (ZA, (0, 0), ZA), (ZA, (1, 0), ZA), (ZA, (0, 1), T), (ZA, (1, 1), T),
        (ZB, (0, 0), ZA), (ZB, (1, 0), ZB), (ZB, (0, 1), T), (ZB, (1, 1), T),
        (OB, (1, 1), OB), (OB, (0, 0), T), (OB, (0, 1), T), (OB, (1, 0), T),
    ]
    trans += [(T, a, T) for a in GRAPH_ALPHABET]
    return BuchiAutomaton(
        n_states=6,
        alphabet=GRAPH_ALPHABET,
        initial=frozenset([INIT]),
        accepting=frozenset([ONES, ZA, OB]),
        transitions=tuple(trans),
    )


def step_function_value(x) -> Fraction:
    x = Fraction(x)
    return Fraction(1) if x >= Fraction(1, 2) else Fraction(0)


def identity_buchi() -> BuchiAutomaton:
    """Graph automaton of the identity: equal-so-far, or a committed
    10^omega / 01^omega twin pair."""
    E, A, B, T = range(4)
    trans = [
        (E, (0, 0), E), (E, (1, 1), E), (E, (1, 0), A), (E, (0, 1), B),
        (A, (0, 1), A), (A, (0, 0), T), (A, (1, 0), T), (A, (1, 1), T),
        (B, (1, 0), B), (B, (0, 0), T), (B, (0, 1), T), (B, (1, 1), T),
    ]
    trans += [(T, a, T) for a in GRAPH_ALPHABET]
    return BuchiAutomaton(
        n_states=4,
        alphabet=GRAPH_ALPHABET,
        initial=frozenset([E]),
        accepting=frozenset([E, A, B]),
        transitions=tuple(trans),
    )
