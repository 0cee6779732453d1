"""Finite-state transducers with fixed delay over digit alphabets.

Two machine flavours share one protocol:

* table machines (:class:`Fst`, :class:`DetFst`) built by hand with
  explicit transition relations;
* constructive machines (the converted ones) exposing the same
  ``delay`` / ``initial_states`` / ``transitions_from`` surface lazily.

A machine with delay D reads one input digit per step and, from step
D+1 on, writes exactly one output digit per step.  During the delay
phase ``transitions_from`` yields ``None`` outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Hashable, Iterable, Iterator

from .digits import BINARY, Lasso, SIGNED, binary_expansions, value_signed, value_binary


@dataclass(frozen=True)
class Fst:
    """Nondeterministic transducer with an explicit transition table."""

    n_states: int
    input_alphabet: tuple
    output_alphabet: tuple
    initial: frozenset
    delay: int
    transitions: tuple  # (src, in, out, dst), used from step delay+1 on
    delay_transitions: tuple = ()  # (src, in, dst), used for the first delay steps
    _index: dict = field(default=None, repr=False, compare=False)
    _dindex: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        idx: dict[tuple, list] = {}
        for s, a, b, t in self.transitions:
            if b not in self.output_alphabet:
                raise ValueError(f"output symbol {b!r} not in alphabet")
            idx.setdefault((s, a), []).append((b, t))
        didx: dict[tuple, list] = {}
        for s, a, t in self.delay_transitions:
            didx.setdefault((s, a), []).append((None, t))
        object.__setattr__(self, "_index", {k: tuple(v) for k, v in idx.items()})
        object.__setattr__(self, "_dindex", {k: tuple(v) for k, v in didx.items()})

    def initial_states(self) -> frozenset:
        return self.initial

    def transitions_from(self, state, symbol, phase: str):
        """Enabled moves as (output | None, next state) pairs."""
        if phase == "delay":
            return self._dindex.get((state, symbol), ())
        return self._index.get((state, symbol), ())

    def to_json(self) -> dict:
        return {
            "states": self.n_states,
            "input_alphabet": list(self.input_alphabet),
            "output_alphabet": list(self.output_alphabet),
            "initial": sorted(self.initial),
            "delay": self.delay,
            "transitions": [list(t) for t in self.transitions],
            "delay_transitions": [list(t) for t in self.delay_transitions],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fst":
        return cls(
            n_states=data["states"],
            input_alphabet=tuple(data["input_alphabet"]),
            output_alphabet=tuple(data["output_alphabet"]),
            initial=frozenset(data["initial"]),
            delay=data["delay"],
            transitions=tuple(tuple(t) for t in data["transitions"]),
            delay_transitions=tuple(tuple(t) for t in data.get("delay_transitions", ())),
        )


@dataclass(frozen=True)
class DetFst:
    """Deterministic table transducer: one successor per (state, input)."""

    n_states: int
    input_alphabet: tuple
    output_alphabet: tuple
    initial: int
    delay: int
    transitions: tuple
    delay_transitions: tuple = ()
    _index: dict = field(default=None, repr=False, compare=False)
    _dindex: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        idx = {}
        for s, a, b, t in self.transitions:
            if (s, a) in idx:
                raise ValueError(f"nondeterministic at {(s, a)}")
            idx[(s, a)] = (b, t)
        didx = {}
        for s, a, t in self.delay_transitions:
            if (s, a) in didx:
                raise ValueError(f"nondeterministic delay at {(s, a)}")
            didx[(s, a)] = t
        object.__setattr__(self, "_index", idx)
        object.__setattr__(self, "_dindex", didx)

    @property
    def initial_state(self):
        return self.initial

    def step(self, state, symbol, phase: str = "run"):
        """Returns (output | None, next state); raises on a dead state."""
        if phase == "delay":
            nxt = self._dindex.get((state, symbol))
            if nxt is None:
                raise DeadRun(f"no delay transition at {(state, symbol)}")
            return None, nxt
        move = self._index.get((state, symbol))
        if move is None:
            raise DeadRun(f"no transition at {(state, symbol)}")
        return move

    def initial_states(self) -> frozenset:
        return frozenset([self.initial])

    def transitions_from(self, state, symbol, phase: str):
        try:
            out, nxt = self.step(state, symbol, phase)
        except DeadRun:
            return ()
        return ((out, nxt),)


class DeadRun(RuntimeError):
    """A deterministic machine reached a state with no outgoing edge."""


class NonTermination(RuntimeError):
    """Cycle detection exceeded its pigeonhole bound (machine bug)."""


# ---------------------------------------------------------------------------
# nondeterministic run semantics


@dataclass(frozen=True)
class RunSet:
    """Live runs after a finite input: (state, output written) pairs."""

    runs: frozenset  # of (state, output tuple)
    steps: int
    delay: int

    def outputs(self) -> set[tuple]:
        return {out for _, out in self.runs}

    def __len__(self):
        return len(self.runs)


def initial_runs(machine) -> RunSet:
    return RunSet(
        runs=frozenset((s, ()) for s in machine.initial_states()),
        steps=0,
        delay=machine.delay,
    )


def step_all(machine, rs: RunSet, symbol) -> RunSet:
    """Extend every live run along every enabled transition; dead runs drop."""
    phase = "delay" if rs.steps < machine.delay else "run"
    new = set()
    for state, out in rs.runs:
        for b, nxt in machine.transitions_from(state, symbol, phase):
            new.add((nxt, out if b is None else out + (b,)))
    return RunSet(runs=frozenset(new), steps=rs.steps + 1, delay=machine.delay)


def run_on_word(machine, digits: Iterable[int], monitor=None) -> RunSet:
    rs = initial_runs(machine)
    for d in digits:
        rs = step_all(machine, rs, d)
        if monitor is not None:
            monitor.observe_runset(rs)
    return rs


# ---------------------------------------------------------------------------
# deterministic streaming + exact evaluation


def eval_stream(machine, source: Iterable[int], n: int) -> tuple[int, ...]:
    """First n output digits of the unique run on ``source``."""
    out: list[int] = []
    state = machine.initial_state
    steps = 0
    it = iter(source)
    while len(out) < n:
        try:
            d = next(it)
        except StopIteration:
            raise ValueError(f"input exhausted after {steps} digits, "
                             f"need more for {n} outputs") from None
        phase = "delay" if steps < machine.delay else "run"
        b, state = machine.step(state, d, phase)
        steps += 1
        if b is not None:
            out.append(b)
    return tuple(out)


def eval_exact_rational(
    machine, w: Lasso, max_periods: int | None = None, stats: dict | None = None
) -> tuple[Lasso, Fraction]:
    """Exact output lasso and value of a deterministic machine on w.

    Runs the machine on prefix . period^omega recording the state at
    every period boundary past the delay+prefix; on the first repeated
    state the output splits into pre-cycle and cycle parts.  Terminates
    within delay + |prefix| + (states + 1) * |period| input digits by
    the pigeonhole principle; ``max_periods`` is the safety net for
    machines whose state count is not known up front.  ``stats``, when
    given, receives the digits consumed and boundary states visited.
    """
    delay = machine.delay
    prefix, period = w.prefix, w.period
    m = len(period)
    state = machine.initial_state
    steps = 0
    out: list[int] = []

    def feed(d):
        nonlocal state, steps
        phase = "delay" if steps < delay else "run"
        b, state = machine.step(state, d, phase)
        steps += 1
        if b is not None:
            out.append(b)

    for d in prefix:
        feed(d)
    # key the boundary configuration on (state, phase); the phase component
    # is only live while the delay is draining, so repeats always happen in
    # the run phase and the cycle emits at least one digit
    seen: dict[Hashable, tuple[int, int]] = {}
    periods = 0
    if max_periods is None:
        n_states = getattr(machine, "n_states", None)
        max_periods = (n_states + 1) if n_states else 1 << 20
    while True:
        key = (state, min(steps, delay))
        if key in seen:
            break
        seen[key] = (len(out), steps)
        for d in period:
            feed(d)
        periods += 1
        if periods > max_periods:
            raise NonTermination(
                f"no state repeat after {periods} periods (bound {max_periods})"
            )
    cut, _ = seen[key]
    if stats is not None:
        stats["digits"] = steps
        stats["boundary_states"] = len(seen)
        stats["periods"] = periods
    eta, rho = tuple(out[:cut]), tuple(out[cut:])
    assert rho, "cycle detected during delay phase"
    alphabet = SIGNED if any(
        d == -1 for d in machine.output_alphabet
    ) else BINARY
    out_lasso = Lasso(eta, rho, alphabet)
    head = value_signed(eta) if alphabet == SIGNED else value_binary(eta)
    tail = value_signed(rho) if alphabet == SIGNED else value_binary(rho)
    value = head + Fraction(1, 1 << len(eta)) * tail / (1 - Fraction(1, 1 << len(rho)))
    return out_lasso, value


# ---------------------------------------------------------------------------
# grid checking harness


def continuity_probe(machine, j0: int, grid_depth: int, slack: int = 4) -> bool:
    """Empirical modulus per the continuity argument: inputs within
    2^-(j0 + delay + slack) of each other give outputs within 2^-j0."""
    from .analysis import modulus_probe

    j1 = modulus_probe(machine, j0=j0, grid_depth=grid_depth)
    return j1 is not None and j1 <= j0 + machine.delay + slack


def computes_on_grid(machine, oracle, depth: int, n: int, monitor=None) -> bool:
    """Does the machine compute ``oracle`` on all dyadics of the given depth?

    For every dyadic x with denominator 2^depth and every binary
    representation of x: at least one run survives n + delay steps, and
    every live output nu satisfies |value(nu) - oracle(x)| <= 2^-(n-1) + 2^-n.
    """
    tol = Fraction(1, 1 << (n - 1)) + Fraction(1, 1 << n)
    for k in range(0, (1 << depth) + 1):
        x = Fraction(k, 1 << depth)
        fx = oracle(x)
        for rep in binary_expansions(x):
            digits = rep.head(n + machine.delay)
            rs = run_on_word(machine, digits, monitor)
            if not rs.runs:
                return False
            for out in rs.outputs():
                if abs(value_binary(out) - fx) > tol:
                    return False
    return True


def lasso_input_digits(w: Lasso, n: int) -> Iterator[int]:
    return islice(w.digits(), n)
