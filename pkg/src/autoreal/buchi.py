"""Buchi automata over finite alphabets with exact lasso acceptance.

Graph automata of functions use the product alphabet {0,1}x{0,1}: one
symbol carries one input bit and one output bit.  Acceptance of
ultimately periodic words is decided exactly on the finite graph of
(state, period position) pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable

from .digits import BINARY, Lasso, PRODUCT

GRAPH_ALPHABET = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class BuchiAutomaton:
    """Nondeterministic Buchi automaton with integer states."""

    n_states: int
    alphabet: tuple
    initial: frozenset
    accepting: frozenset
    transitions: tuple  # triples (src, symbol, dst)
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        idx: dict[tuple, list[int]] = {}
        for s, a, t in self.transitions:
            if not (0 <= s < self.n_states and 0 <= t < self.n_states):
                raise ValueError(f"transition endpoint out of range: {(s, a, t)}")
            if a not in self.alphabet:
                raise ValueError(f"symbol {a!r} not in alphabet")
            idx.setdefault((s, a), []).append(t)
        for bad in (self.initial | self.accepting) - set(range(self.n_states)):
            raise ValueError(f"state {bad} out of range")
        object.__setattr__(self, "_index", {k: tuple(v) for k, v in idx.items()})

    def successors(self, state: int, symbol) -> tuple[int, ...]:
        return self._index.get((state, symbol), ())

    def step_set(self, states: Iterable[int], symbol) -> frozenset:
        out = set()
        for s in states:
            out.update(self.successors(s, symbol))
        return frozenset(out)

    def is_graph_automaton(self) -> bool:
        return set(self.alphabet) == set(GRAPH_ALPHABET)

    def to_json(self) -> dict:
        return {
            "states": self.n_states,
            "alphabet": [list(a) if isinstance(a, tuple) else a for a in self.alphabet],
            "initial": sorted(self.initial),
            "accepting": sorted(self.accepting),
            "transitions": [
                [s, list(a) if isinstance(a, tuple) else a, t]
                for s, a, t in self.transitions
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BuchiAutomaton":
        conv = lambda a: tuple(a) if isinstance(a, list) else a
        return cls(
            n_states=data["states"],
            alphabet=tuple(conv(a) for a in data["alphabet"]),
            initial=frozenset(data["initial"]),
            accepting=frozenset(data["accepting"]),
            transitions=tuple((s, conv(a), t) for s, a, t in data["transitions"]),
        )


@dataclass(frozen=True)
class DetBuchi:
    """Deterministic total Buchi automaton."""

    n_states: int
    alphabet: tuple
    initial: int
    accepting: frozenset
    delta: dict = field(compare=False)  # (state, symbol) -> state

    def __post_init__(self):
        for s in range(self.n_states):
            for a in self.alphabet:
                if (s, a) not in self.delta:
                    raise ValueError(f"delta not total at {(s, a)}")

    def step(self, state: int, symbol) -> int:
        return self.delta[(state, symbol)]

    def is_accepting(self, state: int) -> bool:
        return state in self.accepting

    def to_json(self) -> dict:
        return {
            "states": self.n_states,
            "alphabet": [list(a) if isinstance(a, tuple) else a for a in self.alphabet],
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [
                [s, list(a) if isinstance(a, tuple) else a, t]
                for (s, a), t in sorted(self.delta.items(), key=str)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DetBuchi":
        conv = lambda a: tuple(a) if isinstance(a, list) else a
        delta = {(s, conv(a)): t for s, a, t in data["transitions"]}
        return cls(
            n_states=data["states"],
            alphabet=tuple(conv(a) for a in data["alphabet"]),
            initial=data["initial"],
            accepting=frozenset(data["accepting"]),
            delta=delta,
        )


def interleave(x: Lasso, y: Lasso) -> Lasso:
    """Pair two binary lassos positionwise into a product-alphabet lasso."""
    px, py = len(x.prefix), len(y.prefix)
    cx, cy = len(x.period), len(y.period)
    pre = max(px, py)
    per = cx * cy // _gcd(cx, cy)
    prefix = tuple((x.digit(i), y.digit(i)) for i in range(pre))
    period = tuple((x.digit(pre + i), y.digit(pre + i)) for i in range(per))
    return Lasso(prefix, period, PRODUCT)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def accepts_lasso(aut: BuchiAutomaton, w: Lasso, initial=None) -> bool:
    """Exact omega-acceptance of prefix . period^omega.

    After consuming the prefix, search the finite graph on (state,
    period position) nodes for a reachable cycle through an accepting
    state: one forward reachability pass, then one cycle pass per
    accepting candidate.
    """
    for sym in w.prefix:
        if sym not in aut.alphabet:
            raise ValueError(f"symbol {sym!r} not in alphabet")
    cur = frozenset(aut.initial if initial is None else initial)
    for sym in w.prefix:
        cur = aut.step_set(cur, sym)
        if not cur:
            return False
    period = w.period
    m = len(period)
    for sym in period:
        if sym not in aut.alphabet:
            raise ValueError(f"symbol {sym!r} not in alphabet")

    start = {(s, 0) for s in cur}
    reach = set(start)
    stack = list(start)
    succ: dict[tuple, list[tuple]] = {}
    while stack:
        node = stack.pop()
        s, i = node
        nxt = [(t, (i + 1) % m) for t in aut.successors(s, period[i])]
        succ[node] = nxt
        for v in nxt:
            if v not in reach:
                reach.add(v)
                stack.append(v)
                succ.setdefault(v, None)
    # fill successor lists for nodes discovered last
    for node in reach:
        if succ.get(node) is None:
            s, i = node
            succ[node] = [(t, (i + 1) % m) for t in aut.successors(s, period[i])]

    for node in reach:
        if node[0] not in aut.accepting:
            continue
        # can node reach itself through >= 1 step?
        seen = set(succ[node])
        frontier = list(seen)
        if node in seen:
            return True
        while frontier:
            v = frontier.pop()
            for u in succ[v]:
                if u == node:
                    return True
                if u not in seen:
                    seen.add(u)
                    frontier.append(u)
    return False


def accepts_lasso_det(det, w: Lasso, initial=None) -> bool:
    """Lasso acceptance for deterministic automata (DetBuchi or lazy)."""
    state = det.initial if initial is None else initial
    for sym in w.prefix:
        state = det.step(state, sym)
    m = len(w.period)
    seen: dict[tuple, int] = {}
    trail: list = []
    i = 0
    while (state, i % m) not in seen:
        seen[(state, i % m)] = len(trail)
        trail.append(state)
        state = det.step(state, w.period[i % m])
        i += 1
    start = seen[(state, i % m)]
    return any(det.is_accepting(s) for s in trail[start:])


def normalize_repeat_accepting(aut: BuchiAutomaton) -> BuchiAutomaton:
    """The A1 construction: track the accepting states visited so far.

    States are pairs (s, V); a run ends accepting iff its final state is
    accepting and already occurred along the run.  Tracking only visited
    *accepting* states is behaviourally identical because acceptance of
    (s, V) consults V only at accepting s.  Accepts the same
    omega-language as the input.
    """
    F = aut.accepting
    init = [(s, frozenset()) for s in sorted(aut.initial)]
    index: dict[tuple, int] = {}
    order: list[tuple] = []

    def intern(st) -> int:
        if st not in index:
            index[st] = len(order)
            order.append(st)
        return index[st]

    for st in init:
        intern(st)
    transitions = []
    i = 0
    while i < len(order):
        s, V = order[i]
        src = i
        V2 = (V | {s}) & F
        for a in aut.alphabet:
            for t in aut.successors(s, a):
                transitions.append((src, a, intern((t, V2))))
        i += 1
    accepting = frozenset(
        i for i, (s, V) in enumerate(order) if s in F and s in V
    )
    return BuchiAutomaton(
        n_states=len(order),
        alphabet=aut.alphabet,
        initial=frozenset(intern(st) for st in init),
        accepting=accepting,
        transitions=tuple(transitions),
    )


class StateCapExceeded(RuntimeError):
    pass


class LazySubsetGraph:
    """Lazy subset construction over a BuchiAutomaton.

    States are frozensets of source states; the empty set is the
    absorbing dead state.  A macro state is accepting iff it contains an
    accepting source state.  Memoized transitions make this usable as
    the deterministic automaton behind tree and transducer machinery.
    """

    def __init__(self, aut: BuchiAutomaton, state_cap: int = 1 << 16):
        self.aut = aut
        self.alphabet = aut.alphabet
        self.initial = frozenset(aut.initial)
        self.state_cap = state_cap
        self._delta: dict[tuple, frozenset] = {}
        self._seen: set[frozenset] = {self.initial}

    def step(self, state: frozenset, symbol) -> frozenset:
        key = (state, symbol)
        out = self._delta.get(key)
        if out is None:
            out = self.aut.step_set(state, symbol)
            self._delta[key] = out
            if out not in self._seen:
                self._seen.add(out)
                if len(self._seen) > self.state_cap:
                    raise StateCapExceeded(
                        f"subset construction exceeded cap {self.state_cap}"
                    )
        return out

    def is_accepting(self, state: frozenset) -> bool:
        return bool(state & self.aut.accepting)


def determinize_subsets(aut: BuchiAutomaton, state_cap: int = 1 << 16) -> DetBuchi:
    """Reachable-only subset automaton, materialized.

    Macro states accepting iff they contain an accepting input state.
    For automata arising from continuous functions this preserves lasso
    acceptance (apply to ``normalize_repeat_accepting`` output).
    """
    lazy = LazySubsetGraph(aut, state_cap)
    index: dict[frozenset, int] = {lazy.initial: 0}
    order: list[frozenset] = [lazy.initial]
    delta: dict[tuple, int] = {}
    i = 0
    while i < len(order):
        X = order[i]
        for a in aut.alphabet:
            Y = lazy.step(X, a)
            if Y not in index:
                index[Y] = len(order)
                order.append(Y)
                if len(order) > state_cap:
                    raise StateCapExceeded(f"state cap {state_cap} exceeded")
            delta[(i, a)] = index[Y]
        i += 1
    accepting = frozenset(i for i, X in enumerate(order) if lazy.is_accepting(X))
    return DetBuchi(
        n_states=len(order),
        alphabet=aut.alphabet,
        initial=0,
        accepting=accepting,
        delta=delta,
    )


def determinize(aut: BuchiAutomaton, state_cap: int = 1 << 16) -> DetBuchi:
    """The composite A2 = subsets(A1) of the determinization lemma."""
    return determinize_subsets(normalize_repeat_accepting(aut), state_cap)


# ---------------------------------------------------------------------------
# pruned output trees


class OutputTree:
    """The pruned tree T_sigma of output prefixes still worth extending.

    Level i holds output words tau (|tau| = i) labelled by the state the
    deterministic graph automaton reaches after scanning sigma|i (+) tau;
    whenever two same-length surviving nodes share a label both are
    removed with their subtrees, so surviving labels at a level are
    pairwise distinct.
    """

    def __init__(self, det, sigma: tuple[int, ...], depth: int | None = None):
        if depth is None:
            depth = len(sigma)
        if depth > len(sigma):
            raise ValueError("depth exceeds |sigma|")
        self.sigma = sigma
        self.depth = depth
        root_label = det.initial if hasattr(det, "initial") else det.initial_state
        self.levels: list[dict[tuple[int, ...], Hashable]] = [{(): root_label}]
        for i in range(depth):
            prev = self.levels[-1]
            cand: dict[tuple[int, ...], Hashable] = {}
            counts: dict[Hashable, int] = {}
            for tau, lab in prev.items():
                for b in (0, 1):
                    lab2 = det.step(lab, (sigma[i], b))
                    cand[tau + (b,)] = lab2
                    counts[lab2] = counts.get(lab2, 0) + 1
            self.levels.append(
                {tau: lab for tau, lab in cand.items() if counts[lab] == 1}
            )
        # extendible = has a descendant surviving at the deepest level
        self.extendible: list[set[tuple[int, ...]]] = [set() for _ in self.levels]
        self.extendible[depth] = set(self.levels[depth])
        for i in range(depth - 1, -1, -1):
            up = self.extendible[i + 1]
            self.extendible[i] = {
                tau for tau in self.levels[i]
                if tau + (0,) in up or tau + (1,) in up
            }

    def nodes(self, level: int) -> dict[tuple[int, ...], Hashable]:
        return self.levels[level]

    def label(self, tau: tuple[int, ...]) -> Hashable:
        return self.levels[len(tau)][tau]

    def is_extendible(self, tau: tuple[int, ...]) -> bool:
        return tau in self.extendible[len(tau)]

    def contains_path(self, beta: tuple[int, ...]) -> bool:
        """Does beta|i survive at every level i <= depth?"""
        return all(beta[:i] in self.levels[i] for i in range(min(len(beta), self.depth) + 1))

    def max_incomparable_extendible(self) -> int:
        """Largest antichain of extendible nodes (levelwise max suffices:
        same-level distinct nodes are always incomparable)."""
        return max(len(self.extendible[i]) for i in range(self.depth + 1))


def output_tree(det, sigma: tuple[int, ...], depth: int | None = None) -> OutputTree:
    return OutputTree(det, sigma, depth)


# ---------------------------------------------------------------------------
# DOT export


def _sym_label(a) -> str:
    if isinstance(a, tuple):
        return "".join(str(x) for x in a)
    return str(a)


def to_dot(aut) -> str:
    """GraphViz digraph; accepting states doubled."""
    lines = ["digraph {", "  rankdir=LR;", '  node [shape=circle];']
    if isinstance(aut, DetBuchi):
        initial = [aut.initial]
        trans = [(s, a, t) for (s, a), t in sorted(aut.delta.items(), key=str)]
        accepting = aut.accepting
        n = aut.n_states
    else:
        initial = sorted(aut.initial)
        trans = list(aut.transitions)
        accepting = aut.accepting
        n = aut.n_states
    for s in range(n):
        shape = "doublecircle" if s in accepting else "circle"
        lines.append(f'  q{s} [shape={shape} label="{s}"];')
    for i, s in enumerate(initial):
        lines.append(f"  start{i} [shape=point];")
        lines.append(f"  start{i} -> q{s};")
    grouped: dict[tuple[int, int], list[str]] = {}
    for s, a, t in trans:
        grouped.setdefault((s, t), []).append(_sym_label(a))
    for (s, t), labels in sorted(grouped.items()):
        lab = ",".join(labels)
        lines.append(f'  q{s} -> q{t} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
