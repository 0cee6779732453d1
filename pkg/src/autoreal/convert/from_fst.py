"""Graph automaton of a nondeterministic binary transducer.

States (s, X) with X in {L, R, E} simulate the transducer while
tracking whether the claimed output string sits exactly on a run's
output (E), or hangs one ulp left/right of it riding a 01^omega /
10^omega tail (L / R).  All simulation states accept; a single
non-accepting sink absorbs mismatches.  A positive delay is eliminated
first by scaling the output: the returned automaton accepts the graph
of 2^-delay * f, and the scale exponent is reported alongside.
"""

from __future__ import annotations

from ..buchi import GRAPH_ALPHABET, BuchiAutomaton
from ..transducer import Fst

E, LEFT, RIGHT = "E", "L", "R"


def _delay_free(machine: Fst) -> Fst:
    """Equivalent delay-0 transducer computing 2^-delay * f."""
    if machine.delay == 0:
        return machine
    D = machine.delay
    # states (s, k): k inputs consumed, capped at D; the first D steps
    # follow the delay relation writing the 0s of the scaled output
    index: dict[tuple, int] = {}
    order: list[tuple] = []

    def intern(st):
        if st not in index:
            index[st] = len(order)
            order.append(st)
        return index[st]

    initial = [intern((s, 0)) for s in sorted(machine.initial)]
    trans: list[tuple] = []
    i = 0
    while i < len(order):
        s, k = order[i]
        for a in machine.input_alphabet:
            if k < D:
                for _, t in machine.transitions_from(s, a, "delay"):
                    trans.append((i, a, 0, intern((t, k + 1))))
            else:
                for b, t in machine.transitions_from(s, a, "run"):
                    trans.append((i, a, b, intern((t, D))))
        i += 1
    return Fst(
        n_states=len(order),
        input_alphabet=machine.input_alphabet,
        output_alphabet=machine.output_alphabet,
        initial=frozenset(initial),
        delay=0,
        transitions=tuple(trans),
    )


def ntrans_to_buchi(machine: Fst) -> tuple[BuchiAutomaton, int]:
    """The A0 construction; returns (graph automaton, output scale exponent).

    The automaton accepts x (+) y iff 2^-scale * f(x) = y where f is the
    function the transducer computes.
    """
    if set(machine.input_alphabet) != {0, 1} or set(machine.output_alphabet) != {0, 1}:
        raise ValueError("binary input and output alphabets required")
    scale = machine.delay
    m = _delay_free(machine)

    index: dict = {}
    order: list = []

    def intern(st):
        if st not in index:
            index[st] = len(order)
            order.append(st)
        return index[st]

    sink = intern("sink")
    initial = [intern((s, E)) for s in sorted(m.initial)]
    transitions: list[tuple] = [(sink, ab, sink) for ab in GRAPH_ALPHABET]
    i = 1  # order[0] is the sink
    while i < len(order):
        s, mode = order[i]
        src = i
        for a, b in GRAPH_ALPHABET:
            moves = m.transitions_from(s, a, "run")
            writes = {out for out, _ in moves}
            if mode == LEFT:
                # the run writes 0s while the claimed output shows 1s
                if b == 1:
                    for out, t in moves:
                        if out == 0:
                            transitions.append((src, (a, b), intern((t, LEFT))))
                if b == 0 or 1 in writes:
                    transitions.append((src, (a, b), sink))
            elif mode == RIGHT:
                if b == 0:
                    for out, t in moves:
                        if out == 1:
                            transitions.append((src, (a, b), intern((t, RIGHT))))
                if b == 1 or 0 in writes:
                    transitions.append((src, (a, b), sink))
            else:
                for out, t in moves:
                    if out == b:
                        transitions.append((src, (a, b), intern((t, E))))
                    elif b == 0:  # run wrote 1, claim shows 0: go left
                        transitions.append((src, (a, b), intern((t, LEFT))))
                    else:        # run wrote 0, claim shows 1: go right
                        transitions.append((src, (a, b), intern((t, RIGHT))))
        i += 1
    accepting = frozenset(j for j, st in enumerate(order) if st != "sink")
    return (
        BuchiAutomaton(
            n_states=len(order),
            alphabet=GRAPH_ALPHABET,
            initial=frozenset(initial),
            accepting=accepting,
            transitions=tuple(dict.fromkeys(transitions)),
        ),
        scale,
    )
