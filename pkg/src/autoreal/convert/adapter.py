"""Signed-output to binary-output conversion.

The converter keeps the integer p = 2^k (value read - value written),
which the pending block "b 0...0 vs (b-1) 1...1" confines to [0, 2^lag];
each step it nondeterministically commits the next binary digit, and
runs whose commitment the stream later contradicts die.  Composing it
after a deterministic signed-output machine yields a nondeterministic
binary transducer for the same function.
"""

from __future__ import annotations

_LAG = 2  # binary digits run this far behind the signed input


class SignedToBinary:
    """Nondeterministic signed-to-binary converter with delay 2."""

    input_alphabet = (-1, 0, 1)
    output_alphabet = (0, 1)
    delay = _LAG

    def initial_states(self) -> frozenset:
        return frozenset([("boot", ())])

    def transitions_from(self, state, d: int, phase: str = "run"):
        if state[0] == "boot":
            buf = state[1] + (d,)
            if len(buf) < _LAG:
                return ((None, ("boot", buf)),)
            p = 0
            for x in buf:
                p = 2 * p + x
            if p < 0:
                return ()
            return ((None, ("p", p)),)
        p = state[1]
        out = []
        for b in (0, 1):
            p2 = 2 * p + d - b * (1 << _LAG)
            if 0 <= p2 <= (1 << _LAG):
                out.append((b, ("p", p2)))
        return tuple(out)


def signed_to_binary_adapter() -> SignedToBinary:
    return SignedToBinary()


class ComposedTransducer:
    """Feed one machine's output digits into another machine.

    ``first`` must be deterministic (its unique run drives the
    composition); ``second`` may be nondeterministic.  The composite
    delay is the sum: while ``first`` is silent ``second`` idles.
    """

    def __init__(self, first, second):
        self.first = first
        self.second = second
        self.delay = first.delay + second.delay
        self.input_alphabet = first.input_alphabet
        self.output_alphabet = second.output_alphabet

    def initial_states(self) -> frozenset:
        f0 = self.first.initial_state
        return frozenset(("pair", f0, s) for s in self.second.initial_states())

    def transitions_from(self, state, d: int, phase: str = "run"):
        _, fstate, sstate = state
        y, fstate2 = self.first.step(fstate, d, phase)
        if y is None:
            return ((None, ("pair", fstate2, sstate)),)
        out = []
        for b, sstate2 in self.second.transitions_from(sstate, y, "run"):
            out.append((b, ("pair", fstate2, sstate2)))
        return tuple(out)


def compose_signed_to_binary(machine) -> ComposedTransducer:
    """Binary-output nondeterministic transducer from a signed-output
    deterministic one; every infinite run writes a binary representation
    of the same value."""
    return ComposedTransducer(machine, SignedToBinary())
