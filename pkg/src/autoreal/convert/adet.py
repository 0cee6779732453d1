"""Deterministic signed-binary transducer simulating the two-run binary
transducer, with delay three larger.

After n output digits and n + delay + 3 input digits eta, the state
holds: the last four bits of Dy(eta); the relative position iota of the
two shadow outputs; the twin-run pair of the simulated machine on
Dy(eta) at output level n; the same pair on Dy(eta * (-1)); and any
output digits already committed by a collapse correction.  Dy(w) is the
binary word for max(value(w), 0); the input must be sanitized so that
its first nonzero digit is 1.

The output digit mirrors the simulated transition type: parallel
extension writes 0, a left-side split writes -1, a right-side split
writes 1.  When the input digit -1 arrives while iota is nonzero the
machine emits the collapse correction 1^k or (-1)^k (k <= 3) found by
stepping the minus-side pair ahead, then stays silent while the
committed digits drain.
"""

from __future__ import annotations

from ..digits import dy
from .ahat import HatTransducer, TwinPair, T1, T2, T3
from .monitors import ClaimMonitor, InvariantViolation

_STRAIGHT = ((0, 0, 0, 0), (1, 0, 0, 0))  # borrow escapes the 4-bit window
_OUT_FOR_TYPE = {T1: 0, T2: -1, T3: 1}


def ntrans_to_det_signed(ahat: HatTransducer,
                         monitor: ClaimMonitor | None = None) -> "SignedDetTransducer":
    """Deterministic signed-binary transducer from the two-run machine."""
    return SignedDetTransducer(ahat, monitor=monitor)


class SignedDetTransducer:
    """Deterministic transducer, signed input and output, delay+3."""

    input_alphabet = (-1, 0, 1)
    output_alphabet = (-1, 0, 1)

    def __init__(self, ahat: HatTransducer, monitor: ClaimMonitor | None = None):
        self.ahat = ahat
        self.delay = ahat.delay + 3
        self.monitor = monitor

    @property
    def initial_state(self):
        return ("boot", ())

    def initial_states(self) -> frozenset:
        return frozenset([self.initial_state])

    # -- deterministic step protocol -----------------------------------------

    def step(self, state, d: int, phase: str = "run"):
        if state[0] == "boot":
            buf = state[1] + (d,)
            D = self.ahat.delay
            if len(buf) < D + 4:
                return None, ("boot", buf)
            eta = buf
            plus_word = dy(eta)
            minus_word = dy(eta + (-1,))
            delta = plus_word[-4:]
            plus = TwinPair.boot(self.ahat, plus_word[: D + 1])
            minus = TwinPair.boot(self.ahat, minus_word[: D + 1])
            zero = not any(eta)
            if self.monitor is not None:
                self.monitor.boot()
            return 1, ("run", delta, 0, plus, minus, (), zero)
        _, delta, iota, plus, minus, pending, zero = state
        emit, state2 = self._advance(delta, iota, plus, minus, pending, zero, d)
        return emit, state2

    def transitions_from(self, state, symbol, phase: str):
        out, nxt = self.step(state, symbol, phase)
        return ((out, nxt),)

    # -- the five-row transition table ----------------------------------------

    def _advance(self, delta, iota, plus, minus, pending, zero, d: int):
        ahat = self.ahat
        mon = self.monitor
        zero2 = zero and d == 0
        if d == 1:
            delta2 = delta[1:] + (1,)
            new_plus, t_plus = TwinPair.step(ahat, plus, delta2[0])
            new_minus, t_minus = new_plus, t_plus
            iota2 = 0
            digit, base = _OUT_FOR_TYPE[t_plus], "plus"
        elif d == 0:
            delta2 = delta[1:] + (0,)
            new_plus, t_plus = TwinPair.step(ahat, plus, delta2[0])
            if zero:
                # value still 0: the minus word is clamped, no borrow exists
                new_minus, t_minus = new_plus, t_plus
            else:
                b_minus = 1 if delta in _STRAIGHT else dy(delta2 + (-1,))[0]
                new_minus, t_minus = TwinPair.step(ahat, minus, b_minus)
            iota2 = 2 * iota + _OUT_FOR_TYPE[t_minus] - _OUT_FOR_TYPE[t_plus]
            if iota2 not in (-1, 0, 1):
                raise InvariantViolation(
                    f"relative position {iota2} outside one ulp"
                )
            digit, base = _OUT_FOR_TYPE[t_plus], "split"
        elif d == -1:
            if zero:
                raise ValueError("digit -1 while the value is still zero; "
                                 "sanitize the input stream first")
            if delta in _STRAIGHT:
                delta2 = (1, 1, 1, 1)
            else:
                delta2 = dy(delta + (-1,))[1:]
            if iota == 0:
                new_plus, t_plus = TwinPair.step(ahat, minus, delta2[0])
                new_minus, t_minus = new_plus, t_plus
                iota2 = 0
                digit, base = _OUT_FOR_TYPE[t_plus], "minus"
            else:
                if pending:
                    raise InvariantViolation("collapse burst while a "
                                             "correction is still draining")
                gamma, minus_types = self._collapse(iota, minus, delta2)
                new_plus, t_plus = TwinPair.step(ahat, minus, delta2[0])
                new_minus, t_minus = new_plus, t_plus
                iota2 = 0
                if mon is not None:
                    mon.on_burst(gamma, minus_types)
                    mon.on_step(minus_types[0], minus_types[0], iota2, "minus")
                return gamma[0], ("run", delta2, iota2, new_plus, new_minus,
                                  gamma[1:], False)
        else:
            raise ValueError(f"bad signed digit {d}")
        if mon is not None:
            mon.on_step(t_plus, t_minus, iota2, base)
            if t_plus in (T2, T3):
                mon.on_split()
        if pending:
            # a committed correction digit drains; this step's own digit
            # was already accounted for by the burst that committed it
            return pending[0], ("run", delta2, iota2, new_plus, new_minus,
                                pending[1:], zero2)
        return digit, ("run", delta2, iota2, new_plus, new_minus, (), zero2)

    def _collapse(self, iota: int, minus, delta2):
        """The correction digits 1^k / (-1)^k, k <= 3, from the minus side."""
        ahat = self.ahat
        want = T2 if iota == 1 else T3
        forbid = T3 if iota == 1 else T2
        pair = minus
        types: list[int] = []
        for k in range(1, 4):
            pair, t = TwinPair.step(ahat, pair, delta2[k - 1] if k <= 3 else 0)
            types.append(t)
            if t == want:
                return ((1,) * k if iota == 1 else (-1,) * k), types
            if t == forbid:
                break
        raise InvariantViolation(
            f"collapse digits not in the seven-element set (iota={iota}, "
            f"types={types})"
        )
