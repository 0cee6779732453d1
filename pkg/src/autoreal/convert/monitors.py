"""Runtime monitors for the proof-claim invariants of the constructions.

The claims the correctness proofs rest on are checked while machines
run: exactly two live runs with twin-shaped outputs, no three
consecutive one-sided nondeterministic transitions, relative positions
within one ulp, and collapse corrections drawn from the seven-element
set.  A violation is a construction bug, never a tolerance issue, so it
raises immediately.
"""

from __future__ import annotations

from fractions import Fraction

from ..digits import value_binary

T1, T2, T3 = 1, 2, 3
_TYPE_DELTA = {T1: 0, T2: -1, T3: 1}


class InvariantViolation(AssertionError):
    pass


class ClaimMonitor:
    """Collects and checks claim events during one evaluation run.

    Also tracks the absolute values of the two shadow outputs out_R on
    the plus and minus words, which makes the relative-position and
    collapse claims checkable exactly.
    """

    def __init__(self, label: str = ""):
        self.label = label
        self.events = {"steps": 0, "splits": 0, "bursts": 0, "max_burst": 0}
        self._recent_types: list[int] = []
        # shadow values start at out_R = "1" after the boot transition
        self.v_plus: Fraction | None = None
        self.v_minus: Fraction | None = None
        self.position = 0  # output digits accounted for

    # -- A-hat level -------------------------------------------------------

    def observe_runset(self, rs) -> None:
        """Exactly-two-live-runs and twin output shapes (claim (i))."""
        if rs.steps <= rs.delay:
            return
        self.events["steps"] += 1
        if len(rs.runs) != 2:
            raise InvariantViolation(
                f"{self.label}: {len(rs.runs)} live runs at step {rs.steps}"
            )
        out_a, out_b = sorted(rs.outputs(), key=value_binary)
        if len(out_a) != len(out_b):
            raise InvariantViolation(f"{self.label}: unequal output lengths")
        if value_binary(out_b) - value_binary(out_a) != Fraction(1, 1 << len(out_a)):
            raise InvariantViolation(
                f"{self.label}: outputs are not adjacent twins: {out_a} {out_b}"
            )
        j = 0
        while j < len(out_a) and out_a[j] == out_b[j]:
            j += 1
        tail_a, tail_b = out_a[j:], out_b[j:]
        if tail_a and not (
            tail_a[0] == 0 and all(d == 1 for d in tail_a[1:])
            and tail_b[0] == 1 and all(d == 0 for d in tail_b[1:])
        ):
            raise InvariantViolation(
                f"{self.label}: twin tails not 01^k / 10^k: {out_a} {out_b}"
            )

    # -- A_d level ---------------------------------------------------------

    def boot(self) -> None:
        self.v_plus = Fraction(1, 2)
        self.v_minus = Fraction(1, 2)
        self.position = 1

    def on_step(self, t_plus: int, t_minus: int, iota_new: int, base: str) -> None:
        """One A_d output step: shadow values advance by the type deltas.

        ``base`` is "plus" when both pairs advance from the plus pair
        (input digit 1), "minus" when from the minus pair (digit -1),
        "split" when each advances from its own side (digit 0).
        """
        if self.v_plus is None:
            return
        ulp = Fraction(1, 1 << (self.position + 1))
        if base == "plus":
            v = self.v_plus + _TYPE_DELTA[t_plus] * ulp
            self.v_plus = self.v_minus = v
        elif base == "minus":
            v = self.v_minus + _TYPE_DELTA[t_plus] * ulp
            self.v_plus = self.v_minus = v
        else:
            self.v_plus = self.v_plus + _TYPE_DELTA[t_plus] * ulp
            self.v_minus = self.v_minus + _TYPE_DELTA[t_minus] * ulp
        self.position += 1
        if iota_new not in (-1, 0, 1):
            raise InvariantViolation(
                f"{self.label}: relative position {iota_new} outside one ulp"
            )
        if self.v_minus - self.v_plus != iota_new * Fraction(1, 1 << self.position):
            raise InvariantViolation(
                f"{self.label}: iota {iota_new} disagrees with shadow values"
            )
        self._push_type(t_plus)

    def _push_type(self, t: int) -> None:
        """No three consecutive T(ii) nor T(iii) (claim of the collapse set)."""
        self._recent_types.append(t)
        if len(self._recent_types) > 3:
            self._recent_types.pop(0)
        if len(self._recent_types) == 3 and t in (T2, T3) \
                and self._recent_types[0] == self._recent_types[1] == t:
            raise InvariantViolation(
                f"{self.label}: three consecutive T({'ii' if t == T2 else 'iii'})"
            )

    def on_split(self) -> None:
        self.events["splits"] += 1

    def on_burst(self, gamma: tuple[int, ...], minus_types: list[int]) -> None:
        """Collapse correction: gamma within the seven-element set and the
        exact value identity out_R(plus) * gamma = out_R(minus after |gamma|)."""
        self.events["bursts"] += 1
        self.events["max_burst"] = max(self.events["max_burst"], len(gamma))
        if not (1 <= len(gamma) <= 3 and len(set(gamma)) == 1
                and gamma[0] in (-1, 1)):
            raise InvariantViolation(f"{self.label}: collapse digits {gamma}")
        if self.v_plus is None:
            return
        n = self.position
        lhs = self.v_plus
        for i, g in enumerate(gamma, start=1):
            lhs += g * Fraction(1, 1 << (n + i))
        rhs = self.v_minus
        for i, t in enumerate(minus_types, start=1):
            rhs += _TYPE_DELTA[t] * Fraction(1, 1 << (n + i))
        if lhs != rhs:
            raise InvariantViolation(
                f"{self.label}: collapse identity fails: {lhs} != {rhs}"
            )
