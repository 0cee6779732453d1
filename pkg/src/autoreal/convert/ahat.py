"""The two-run nondeterministic binary transducer over a deterministic
graph automaton (range inside (1/4, 1/2)).

State per live run: the frontier X of pruned-tree labels at the current
output level, the two-bit chain forecast gamma, the side flag L/R, and
the last ``delay`` input bits.  Exactly two twin runs are live at any
time; transitions follow the six-row table keyed on (side, gamma,
gamma'): a {00,11} forecast extends both runs in parallel, a {01,10}
forecast splits one side and kills the other.
"""

from __future__ import annotations

from ..digits import check_binary
from .trees import DelayTooSmall, chain_gamma, discover_delay, prune_step

L, R = "L", "R"
T1, T2, T3 = 1, 2, 3

PARALLEL = ((0, 0), (1, 1))
SPLIT = ((0, 1), (1, 0))


class RangeAssumptionError(RuntimeError):
    """The initial forecast was not 01: the range is not inside (1/4, 1/2)."""


class HatTransducer:
    """Nondeterministic binary transducer with fixed delay.

    Implements the run protocol of :mod:`autoreal.transducer`
    (``initial_states`` / ``transitions_from``); states are lazy, the
    chain searches behind the forecasts are memoized per window.
    """

    input_alphabet = (0, 1)
    output_alphabet = (0, 1)

    def __init__(self, det, delay: int | None = None, chain_nodes: int | None = None,
                 delay_cap: int = 24):
        self.det = det
        if delay is None or chain_nodes is None:
            found, nodes = discover_delay(det, cap=delay_cap,
                                          chain_nodes=chain_nodes)
            delay = found if delay is None else delay
            chain_nodes = nodes
            if delay < found:
                raise DelayTooSmall(f"delay {delay} below discovered minimum {found}")
        self.delay = delay
        self.chain_nodes = chain_nodes
        self._nu_cache: dict[tuple, tuple[int, int]] = {}

    # -- forecasts ----------------------------------------------------------

    def nu(self, window: tuple[int, ...], X: frozenset) -> tuple[int, int]:
        key = (window, X)
        g = self._nu_cache.get(key)
        if g is None:
            g = chain_gamma(self.det, window, X, self.chain_nodes)
            self._nu_cache[key] = g
        return g

    # -- run protocol --------------------------------------------------------

    def initial_states(self) -> frozenset:
        return frozenset([("boot", ())])

    def transitions_from(self, state, a: int, phase: str = "run"):
        if state[0] == "boot":
            buf = state[1]
            if len(buf) < self.delay:
                return ((None, ("boot", buf + (a,))),)
            sigma = buf + (a,)  # first delay+1 input bits
            root = frozenset([self.det.initial])
            gamma1 = self.nu(sigma[: self.delay], root)
            if gamma1 != (0, 1):
                raise RangeAssumptionError(
                    f"initial forecast {gamma1}; normalize the range first"
                )
            X1 = prune_step(self.det, root, sigma[0])
            w1 = sigma[1:]
            return (
                (0, ("run", X1, (0, 1), L, w1)),
                (1, ("run", X1, (0, 1), R, w1)),
            )
        _, X, gamma, side, w = state
        gamma2 = self.nu(w, X)
        X2 = prune_step(self.det, X, w[0])
        w2 = w[1:] + (a,)
        if gamma2 in PARALLEL:
            if side == L:
                return ((1, ("run", X2, gamma2, L, w2)),)
            return ((0, ("run", X2, gamma2, R, w2)),)
        branches = (
            (0, ("run", X2, gamma2, L, w2)),
            (1, ("run", X2, gamma2, R, w2)),
        )
        if gamma in ((0, 1), (1, 1)):
            return branches if side == L else ()  # T(ii): right run dies
        return branches if side == R else ()      # T(iii): left run dies


def buchi_to_ntrans(det, delay: int | None = None, delay_cap: int = 24) -> HatTransducer:
    """Nondeterministic binary transducer computing the function whose
    graph the deterministic automaton accepts (range inside (1/4,1/2));
    the delay is discovered unless supplied."""
    return HatTransducer(det, delay=delay, delay_cap=delay_cap)


def step_type(gamma: tuple[int, int], gamma2: tuple[int, int]) -> int:
    """Transition type from the stored and fresh forecasts."""
    if gamma2 in PARALLEL:
        return T1
    return T2 if gamma in ((0, 1), (1, 1)) else T3


class TwinPair:
    """The always-two live runs of the hat transducer, as one value.

    Both runs share the frontier, forecast, and window and differ only
    in the side flag, so a pair is (X, gamma, window).  Stepping yields
    the transition type; the pair never dies (the branching side
    replaces the dying one).
    """

    __slots__ = ()

    @staticmethod
    def boot(ahat: HatTransducer, word: tuple[int, ...]) -> tuple:
        """Pair after the hat transducer reads delay+1 bits."""
        D = ahat.delay
        if len(word) < D + 1:
            raise ValueError("need delay+1 bits to boot the pair")
        word = check_binary(word[: D + 1])
        root = frozenset([ahat.det.initial])
        gamma1 = ahat.nu(word[:D], root)
        if gamma1 != (0, 1):
            raise RangeAssumptionError(
                f"initial forecast {gamma1}; normalize the range first"
            )
        X1 = prune_step(ahat.det, root, word[0])
        return (X1, (0, 1), word[1:])

    @staticmethod
    def step(ahat: HatTransducer, pair: tuple, b: int) -> tuple[tuple, int]:
        """Advance the pair one output level on the next input bit b."""
        X, gamma, w = pair
        gamma2 = ahat.nu(w, X)
        ttype = step_type(gamma, gamma2)
        X2 = prune_step(ahat.det, X, w[0])
        return (X2, gamma2, w[1:] + (b,)), ttype
