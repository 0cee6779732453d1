"""End-to-end assembly: PWL function -> graph automaton -> deterministic
graph -> two-run binary transducer -> deterministic signed transducer.

The range is normalized into (1/4, 1/2) by the project-wide affine map
before the graph automaton is built; evaluation helpers undo it.  The
graph automata built from PWL functions have every state accepting
(safety automata), for which the plain reachable subset construction
already preserves the omega-language exactly, so the pipeline
determinizes directly and stays lazy; the visited-set normalization
plus subset composite is exercised separately on the small corpus
automata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..buchi import BuchiAutomaton, LazySubsetGraph
from ..digits import Lasso, SIGNED, canonical_expansion, value_signed
from ..pwl import PwlFunction, denormalize_value, normalize_range
from ..transducer import eval_exact_rational, eval_stream
from .adet import SignedDetTransducer
from .ahat import HatTransducer
from .monitors import ClaimMonitor
from .pwl_graph import pwl_to_buchi


@dataclass
class Pipeline:
    """All artifacts of one conversion chain, sharing one lazy core."""

    source: PwlFunction
    normalized: PwlFunction
    graph: BuchiAutomaton
    det: LazySubsetGraph
    ahat: HatTransducer
    adet: SignedDetTransducer
    monitor: ClaimMonitor = field(default=None)

    @property
    def delay(self) -> int:
        return self.ahat.delay

    def oracle(self, x) -> Fraction:
        """Exact value of the normalized function (what the machines compute)."""
        return self.normalized.eval(x)

    def eval_exact(self, x, denormalize: bool = True) -> Fraction:
        """Exact rational value through the deterministic signed machine."""
        rep = canonical_expansion(Fraction(x))
        signed_in = Lasso(rep.prefix, rep.period, SIGNED)
        _, value = eval_exact_rational(self.adet, signed_in)
        return denormalize_value(value) if denormalize else value

    def eval_digits(self, x, n: int, denormalize: bool = False):
        """n signed output digits; value within 2^-n of the (normalized) value."""
        rep = canonical_expansion(Fraction(x))
        out = eval_stream(self.adet, rep.digits(), n)
        v = value_signed(out)
        return out, (denormalize_value(v) if denormalize else v)


def build_pipeline(
    f: PwlFunction,
    delay: int | None = None,
    delay_cap: int = 24,
    state_cap: int = 1 << 16,
    monitor: ClaimMonitor | None = None,
    normalized: bool = False,
) -> Pipeline:
    """Run the whole chain on a dyadic-breakpoint PWL function."""
    g = f if normalized else normalize_range(f)
    graph = pwl_to_buchi(g)
    det = LazySubsetGraph(graph, state_cap=state_cap)
    ahat = HatTransducer(det, delay=delay, delay_cap=delay_cap)
    adet = SignedDetTransducer(ahat, monitor=monitor)
    return Pipeline(
        source=f,
        normalized=g,
        graph=graph,
        det=det,
        ahat=ahat,
        adet=adet,
        monitor=monitor,
    )
