"""The constructions: PWL -> Buchi -> deterministic -> transducers."""

from .adapter import compose_signed_to_binary, signed_to_binary_adapter
from .adet import SignedDetTransducer, ntrans_to_det_signed
from .ahat import HatTransducer, RangeAssumptionError, TwinPair, buchi_to_ntrans
from .from_fst import ntrans_to_buchi
from .monitors import ClaimMonitor, InvariantViolation
from .pipeline import Pipeline, build_pipeline
from .pwl_graph import pwl_to_buchi
from .trees import (
    DelayCapExceeded,
    DelayTooSmall,
    chain_gamma,
    discover_delay,
    max_frontier_width,
    prune_step,
    reachable_frontiers,
)

__all__ = [
    "ClaimMonitor",
    "DelayCapExceeded",
    "DelayTooSmall",
    "HatTransducer",
    "InvariantViolation",
    "Pipeline",
    "RangeAssumptionError",
    "SignedDetTransducer",
    "TwinPair",
    "buchi_to_ntrans",
    "build_pipeline",
    "chain_gamma",
    "compose_signed_to_binary",
    "discover_delay",
    "max_frontier_width",
    "ntrans_to_buchi",
    "ntrans_to_det_signed",
    "prune_step",
    "pwl_to_buchi",
    "reachable_frontiers",
    "signed_to_binary_adapter",
]
