from fractions import Fraction

import pytest

from autoreal.convert import ClaimMonitor, build_pipeline
from autoreal.corpus import SupportPredicate, f_z_pwl
from autoreal.pwl import constant, identity, tooth


@pytest.fixture(scope="session")
def pipelines():
    """The four corpus conversion chains, built once with monitors on."""
    out = {}
    for name, f in (
        ("constant", constant(0)),
        ("identity", identity()),
        ("tooth", tooth(Fraction(1, 4), Fraction(1, 2), Fraction(1, 8))),
        ("fz", f_z_pwl(SupportPredicate.finite(3))),
    ):
        mon = ClaimMonitor(name)
        out[name] = build_pipeline(f, monitor=mon)
    return out
