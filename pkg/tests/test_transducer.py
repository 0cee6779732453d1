import itertools
from fractions import Fraction

import pytest

from autoreal.corpus import (
    broken_transducer,
    constant_zero_fst,
    copier_fst,
    counterexample_fn,
    counterexample_transducer,
)
from autoreal.digits import (
    Lasso,
    SIGNED,
    binary_expansions,
    lasso,
    value_binary,
    value_lasso,
)
from autoreal.transducer import (
    DeadRun,
    Fst,
    computes_on_grid,
    eval_exact_rational,
    eval_stream,
    initial_runs,
    run_on_word,
    step_all,
)

F = Fraction


def test_constant_writer_single_run():
    T = constant_zero_fst()
    rs = run_on_word(T, (1, 0, 1, 1, 0))
    assert len(rs) == 1
    assert rs.outputs() == {(0, 0, 0, 0, 0)}


def test_copier_delay_zero():
    T = copier_fst(0)
    rs = run_on_word(T, (1, 0, 1))
    assert rs.outputs() == {(1, 0, 1)}


def test_copier_delay_contract():
    D = 3
    T = copier_fst(D)
    rs = initial_runs(T)
    for i, d in enumerate((1, 0, 1, 1, 0, 0)):
        rs = step_all(T, rs, d)
        for _, out in rs.runs:
            assert len(out) == max(0, rs.steps - D)
    assert rs.outputs() == {(1, 0, 1)}


def test_run_dies_without_transitions():
    # two-state machine where input 1 has no outgoing edge
    T = Fst(
        n_states=1,
        input_alphabet=(0, 1),
        output_alphabet=(0, 1),
        initial=frozenset([0]),
        delay=0,
        transitions=((0, 0, 0, 0),),
    )
    rs = run_on_word(T, (0, 0, 1))
    assert len(rs) == 0


def test_counterexample_two_runs_then_kill():
    T = counterexample_transducer()
    rs = run_on_word(T, (0, 0, 0))
    assert len(rs) == 2  # dual prefixes still alive on zeros
    outs = rs.outputs()
    assert outs == {(1, 0, 0), (0, 1, 1)}


def test_eval_stream_copier():
    T = copier_fst(0)
    det_like = _DetWrapper(T)
    out = eval_stream(det_like, iter((1, 0, 1, 1, 0)), 5)
    assert out == (1, 0, 1, 1, 0)


class _DetWrapper:
    """Deterministic view of an Fst with functional transitions."""

    def __init__(self, fst):
        self.fst = fst
        self.delay = fst.delay
        self.input_alphabet = fst.input_alphabet
        self.output_alphabet = fst.output_alphabet
        (self.initial_state,) = fst.initial

    def step(self, state, symbol, phase="run"):
        moves = self.fst.transitions_from(state, symbol, phase)
        if not moves:
            raise DeadRun(f"dead at {(state, symbol)}")
        assert len(moves) == 1
        return moves[0]


def test_eval_exact_rational_copier():
    det = _DetWrapper(copier_fst(0))
    out, v = eval_exact_rational(det, lasso("01", "10"))
    assert v == value_lasso(lasso("01", "10"))
    assert len(out.period) <= 4


def test_eval_exact_rational_on_zeros_pigeonhole():
    det = _DetWrapper(constant_zero_fst())
    out, v = eval_exact_rational(det, Lasso((), (0,), SIGNED))
    assert v == 0
    assert len(out.period) <= det.fst.n_states


def test_output_length_law():
    T = counterexample_transducer()
    rs = initial_runs(T)
    for d in (0, 1, 1, 0, 1, 0, 0):
        rs = step_all(T, rs, d)
        for _, out in rs.runs:
            assert len(out) == rs.steps - T.delay


def test_agreement_law_outputs_close():
    # all live outputs of a computed function stay within 2 ulps
    T = counterexample_transducer()
    for bits in itertools.product((0, 1), repeat=8):
        rs = run_on_word(T, bits)
        outs = [value_binary(o) for o in rs.outputs()]
        assert outs, bits
        n = len(bits) - T.delay
        assert max(outs) - min(outs) <= F(2, 1 << n)


def test_computes_on_grid_counterexample():
    T = counterexample_transducer()
    f = counterexample_fn()
    assert computes_on_grid(T, f, 6, 8)


def test_computes_on_grid_rejects_wrong_oracle():
    T = constant_zero_fst()
    assert not computes_on_grid(T, lambda x: F(1, 2), 3, 6)
    assert computes_on_grid(T, lambda x: F(0), 3, 6)


def test_fst_json_round_trip():
    T = counterexample_transducer()
    assert Fst.from_json(T.to_json()) == T


def test_broken_transducer_not_representation_independent():
    T = broken_transducer()
    hi = run_on_word(T, lasso("1", "0").head(6)).outputs()
    lo = run_on_word(T, lasso("0", "1").head(6)).outputs()
    assert {value_binary(o) for o in hi} != {value_binary(o) for o in lo}
