import itertools
import random
from fractions import Fraction

import pytest

from autoreal.buchi import LazySubsetGraph, accepts_lasso, interleave
from autoreal.convert import (
    ClaimMonitor,
    HatTransducer,
    SignedDetTransducer,
    TwinPair,
    build_pipeline,
    chain_gamma,
    compose_signed_to_binary,
    discover_delay,
    ntrans_to_buchi,
    prune_step,
    pwl_to_buchi,
    reachable_frontiers,
    signed_to_binary_adapter,
)
from autoreal.convert.trees import DelayTooSmall, _worst_completion_depth
from autoreal.corpus import (
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
    sanitize_lasso,
    value_binary,
    value_lasso,
)
from autoreal.pwl import constant, identity, normalize_range, tooth
from autoreal.transducer import (
    computes_on_grid,
    eval_exact_rational,
    eval_stream,
    initial_runs,
    run_on_word,
    step_all,
)

F = Fraction


# ---------------------------------------------------------------------------
# pwl -> buchi


def binary_lassos(max_prefix, max_period):
    for plen in range(0, max_prefix + 1):
        for pp in itertools.product((0, 1), repeat=plen):
            for clen in range(1, max_period + 1):
                for cc in itertools.product((0, 1), repeat=clen):
                    yield Lasso(pp, cc)


def test_pwl_to_buchi_requires_dyadic():
    with pytest.raises(ValueError):
        pwl_to_buchi(tooth(F(1, 3), F(2, 3), 1))


def test_constant_graph_accepts_only_its_value():
    g = normalize_range(constant(0))  # constant 5/16 = 0.0101(0)
    aut = pwl_to_buchi(g)
    y_good = lasso("0101", "0")
    for x in binary_lassos(3, 2):
        assert accepts_lasso(aut, interleave(x, y_good))
        assert not accepts_lasso(aut, interleave(x, lasso("1", "0")))


def test_identity_graph_matches_oracle_depth5():
    g = normalize_range(identity())
    aut = pwl_to_buchi(g)
    for k in range(0, 33):
        x = F(k, 32)
        gx = g(x)
        for xr in binary_expansions(x):
            for y in {gx, gx + F(1, 64), F(5, 16), F(7, 16)}:
                if not 0 <= y <= 1:
                    continue
                for yr in binary_expansions(y):
                    got = accepts_lasso(aut, interleave(xr, yr))
                    assert got == (y == gx)


def test_tooth_graph_round_trips_lassos_vs_oracle(pipelines):
    pipe = pipelines["tooth"]
    g, aut = pipe.normalized, pipe.graph
    for x in binary_lassos(4, 2):
        vx = value_lasso(x)
        gx = g(vx)
        for yr in binary_expansions(gx):
            assert accepts_lasso(aut, interleave(x, yr)), (str(x), str(yr))
        wrong = gx + F(1, 256)
        if 0 <= wrong <= 1:
            for yr in binary_expansions(wrong):
                assert not accepts_lasso(aut, interleave(x, yr))


def test_relation_checker_remainder_bound():
    # remainder states stay within |A| + |B| + |C| by construction
    from autoreal.convert.pwl_graph import _RelationCheck

    rel = _RelationCheck(F(1, 8), F(9, 32))
    bound = rel.bound
    seen = {rel.initial()}
    frontier = [rel.initial()]
    while frontier:
        e = frontier.pop()
        assert abs(e) <= bound
        for a in (0, 1):
            for b in (0, 1):
                e2 = rel.step(e, a, b)
                if e2 is not None and e2 not in seen:
                    seen.add(e2)
                    frontier.append(e2)


# ---------------------------------------------------------------------------
# transducer -> buchi (A0)


def test_constant_writer_graph():
    aut, scale = ntrans_to_buchi(constant_zero_fst())
    assert scale == 0
    for x in binary_lassos(3, 2):
        for y in binary_lassos(2, 2):
            got = accepts_lasso(aut, interleave(x, y))
            assert got == (value_lasso(y) == 0)


def test_counterexample_graph_vs_oracle():
    aut, scale = ntrans_to_buchi(counterexample_transducer())
    assert scale == 0
    f = counterexample_fn()
    for k in range(0, 65):
        x = F(k, 64)
        fx = f(x)
        for xr in binary_expansions(x):
            for y in {fx, F(1, 2), F(1, 4)}:
                for yr in binary_expansions(y):
                    got = accepts_lasso(aut, interleave(xr, yr))
                    assert got == (y == fx), (x, y)


def test_twin_word_acceptance():
    # accepted dyadic outputs are accepted under both tail conventions
    aut, _ = ntrans_to_buchi(counterexample_transducer())
    f = counterexample_fn()
    x = lasso("01", "0")  # x = 1/4, f(x) = 1/2
    assert f(F(1, 4)) == F(1, 2)
    assert accepts_lasso(aut, interleave(x, lasso("1", "0")))
    assert accepts_lasso(aut, interleave(x, lasso("0", "1")))


def test_delayed_transducer_scales_output():
    D = 2
    aut, scale = ntrans_to_buchi(copier_fst(D))
    assert scale == D
    # graph of 2^-D x
    for k in range(0, 9):
        x = F(k, 8)
        y = x / (1 << D)
        for xr in binary_expansions(x):
            for yr in binary_expansions(y):
                assert accepts_lasso(aut, interleave(xr, yr))


# ---------------------------------------------------------------------------
# delay discovery and the chain forecast


def test_discover_delay_constant_small(pipelines):
    pipe = pipelines["constant"]
    assert pipe.delay <= 16
    assert pipe.ahat.chain_nodes >= 2


def test_discover_delay_monotone_safe(pipelines):
    pipe = pipelines["constant"]
    lazy = pipe.det
    frontiers = reachable_frontiers(lazy)
    nodes = pipe.ahat.chain_nodes
    for X in frontiers:
        worst = _worst_completion_depth(lazy, X, nodes, pipe.delay + 1)
        assert worst + 1 <= pipe.delay + 1  # D+1 validates as well


def test_discovered_delay_is_least(pipelines):
    pipe = pipelines["identity"]
    lazy = pipe.det
    frontiers = reachable_frontiers(lazy)
    nodes = pipe.ahat.chain_nodes
    # validating delay D means chains complete strictly inside D levels
    # (depth cap D-1); at delay-1 some (window, frontier) lacks a chain
    def validate(delay):
        for X in frontiers:
            _worst_completion_depth(lazy, X, nodes, delay - 1)

    validate(pipe.delay)
    with pytest.raises(DelayTooSmall):
        validate(pipe.delay - 1)


def test_chain_gamma_matches_validation(pipelines):
    # runtime chain search succeeds on every window the sweep validated
    rng = random.Random(23)
    pipe = pipelines["identity"]
    lazy, D = pipe.det, pipe.delay
    frontiers = sorted(reachable_frontiers(lazy), key=str)
    for _ in range(60):
        X = rng.choice(frontiers)
        w = tuple(rng.randrange(2) for _ in range(D))
        g = chain_gamma(lazy, w, X, pipe.ahat.chain_nodes)
        assert g in ((0, 0), (0, 1), (1, 0), (1, 1))


# ---------------------------------------------------------------------------
# the two-run transducer


def test_ahat_computes_identity_grid(pipelines):
    pipe = pipelines["identity"]
    mon = ClaimMonitor("ahat-id")
    assert computes_on_grid(pipe.ahat, pipe.normalized.eval, 6, 8, monitor=mon)
    assert mon.events["steps"] > 0


def test_ahat_computes_tooth_grid(pipelines):
    pipe = pipelines["tooth"]
    mon = ClaimMonitor("ahat-tooth")
    assert computes_on_grid(pipe.ahat, pipe.normalized.eval, 6, 8, monitor=mon)


def test_ahat_exactly_two_runs_and_twin_shape(pipelines):
    pipe = pipelines["identity"]
    rng = random.Random(5)
    mon = ClaimMonitor("twins")
    for _ in range(40):
        bits = tuple(rng.randrange(2) for _ in range(pipe.delay + 10))
        rs = initial_runs(pipe.ahat)
        for b in bits:
            rs = step_all(pipe.ahat, rs, b)
            mon.observe_runset(rs)
        assert len(rs) == 2


def test_ahat_needs_normalized_range():
    from autoreal.convert import RangeAssumptionError

    aut = pwl_to_buchi(identity())  # range [0,1]: initial forecast is not 01
    lazy = LazySubsetGraph(aut)
    machine = HatTransducer(lazy, delay=14, chain_nodes=2)
    with pytest.raises(RangeAssumptionError):
        run_on_word(machine, (0,) * (machine.delay + 2))


# ---------------------------------------------------------------------------
# the deterministic signed transducer


def test_adet_exact_identity_third(pipelines):
    assert pipelines["identity"].eval_exact(F(1, 3)) == F(1, 3)
    assert pipelines["identity"].eval_exact(F(1, 3), denormalize=False) == F(17, 48)


def test_adet_exact_on_grid_all(pipelines):
    for name, pipe in pipelines.items():
        src = pipe.source
        for k in range(0, 33):
            x = F(k, 32)
            assert pipe.eval_exact(x) == src.eval(x), (name, x)


def test_adet_representation_independence(pipelines):
    pipe = pipelines["identity"]
    pairs = [
        (Lasso((1, -1), (0,), SIGNED), Lasso((0, 1), (0,), SIGNED)),
        (Lasso((1, 0, -1), (0,), SIGNED), Lasso((0, 1, 1), (0,), SIGNED)),
        (Lasso((1,), (0, -1), SIGNED), Lasso((), (0, 1), SIGNED)),
    ]
    for a, b in pairs:
        a, b = sanitize_lasso(a), sanitize_lasso(b)
        assert value_lasso(a) == value_lasso(b)
        _, va = eval_exact_rational(pipe.adet, a)
        _, vb = eval_exact_rational(pipe.adet, b)
        assert va == vb == pipe.oracle(value_lasso(a))


def _iota_positions(machine, digits, horizon):
    state = machine.initial_state
    out = []
    for i, d in enumerate(digits[:horizon]):
        _, state = machine.step(state, d)
        if state[0] == "run" and state[2] != 0:
            out.append(i)
    return out


def force_bursts(pipe, width=7, tail=40):
    """Signed inputs that hit the collapse rule: a -1 right where the
    relative position is nonzero."""
    mon = ClaimMonitor("burst")
    machine = SignedDetTransducer(pipe.ahat, monitor=mon)
    tested = 0
    for w in itertools.product((-1, 0, 1), repeat=width):
        digits = (1,) + w + (0,) * tail
        v = sum(d * F(1, 1 << (i + 1)) for i, d in enumerate(digits))
        if not 0 <= v <= 1:
            continue
        for p in _iota_positions(machine, digits, 30):
            prefix = digits[: p + 1] + (-1,)
            lasso_in = sanitize_lasso(Lasso(prefix, (0,), SIGNED))
            x = value_lasso(lasso_in)
            if not 0 <= x <= 1:
                continue
            tested += 1
            _, got = eval_exact_rational(machine, lasso_in)
            assert got == pipe.oracle(x), (lasso_in, x)
    return tested, mon


def test_adet_collapse_bursts_identity(pipelines):
    tested, mon = force_bursts(pipelines["identity"])
    assert tested > 0
    assert mon.events["bursts"] > 0
    assert mon.events["max_burst"] <= 3


def test_adet_collapse_bursts_tooth(pipelines):
    tested, mon = force_bursts(pipelines["tooth"], width=6, tail=30)
    assert tested > 0


def test_adet_signed_fuzz_all_pipelines(pipelines):
    rng = random.Random(31)
    machines = {
        name: SignedDetTransducer(p.ahat, monitor=ClaimMonitor(name))
        for name, p in pipelines.items()
    }
    for _ in range(800):
        plen = rng.randrange(1, 12)
        digits = (1,) + tuple(rng.choice((0, 0, 1, -1)) for _ in range(plen))
        per = tuple(rng.choice((0, 0, 1, -1)) for _ in range(rng.randrange(1, 4)))
        w = sanitize_lasso(Lasso(digits, per, SIGNED))
        x = value_lasso(w)
        if not 0 <= x <= 1:
            continue
        for name, machine in machines.items():
            _, got = eval_exact_rational(machine, w)
            assert got == pipelines[name].oracle(x), (name, str(w))


def test_adet_stream_prefix_consistent_with_exact(pipelines):
    pipe = pipelines["tooth"]
    for x in (F(1, 3), F(2, 7), F(5, 48)):
        exact = pipe.eval_exact(x, denormalize=False)
        out, approx = pipe.eval_digits(x, 12)
        assert abs(approx - exact) <= F(1, 1 << 12)


def test_adet_rejects_unsanitized_minus(pipelines):
    # a -1 arriving while the value is still zero violates the sanitize
    # precondition and is reported rather than silently mistracked
    machine = pipelines["constant"].adet
    zeros = machine.delay + 4
    with pytest.raises(ValueError):
        eval_stream(machine, iter([0] * zeros + [-1] + [0] * 40), zeros)


# ---------------------------------------------------------------------------
# signed -> binary adapter


def test_adapter_quarter_commitments():
    ad = signed_to_binary_adapter()
    rs = initial_runs(ad)
    for d in [1, -1] + [0] * 10:
        rs = step_all(ad, rs, d)
    outs = {tuple(o) for o in rs.outputs()}
    vals = {value_binary(o) for o in outs}
    assert min(vals) <= F(1, 4) <= max(vals)
    for o in outs:
        assert abs(value_binary(o) - F(1, 4)) <= F(1, 1 << (len(o)))


def test_adapter_passthrough_nonnegative():
    ad = signed_to_binary_adapter()
    stream = [1, 0, 1, 1, 0, 0, 1, 0]
    rs = run_on_word(ad, stream)
    assert tuple(stream[: len(stream) - ad.delay]) in rs.outputs()


def test_composite_computes_on_grid(pipelines):
    pipe = pipelines["identity"]
    comp = compose_signed_to_binary(pipe.adet)
    assert computes_on_grid(comp, pipe.normalized.eval, 5, 8)


# ---------------------------------------------------------------------------
# whole-pipeline coherence


def test_pipeline_equality_small(pipelines):
    # oracle, graph acceptance, two-run machine, and signed machine agree
    for name, pipe in pipelines.items():
        g = pipe.normalized
        for k in range(0, 17):
            x = F(k, 16)
            gx = g(x)
            for xr in binary_expansions(x):
                for yr in binary_expansions(gx):
                    assert accepts_lasso(pipe.graph, interleave(xr, yr))
                rs = run_on_word(pipe.ahat, xr.head(10 + pipe.delay))
                for out in rs.outputs():
                    assert abs(value_binary(out) - gx) <= F(3, 1 << 10)
            assert pipe.eval_exact(x, denormalize=False) == gx
