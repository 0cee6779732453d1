"""Command-line front end: build, convert, eval, check, export-dot.

Every numeric argument is parsed exactly ("p/q" or "0.b1b2..." dyadic
digits); exit codes: 0 pass, 1 check failure, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, artifacts, corpus
from .buchi import (
    BuchiAutomaton,
    DetBuchi,
    determinize,
    determinize_subsets,
    to_dot,
)
from .convert import (
    ClaimMonitor,
    HatTransducer,
    SignedDetTransducer,
    compose_signed_to_binary,
    ntrans_to_buchi,
)
from .digits import Lasso, SIGNED, canonical_expansion, value_signed, word_str
from .pwl import PwlFunction, denormalize_value, normalize_range, tooth
from .transducer import Fst, eval_exact_rational, eval_stream

USAGE_ERROR = 2
CHECK_FAILURE = 1


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if text.startswith("0.") or text.startswith("."):
        bits = text.split(".", 1)[1]
        if any(c not in "01" for c in bits):
            raise ValueError(f"bad dyadic digits: {text!r}")
        return Fraction(int(bits or "0", 2), 1 << len(bits))
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def _corpus_artifact(name: str) -> artifacts.Artifact:
    if name == "step":
        return artifacts.Artifact("buchi", corpus.step_function_buchi(),
                                  {"construction": "corpus:step"})
    if name == "identity":
        return artifacts.Artifact("buchi", corpus.identity_buchi(),
                                  {"construction": "corpus:identity"})
    if name == "counterexample-fst":
        return artifacts.Artifact("fst", corpus.counterexample_transducer(),
                                  {"construction": "corpus:counterexample-fst"})
    if name == "constant-fst":
        return artifacts.Artifact("fst", corpus.constant_zero_fst(),
                                  {"construction": "corpus:constant-fst"})
    if name == "identity-pwl":
        from .pwl import identity
        return artifacts.Artifact("pwl", identity(),
                                  {"construction": "corpus:identity-pwl"})
    if name.startswith("constant:"):
        from .pwl import constant
        c = parse_rational(name.split(":", 1)[1])
        return artifacts.Artifact("pwl", constant(c),
                                  {"construction": f"corpus:{name}"})
    if name.startswith("tooth:"):
        parts = name.split(":", 1)[1].split(",")
        if len(parts) != 3:
            raise ValueError("tooth:p,q,r needs three rationals")
        p, q, r = (parse_rational(t) for t in parts)
        return artifacts.Artifact("pwl", tooth(p, q, r),
                                  {"construction": f"corpus:{name}"})
    if name.startswith("fz:"):
        ns = [int(t) for t in name.split(":", 1)[1].strip("{}").split(",")]
        f = corpus.f_z_pwl(corpus.SupportPredicate.finite(*ns))
        return artifacts.Artifact("pwl", f, {"construction": f"corpus:{name}"})
    raise ValueError(f"unknown corpus name {name!r}")


def cmd_build(args) -> int:
    if args.corpus:
        art = _corpus_artifact(args.corpus)
    else:
        with open(args.pwl) as fh:
            data = json.load(fh)
        art = artifacts.Artifact("pwl", PwlFunction.from_json(data),
                                 {"construction": f"pwl-spec:{args.pwl}"})
    art.save(args.output)
    print(f"wrote {art.kind} artifact to {args.output}")
    return 0


_LEGAL_EDGES = {
    ("pwl", "buchi"),
    ("buchi", "detbuchi"),
    ("detbuchi", "fst"),
    ("fst", "det-signed"),
    ("fst", "buchi"),
    ("detfst", "fst-binary"),
}


def cmd_convert(args) -> int:
    art = artifacts.load(args.input)
    target = args.to
    edge = (art.kind, target)
    prov = dict(art.provenance)
    if edge == ("pwl", "buchi"):
        f = art.obj
        if args.normalize:
            f = normalize_range(f)
            prov["normalized"] = True
        from .convert import pwl_to_buchi
        out = artifacts.Artifact("buchi", pwl_to_buchi(f),
                                 {**prov, "construction": "pwl_to_buchi"})
    elif edge == ("buchi", "detbuchi"):
        aut: BuchiAutomaton = art.obj
        safety = len(aut.accepting) == aut.n_states
        det = (determinize_subsets(aut, args.state_cap) if safety
               else determinize(aut, args.state_cap))
        out = artifacts.Artifact(
            "detbuchi", det,
            {**prov, "construction": "determinize",
             "route": "subset" if safety else "repeat+subset"},
        )
    elif edge == ("detbuchi", "fst"):
        machine = HatTransducer(art.obj, delay_cap=args.delay_cap)
        out = artifacts.Artifact(
            "fst", machine,
            {**prov, "construction": "ahat", "delay": machine.delay,
             "chain_nodes": machine.chain_nodes},
        )
    elif edge == ("fst", "det-signed"):
        if not isinstance(art.obj, HatTransducer):
            print("det-signed conversion needs the two-run transducer "
                  "produced by 'convert --to fst' on a detbuchi artifact",
                  file=sys.stderr)
            return USAGE_ERROR
        machine = SignedDetTransducer(art.obj)
        out = artifacts.Artifact(
            "detfst", machine,
            {**prov, "construction": "adet", "delay": machine.delay},
        )
    elif edge == ("fst", "buchi"):
        if not isinstance(art.obj, Fst):
            print("graph construction needs a table transducer artifact",
                  file=sys.stderr)
            return USAGE_ERROR
        aut, scale = ntrans_to_buchi(art.obj)
        out = artifacts.Artifact(
            "buchi", aut,
            {**prov, "construction": "ntrans_to_buchi", "output_scale_pow": scale},
        )
    elif edge == ("detfst", "fst-binary"):
        machine = compose_signed_to_binary(art.obj)
        out = artifacts.Artifact(
            "fst", machine,
            {**prov, "construction": "signed_binary_composite",
             "delay": machine.delay},
        )
    else:
        legal = ", ".join(f"{a}->{b}" for a, b in sorted(_LEGAL_EDGES))
        print(f"illegal conversion {art.kind} -> {target}; legal edges: {legal}",
              file=sys.stderr)
        return USAGE_ERROR
    out.save(args.output)
    print(f"wrote {out.kind} artifact to {args.output}")
    return 0


def _maybe_denormalize(v: Fraction, prov: dict) -> Fraction:
    return denormalize_value(v) if prov.get("normalized") else v


def cmd_eval(args) -> int:
    art = artifacts.load(args.artifact)
    x = parse_rational(args.x)
    if art.kind == "pwl":
        v = art.obj.eval(x)
        if args.digits:
            num = (v.numerator * (1 << args.digits)) // v.denominator
            print(word_str((num >> (args.digits - 1 - i)) & 1
                           for i in range(args.digits)))
        else:
            print(v)
        return 0
    if art.kind == "detfst":
        rep = canonical_expansion(x)
        if args.exact:
            signed_in = Lasso(rep.prefix, rep.period, SIGNED)
            _, v = eval_exact_rational(art.obj, signed_in)
            print(_maybe_denormalize(v, art.provenance))
        else:
            n = args.digits or 8
            out = eval_stream(art.obj, rep.digits(), n)
            v = value_signed(out)
            print(f"{word_str(out)}  value {_maybe_denormalize(v, art.provenance)}"
                  f" (+/- {Fraction(1, 1 << n)} before denormalization)")
        return 0
    if art.kind == "detbuchi" and args.graph_lookup:
        from .buchi import output_tree
        n = args.digits or 8
        sigma = canonical_expansion(x).head(n + 8)
        tree = output_tree(art.obj, sigma)
        nodes = sorted(tree.nodes(n + 8))
        if not nodes:
            print("no surviving outputs", file=sys.stderr)
            return CHECK_FAILURE
        out = nodes[0][:n]
        print(f"{word_str(out)}  (one surviving output prefix)")
        return 0
    print(f"artifact kind {art.kind} is not evaluable "
          "(use pwl, detfst, or detbuchi with --graph-lookup)", file=sys.stderr)
    return USAGE_ERROR


def cmd_check(args) -> int:
    if args.check == "equiv":
        a = artifacts.load(args.artifacts[0])
        b = artifacts.load(args.artifacts[1])
        e1 = _evaluator_for(a)
        e2 = _evaluator_for(b)
        rep = analysis.equivalence_on_grid(e1, e2, args.depth,
                                           parse_rational(args.tol))
        print(rep.dumps())
        return 0 if rep.passed else CHECK_FAILURE
    if args.check == "lipschitz":
        art = artifacts.load(args.artifacts[0])
        est = analysis.lipschitz_estimate(_evaluator_for(art), args.depth)
        print(f"lipschitz estimate at depth {args.depth}: {est}")
        if args.bound is not None and est > parse_rational(args.bound):
            return CHECK_FAILURE
        return 0
    if args.check == "rational":
        art = artifacts.load(args.artifacts[0])
        ok = analysis.rational_preservation_check(art.obj, args.max_den)
        print(f"rational preservation up to denominator {args.max_den}: {ok}")
        return 0 if ok else CHECK_FAILURE
    if args.check == "modulus":
        art = artifacts.load(args.artifacts[0])
        j1 = analysis.modulus_probe(art.obj, j0=args.j0)
        if j1 is None:
            print(f"no continuity modulus within j0+delay+8 for j0={args.j0}")
            return CHECK_FAILURE
        print(f"modulus: inputs within 2^-{j1} keep outputs within 2^-{args.j0}")
        return 0
    if args.check == "invariants":
        art = artifacts.load(args.artifacts[0])
        if not isinstance(art.obj, SignedDetTransducer):
            print("invariant monitors run on det-signed artifacts",
                  file=sys.stderr)
            return USAGE_ERROR
        mon = ClaimMonitor(args.artifacts[0])
        machine = SignedDetTransducer(art.obj.ahat, monitor=mon)
        for k in range(0, (1 << args.depth) + 1):
            x = Fraction(k, 1 << args.depth)
            rep = canonical_expansion(x)
            eval_exact_rational(machine, Lasso(rep.prefix, rep.period, SIGNED))
        print(f"invariants clean on depth-{args.depth} grid: {mon.events}")
        return 0
    if args.check == "obstruction":
        name = args.artifacts[0]
        if name == "fz-cofinite":
            ev = corpus.f_z(corpus.SupportPredicate.cofinite_all())
        elif name.startswith("fz:"):
            ns = [int(t) for t in name.split(":", 1)[1].strip("{}").split(",")]
            ev = corpus.f_z(corpus.SupportPredicate.finite(*ns))
        else:
            print(f"unknown obstruction target {name!r}", file=sys.stderr)
            return USAGE_ERROR
        found = analysis.base_obstruction_probe(ev, args.budget)
        print(f"obstruction witness for state budget {args.budget}: {found}")
        return 0 if found else CHECK_FAILURE
    print(f"unknown check {args.check!r}", file=sys.stderr)
    return USAGE_ERROR


def _evaluator_for(art: artifacts.Artifact):
    if art.kind == "pwl":
        return art.obj.eval
    if art.kind == "detfst":
        prov = art.provenance
        machine = art.obj

        def ev(x: Fraction) -> Fraction:
            rep = canonical_expansion(x)
            _, v = eval_exact_rational(machine, Lasso(rep.prefix, rep.period, SIGNED))
            return _maybe_denormalize(v, prov)

        return ev
    raise artifacts.ArtifactError(f"kind {art.kind} has no exact evaluator")


def cmd_export_dot(args) -> int:
    art = artifacts.load(args.artifact)
    if isinstance(art.obj, (BuchiAutomaton, DetBuchi)):
        sys.stdout.write(to_dot(art.obj))
        return 0
    if isinstance(art.obj, Fst):
        sys.stdout.write(fst_to_dot(art.obj))
        return 0
    print(f"artifact kind {art.kind} ({type(art.obj).__name__}) has no DOT form",
          file=sys.stderr)
    return USAGE_ERROR


def fst_to_dot(machine: Fst) -> str:
    lines = ["digraph {", "  rankdir=LR;"]
    for s in range(machine.n_states):
        lines.append(f'  q{s} [shape=circle label="{s}"];')
    for i, s in enumerate(sorted(machine.initial)):
        lines.append(f"  start{i} [shape=point];")
        lines.append(f"  start{i} -> q{s};")
    grouped: dict[tuple, list[str]] = {}
    for s, a, b, t in machine.transitions:
        grouped.setdefault((s, t), []).append(f"{a}/{b}")
    for s, a, t in machine.delay_transitions:
        grouped.setdefault((s, t), []).append(f"{a}/-")
    for (s, t), labels in sorted(grouped.items()):
        lines.append(f'  q{s} -> q{t} [label="{",".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="autoreal",
        description="automata-based exact real computation on [0,1]",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a PWL or machine artifact")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="corpus name, e.g. tooth:1/4,1/2,1/8")
    src.add_argument("--pwl", help="PWL spec JSON file")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(fn=cmd_build)

    c = sub.add_parser("convert", help="convert along the construction edges")
    c.add_argument("input")
    c.add_argument("--to", required=True,
                   choices=["buchi", "detbuchi", "fst", "det-signed", "fst-binary"])
    c.add_argument("--normalize", action="store_true",
                   help="apply the range normalization y/8 + 5/16 first")
    c.add_argument("--delay-cap", type=int, default=24)
    c.add_argument("--state-cap", type=int, default=1 << 16)
    c.add_argument("-o", "--output", required=True)
    c.set_defaults(fn=cmd_convert)

    e = sub.add_parser("eval", help="evaluate an artifact at a rational")
    e.add_argument("artifact")
    e.add_argument("--x", required=True, help="rational p/q or dyadic 0.b1b2...")
    e.add_argument("--digits", type=int)
    e.add_argument("--exact", action="store_true")
    e.add_argument("--graph-lookup", action="store_true")
    e.set_defaults(fn=cmd_eval)

    k = sub.add_parser("check", help="run a named analysis check")
    names = k.add_mutually_exclusive_group(required=True)
    for nm in ("equiv", "lipschitz", "modulus", "rational",
               "invariants", "obstruction"):
        names.add_argument(f"--{nm}", dest="check", action="store_const",
                           const=nm)
    k.add_argument("artifacts", nargs="+")
    k.add_argument("--depth", type=int, default=6)
    k.add_argument("--tol", default="1/256")
    k.add_argument("--bound")
    k.add_argument("--j0", type=int, default=6)
    k.add_argument("--max-den", type=int, default=16)
    k.add_argument("--budget", type=int, default=8)
    k.set_defaults(fn=cmd_check)

    d = sub.add_parser("export-dot", help="GraphViz export")
    d.add_argument("artifact")
    d.set_defaults(fn=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (artifacts.ArtifactError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
