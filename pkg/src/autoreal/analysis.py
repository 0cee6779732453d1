"""Property probes: Lipschitz estimation, continuity modulus, rational
preservation, grid equivalence, and the transducer-size obstruction.

All probes are exact-rational; tolerances are exact dyadics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .digits import Lasso, SIGNED, binary_expansions, value_binary
from .transducer import eval_exact_rational, run_on_word


@dataclass
class GridReport:
    depth: int
    precision: int
    max_deviation: Fraction
    worst_point: Fraction
    passed: bool

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "precision": self.precision,
            "max_deviation": str(self.max_deviation),
            "worst_point": str(self.worst_point),
            "passed": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def lipschitz_estimate(evaluator, depth: int) -> Fraction:
    """Max |difference quotient| over adjacent dyadic grid points.

    A lower bound on the true Lipschitz constant, monotone in depth.
    """
    if depth < 1:
        raise ValueError("need depth >= 1")
    step = Fraction(1, 1 << depth)
    best = Fraction(0)
    prev = evaluator(Fraction(0))
    for k in range(1, (1 << depth) + 1):
        cur = evaluator(Fraction(k, 1 << depth))
        best = max(best, abs(cur - prev) / step)
        prev = cur
    return best


def modulus_probe(machine, oracle_delay: int | None = None, j0: int = 6,
                  grid_depth: int | None = None) -> int | None:
    """Least j1 <= j0 + delay + 8 such that inputs within 2^-j1 of each
    other (as reals, over all representations) give outputs within 2^-j0.

    Returns None when no such j1 exists within the bound, which flags a
    machine that does not compute a continuous function of the real
    input (e.g. one that is not representation-independent).
    """
    delay = machine.delay if oracle_delay is None else oracle_delay
    bound = j0 + delay + 8
    if grid_depth is None:
        grid_depth = min(j0 + 4, 12)
    digits_needed = j0 + 2
    tol = Fraction(1, 1 << j0)

    # collect outputs per grid point over every representation
    values: list[tuple[Fraction, list[Fraction]]] = []
    for k in range(0, (1 << grid_depth) + 1):
        x = Fraction(k, 1 << grid_depth)
        outs = []
        for rep in binary_expansions(x):
            rs = run_on_word(machine, rep.head(digits_needed + delay))
            if not rs.runs:
                return None
            outs.extend(value_binary(o) for o in rs.outputs())
        values.append((x, outs))

    for j1 in range(0, bound + 1):
        gap = Fraction(1, 1 << j1)
        ok = True
        for i, (x, outs) in enumerate(values):
            for x2, outs2 in values[i:]:
                if x2 - x > gap:
                    break
                for a in outs:
                    for b in outs2:
                        # outputs are digits_needed-long prefixes: allow
                        # their own truncation slack
                        if abs(a - b) > tol + Fraction(2, 1 << digits_needed):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return j1
    return None


def rational_preservation_check(machine, max_denominator: int = 16) -> bool:
    """Cycle detection terminates with a rational output lasso for every
    input lasso with denominator up to the bound (it must; a failure is
    a machine bug).  Also checks the pigeonhole period bound when the
    machine exposes a state count."""
    from .digits import canonical_expansion

    n_states = getattr(machine, "n_states", None)
    for q in range(1, max_denominator + 1):
        for p in range(0, q + 1):
            x = Fraction(p, q)
            rep = canonical_expansion(x)
            w = Lasso(rep.prefix, rep.period, SIGNED)
            try:
                out, _ = eval_exact_rational(machine, w)
            except Exception:
                return False
            if n_states is not None and len(out.period) > n_states:
                return False
    return True


def equivalence_on_grid(e1, e2, depth: int, tol: Fraction) -> GridReport:
    """Max |e1 - e2| over the dyadic grid; pass iff <= tol."""
    if tol <= 0:
        raise ValueError("need tol > 0")
    worst = Fraction(0)
    worst_x = Fraction(0)
    for k in range(0, (1 << depth) + 1):
        x = Fraction(k, 1 << depth)
        dev = abs(Fraction(e1(x)) - Fraction(e2(x)))
        if dev > worst:
            worst, worst_x = dev, x
    return GridReport(
        depth=depth,
        precision=tol.denominator.bit_length() - 1,
        max_deviation=worst,
        worst_point=worst_x,
        passed=worst <= tol,
    )


def _odd_part_order(u: int, cap: int) -> int | None:
    """Multiplicative order of 2 modulo odd u, or None if above cap."""
    if u == 1:
        return 1
    r, acc = 1, 2 % u
    while acc != 1:
        r += 1
        if r > cap:
            return None
        acc = (acc * 2) % u
    return r


def base_obstruction_probe(evaluator, state_budget: int,
                           max_n: int | None = None) -> bool:
    """Witness that no deterministic signed transducer with the given
    state budget computes the evaluator.

    Any such machine, run on the input 0^n 1 0^omega for x = 2^-(n+1),
    repeats a state within ``state_budget`` further steps, so its output
    is a lasso with pre-period at most n + 1 + budget + 1 and period at
    most budget.  The probe returns True iff some f(2^-n) (n up to the
    bound) has a denominator no such lasso can realize: dyadic precision
    beyond the pre-period bound, or odd part whose order of 2 exceeds
    the period bound.
    """
    m = state_budget
    if max_n is None:
        max_n = 2 * m + 12
    for n in range(3, max_n + 1):
        v = Fraction(evaluator(Fraction(1, 1 << n)))
        den = v.denominator
        two_part = (den & -den).bit_length() - 1
        odd = den >> two_part
        if two_part > n + m + 1:
            return True
        order = _odd_part_order(odd, m)
        if order is None:
            return True
    return False
