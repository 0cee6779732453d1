"""Exact piecewise-linear function algebra on [0,1].

Ground truth for every automaton construction: breakpoints and values
are rationals, evaluation and lattice operations are exact.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


class PwlFunction:
    """Continuous piecewise-linear function on [0,1].

    Stored as strictly increasing breakpoints from 0 to 1 with a value at
    each; between breakpoints the function interpolates linearly.
    """

    def __init__(self, points: Iterable[tuple]):
        pts = [(_frac(x), _frac(y)) for x, y in points]
        pts.sort(key=lambda p: p[0])
        cleaned: list[tuple[Fraction, Fraction]] = []
        for x, y in pts:
            if cleaned and cleaned[-1][0] == x:
                if cleaned[-1][1] != y:
                    raise ValueError(f"conflicting values at x={x}")
                continue
            cleaned.append((x, y))
        if len(cleaned) < 2:
            raise ValueError("need at least two breakpoints")
        if cleaned[0][0] != 0 or cleaned[-1][0] != 1:
            raise ValueError("breakpoints must span [0,1]")
        self.points: tuple[tuple[Fraction, Fraction], ...] = tuple(cleaned)
        self._xs = [p[0] for p in self.points]

    def __call__(self, x) -> Fraction:
        return self.eval(x)

    def eval(self, x) -> Fraction:
        x = _frac(x)
        if x < 0 or x > 1:
            raise ValueError(f"{x} outside [0,1]")
        i = bisect_right(self._xs, x)
        if i == len(self._xs):
            return self.points[-1][1]
        x0, y0 = self.points[i - 1]
        x1, y1 = self.points[i]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def slopes(self) -> list[Fraction]:
        out = []
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            out.append((y1 - y0) / (x1 - x0))
        return out

    def lipschitz_bound(self) -> Fraction:
        return max((abs(s) for s in self.slopes()), default=Fraction(0))

    def refine(self, xs: Sequence) -> "PwlFunction":
        """Same function with extra breakpoints inserted."""
        extra = [( _frac(x), self.eval(x)) for x in xs]
        return PwlFunction(list(self.points) + extra)

    def affine(self, a, b) -> "PwlFunction":
        """Pointwise a*f + b, same breakpoints."""
        a, b = _frac(a), _frac(b)
        return PwlFunction([(x, a * y + b) for x, y in self.points])

    def __neg__(self) -> "PwlFunction":
        return self.affine(-1, 0)

    def _merged_xs(self, other: "PwlFunction") -> list[Fraction]:
        return sorted(set(self._xs) | set(other._xs))

    def __add__(self, other: "PwlFunction") -> "PwlFunction":
        xs = self._merged_xs(other)
        return PwlFunction([(x, self.eval(x) + other.eval(x)) for x in xs])

    def __sub__(self, other: "PwlFunction") -> "PwlFunction":
        xs = self._merged_xs(other)
        return PwlFunction([(x, self.eval(x) - other.eval(x)) for x in xs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PwlFunction):
            return NotImplemented
        xs = self._merged_xs(other)
        return all(self.eval(x) == other.eval(x) for x in xs)

    def __hash__(self):
        return hash(tuple(PwlFunction._canonical_points(self)))

    @staticmethod
    def _canonical_points(f: "PwlFunction"):
        # drop breakpoints lying exactly on the segment through neighbours
        pts = list(f.points)
        out = [pts[0]]
        for i in range(1, len(pts) - 1):
            x0, y0 = out[-1]
            x1, y1 = pts[i]
            x2, y2 = pts[i + 1]
            if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
                continue
            out.append(pts[i])
        out.append(pts[-1])
        return out

    def to_json(self) -> dict:
        return {
            "breakpoints": [[str(x), str(y)] for x, y in self.points]
        }

    @classmethod
    def from_json(cls, data: dict) -> "PwlFunction":
        return cls([(Fraction(x), Fraction(y)) for x, y in data["breakpoints"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __repr__(self):
        pts = ", ".join(f"({x},{y})" for x, y in self.points)
        return f"PwlFunction([{pts}])"


def constant(c) -> PwlFunction:
    return PwlFunction([(0, c), (1, c)])


def identity() -> PwlFunction:
    return PwlFunction([(0, 0), (1, 1)])


def _crossings(f: PwlFunction, g: PwlFunction) -> list[Fraction]:
    """Exact x where f and g cross strictly inside a shared segment."""
    xs = sorted(set(f._xs) | set(g._xs))
    out = []
    for x0, x1 in zip(xs, xs[1:]):
        d0 = f.eval(x0) - g.eval(x0)
        d1 = f.eval(x1) - g.eval(x1)
        if (d0 > 0 and d1 < 0) or (d0 < 0 and d1 > 0):
            # linear difference on [x0,x1]: root of d0 + t*(d1-d0)
            t = d0 / (d0 - d1)
            out.append(x0 + t * (x1 - x0))
    return out


def lattice_max(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    xs = sorted(set(f._xs) | set(g._xs) | set(_crossings(f, g)))
    return PwlFunction([(x, max(f.eval(x), g.eval(x))) for x in xs])


def lattice_min(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    xs = sorted(set(f._xs) | set(g._xs) | set(_crossings(f, g)))
    return PwlFunction([(x, min(f.eval(x), g.eval(x))) for x in xs])


def pos_part(f: PwlFunction) -> PwlFunction:
    """f+ = max(f, 0)."""
    return lattice_max(f, constant(0))


def neg_part(f: PwlFunction) -> PwlFunction:
    """f- = (-f)+; satisfies f = f+ - f-."""
    return pos_part(-f)


def modulus(f: PwlFunction) -> PwlFunction:
    """|f| = f+ + f-."""
    return pos_part(f) + neg_part(f)


def lattice_max_via_mod(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    """max(f,g) = (f + g + |f-g|)/2; second route for dual-path tests."""
    return (f + g + modulus(f - g)).affine(Fraction(1, 2), 0)


def lattice_min_via_mod(f: PwlFunction, g: PwlFunction) -> PwlFunction:
    return (f + g - modulus(f - g)).affine(Fraction(1, 2), 0)


def tooth(p, q, r) -> PwlFunction:
    """Bump that is 0 outside (p,q) and peaks at height r midway."""
    p, q, r = _frac(p), _frac(q), _frac(r)
    if not (0 <= p < q <= 1):
        raise ValueError("need 0 <= p < q <= 1")
    if r <= 0:
        raise ValueError("need r > 0")
    mid = (p + q) / 2
    pts = [(p, Fraction(0)), (mid, r), (q, Fraction(0))]
    if p > 0:
        pts.append((Fraction(0), Fraction(0)))
    if q < 1:
        pts.append((Fraction(1), Fraction(0)))
    return PwlFunction(pts)


def tooth_via_lattice(p, q, r) -> PwlFunction:
    """The min/max route: min(max(2r/(q-p)(id - p), 0), max(-2r/(q-p)(id - q), 0))."""
    p, q, r = _frac(p), _frac(q), _frac(r)
    s = 2 * r / (q - p)
    rise = identity().affine(s, -s * p)
    fall = identity().affine(-s, s * q)
    return lattice_min(pos_part(rise), pos_part(fall))


NORMALIZE_SCALE = Fraction(1, 8)
NORMALIZE_SHIFT = Fraction(5, 16)


def normalize_range(f: PwlFunction) -> PwlFunction:
    """Map range [0,1] into [5/16, 7/16], inside the required (1/4, 1/2).

    The fixed affine map y -> y/8 + 5/16 is used project-wide so that
    converted machines and oracles agree; invert values with
    ``denormalize_value``.
    """
    for _, y in f.points:
        if y < 0 or y > 1:
            raise ValueError(f"value {y} outside [0,1]")
    return f.affine(NORMALIZE_SCALE, NORMALIZE_SHIFT)


def normalize_value(y) -> Fraction:
    return _frac(y) * NORMALIZE_SCALE + NORMALIZE_SHIFT


def denormalize_value(y) -> Fraction:
    return (_frac(y) - NORMALIZE_SHIFT) / NORMALIZE_SCALE


def has_dyadic_breakpoints(f: PwlFunction) -> bool:
    return all(is_dyadic(x) and is_dyadic(y) for x, y in f.points)
