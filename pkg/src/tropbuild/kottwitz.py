"""Newton-polygon combinatorics for GL_n with minuscule weight (1^d, 0^(n-d)).

A Newton point is a weakly decreasing rational slope vector of length n
whose partial sums are integers wherever the slope changes (and at the
end); drawn as a graph, it is a concave polygon from (0,0) to (n, d) with
lattice vertices.  The full poset enumerated here consists of all such
polygons lying on or below the Hodge polygon x -> min(x, d) with the same
endpoints, ordered by pointwise comparison of polygons.  Classification
predicates look at where the turning points (interior vertices) of a
polygon sit relative to the Hodge polygon, and dimensions come from the
pairing with the half-sum-of-roots vector (n-1, n-3, ..., 1-n).

Work happens on the weakly-decreasing slope side throughout; the opposite
convention used elsewhere is the coordinate mirror (negate and reverse),
and every predicate and count here is mirror-invariant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .rationals import frac, parse_fraction


@dataclass(frozen=True)
class HodgeDatum:
    """The pair (n, d) with 0 < d < n; weight vector (1^d, 0^(n-d))."""

    n: int
    d: int

    def __post_init__(self):
        if not (0 < self.d < self.n):
            raise ValueError(f"need 0 < d < n, got d={self.d}, n={self.n}")

    @property
    def mu(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1) if i < self.d else Fraction(0) for i in range(self.n))

    def hodge_value(self, x: int) -> int:
        """Height of the Hodge polygon at integer abscissa x."""
        return min(x, self.d)


class NewtonPoint:
    """Weakly decreasing rational slopes with integral breakpoints."""

    __slots__ = ("slopes",)

    def __init__(self, slopes):
        slopes = tuple(frac(s) for s in slopes)
        if not slopes:
            raise ValueError("empty slope vector")
        partial = Fraction(0)
        for i, s in enumerate(slopes):
            if i and s > slopes[i - 1]:
                raise ValueError(f"slopes not weakly decreasing at index {i}")
            if i and slopes[i - 1] != s and partial.denominator != 1:
                raise ValueError(f"non-integral breakpoint at index {i}: partial sum {partial}")
            partial += s
        if partial.denominator != 1:
            raise ValueError(f"total slope sum {partial} is not an integer")
        object.__setattr__(self, "slopes", slopes)

    def __setattr__(self, name, value):
        raise AttributeError("NewtonPoint is immutable")

    @property
    def n(self) -> int:
        return len(self.slopes)

    def partial_sums(self) -> tuple[Fraction, ...]:
        out, acc = [], Fraction(0)
        for s in self.slopes:
            acc += s
            out.append(acc)
        return tuple(out)

    def total(self) -> int:
        return int(sum(self.slopes, Fraction(0)))

    def vertices(self) -> tuple[tuple[int, int], ...]:
        """Lattice vertices of the polygon, endpoints included."""
        verts = [(0, 0)]
        acc = Fraction(0)
        for i, s in enumerate(self.slopes):
            acc += s
            last = i == len(self.slopes) - 1
            if last or self.slopes[i + 1] != s:
                verts.append((i + 1, int(acc)))  # integral by the breakpoint axiom
        return tuple(verts)

    def turning_points(self) -> tuple[tuple[int, int], ...]:
        """Interior vertices where the slope strictly drops."""
        return self.vertices()[1:-1]

    def is_basic(self) -> bool:
        return all(s == self.slopes[0] for s in self.slopes)

    def __eq__(self, other):
        return isinstance(other, NewtonPoint) and self.slopes == other.slopes

    def __hash__(self):
        return hash(self.slopes)

    def __lt__(self, other):
        return self.slopes < other.slopes

    def __repr__(self):
        return f"NewtonPoint({', '.join(str(s) for s in self.slopes)})"

    def to_json(self) -> list[str]:
        return [str(s) for s in self.slopes]

    @staticmethod
    def from_json(data) -> "NewtonPoint":
        return NewtonPoint([parse_fraction(s) for s in data])


@dataclass(frozen=True)
class LeviDatum:
    """A block decomposition (n_1..n_k) of n with d_i of the weight in block i."""

    composition: tuple[int, ...]
    distribution: tuple[int, ...]

    def __post_init__(self):
        comp = tuple(int(c) for c in self.composition)
        dist = tuple(int(c) for c in self.distribution)
        object.__setattr__(self, "composition", comp)
        object.__setattr__(self, "distribution", dist)
        if len(comp) != len(dist) or not comp:
            raise ValueError("composition and distribution must have equal positive length")
        if any(c < 1 for c in comp):
            raise ValueError("composition parts must be positive")
        if any(not 0 <= d <= c for c, d in zip(comp, dist)):
            raise ValueError("distribution must satisfy 0 <= d_i <= n_i")

    @property
    def n(self) -> int:
        return sum(self.composition)

    @property
    def d(self) -> int:
        return sum(self.distribution)


def hodge_polygon(h: HodgeDatum) -> NewtonPoint:
    return NewtonPoint(h.mu)


def leq(a: NewtonPoint, b: NewtonPoint) -> bool:
    """Polygon of a lies on or below the polygon of b, equal endpoints."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    pa, pb = a.partial_sums(), b.partial_sums()
    if pa[-1] != pb[-1]:
        raise ValueError(f"endpoint mismatch: {pa[-1]} vs {pb[-1]}")
    return all(x <= y for x, y in zip(pa, pb))


def enumerate_kottwitz(h: HodgeDatum) -> tuple[NewtonPoint, ...]:
    """All Newton points below the Hodge polygon, in lexicographic order.

    Enumerates concave lattice-vertex chains from (0,0) to (n,d) staying
    below x -> min(x,d); slopes then automatically lie in [0,1].
    """
    n, d = h.n, h.d
    found = []

    def extend(x, y, last_slope, slopes):
        if x == n:
            if y == d:
                found.append(NewtonPoint(slopes))
            return
        for x2 in range(x + 1, n + 1):
            for y2 in range(y, min(x2, d) + 1):
                s = Fraction(y2 - y, x2 - x)
                if s > 1 or (last_slope is not None and s >= last_slope):
                    continue
                extend(x2, y2, s, slopes + [s] * (x2 - x))

    extend(0, 0, None, [])
    return tuple(sorted(found, key=lambda v: v.slopes))


def _require_member(v: NewtonPoint, h: HodgeDatum):
    if v.n != h.n or v.total() != h.d:
        raise ValueError(f"{v!r} does not match Hodge datum (n={h.n}, d={h.d})")
    if not leq(v, hodge_polygon(h)):
        raise ValueError(f"{v!r} is not below the Hodge polygon of (n={h.n}, d={h.d})")


def is_basic(v: NewtonPoint) -> bool:
    return v.is_basic()


def is_hn_decomposable(v: NewtonPoint, h: HodgeDatum) -> bool:
    """Some turning point of v lies on the Hodge polygon (basic: none exist)."""
    _require_member(v, h)
    return any(y == h.hodge_value(x) for x, y in v.turning_points())


def is_strongly_regular(v: NewtonPoint, h: HodgeDatum) -> bool:
    """Every turning point of v lies on the Hodge polygon (basic: vacuous)."""
    _require_member(v, h)
    return all(y == h.hodge_value(x) for x, y in v.turning_points())


def enumerate_sr(h: HodgeDatum) -> tuple[NewtonPoint, ...]:
    return tuple(v for v in enumerate_kottwitz(h) if is_strongly_regular(v, h))


def levi_pushforward(L: LeviDatum) -> NewtonPoint:
    """Concatenate the per-block constant slopes d_i/n_i, sorted decreasing."""
    slopes = []
    for ni, di in zip(L.composition, L.distribution):
        slopes.extend([Fraction(di, ni)] * ni)
    slopes.sort(reverse=True)
    v = NewtonPoint(slopes)
    if math.gcd(L.d, L.n) == 1 and len(L.composition) >= 2 and v.is_basic():
        raise AssertionError("proper Levi pushforward cannot be basic for coprime (d, n)")
    return v


def stratum_dim(v: NewtonPoint, h: HodgeDatum) -> int:
    """Pairing of mu - v with (n-1, n-3, ..., 1-n); d(n-d) exactly for basic v."""
    _require_member(v, h)
    n = h.n
    total = sum((n + 1 - 2 * (i + 1)) * (mu_i - v_i) for i, (mu_i, v_i) in enumerate(zip(h.mu, v.slopes)))
    if total.denominator != 1:
        raise AssertionError(f"non-integral stratum dimension {total}")
    return int(total)


def hasse_edges(S) -> list[tuple[NewtonPoint, NewtonPoint]]:
    """Covering pairs (a, b) with a < b, in lexicographic order."""
    elems = sorted(set(S), key=lambda v: v.slopes)
    below = {
        (i, j)
        for i, a in enumerate(elems)
        for j, b in enumerate(elems)
        if i != j and leq(a, b)
    }
    edges = []
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            if (i, j) not in below:
                continue
            if any((i, k) in below and (k, j) in below for k in range(len(elems))):
                continue
            edges.append((a, b))
    edges.sort(key=lambda e: (e[0].slopes, e[1].slopes))
    return edges


def kottwitz_to_json(points, h: HodgeDatum, edges=None) -> str:
    """JSON for an enumerated set and optionally its Hasse diagram."""
    elems = sorted(set(points), key=lambda v: v.slopes)
    index = {v: i for i, v in enumerate(elems)}
    doc = {
        "n": h.n,
        "d": h.d,
        "points": [v.to_json() for v in elems],
    }
    if edges is not None:
        doc["hasse_edges"] = [[index[a], index[b]] for a, b in edges]
    return json.dumps(doc, sort_keys=True)
