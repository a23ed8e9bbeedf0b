"""Points of Gr(d, n) over a valued field and their tropical Plücker data.

A point is a d x n matrix of full rank d whose row span is the actual
object; Plücker coordinates are the maximal minors indexed by d-subsets
of columns (0-based internally, 1-based in JSON).  The tropical Plücker
vector records exact minor valuations shifted so the minimum is 0, which
kills the projective scalar ambiguity.

``gauss_surrogate`` builds a concrete point whose tropical data is the
weight functional I -> sum(u_i, i in I) of an apartment point u: a Cauchy
matrix (all maximal minors nonzero) times diag(t^u).  The Cauchy residues
are drawn from a proper extension of the declared base residue field and
the construction re-picks the extension until no two adjacent minors have
ratio inside the base field; base-rational column operations then cannot
cancel leading minor terms, which keeps the surrogate's tropical shadow
faithful in every apartment the retraction machinery visits.
"""

from __future__ import annotations

import json
import math
from itertools import combinations
from math import inf

from .gfield import GF, embed_code, gf
from .kottwitz import HodgeDatum
from .linalg import rank
from .rationals import common_denominator, frac, parse_fraction
from .valfield import (
    PuiseuxRational,
    RamificationError,
    format_field,
    parse_field,
    parse_scalar,
)


class GrassPoint:
    """Row span of a full-rank d x n matrix over GF(p^r)(t^(1/m))."""

    __slots__ = ("matrix", "d", "n", "field", "m", "base")

    def __init__(self, matrix, base: GF | None = None):
        rows = [list(row) for row in matrix]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        d, n = len(rows), len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged matrix")
        if d > n:
            raise ValueError(f"d={d} exceeds n={n}")
        field = None
        m = 1
        for row in rows:
            for a in row:
                if not isinstance(a, PuiseuxRational):
                    raise TypeError("matrix entries must be PuiseuxRational")
                field = a.field if field is None or a.field.r > field.r else field
                m = m * a.m // math.gcd(m, a.m)
        rows = [[a.lift(field, m) for a in row] for row in rows]
        if rank(rows) != d:
            raise ValueError(f"matrix rank below {d}")
        self.matrix = tuple(tuple(row) for row in rows)
        self.d, self.n = d, n
        self.field, self.m = field, m
        self.base = base if base is not None else field
        if self.base.p != field.p or field.r % self.base.r:
            raise ValueError(f"base {self.base} does not embed into {field}")

    def columns(self, idx):
        return [[row[j] for j in idx] for row in self.matrix]

    def __repr__(self):
        return f"GrassPoint(d={self.d}, n={self.n}, {self.field!r}, m={self.m})"


def subsets(n: int, d: int):
    return combinations(range(n), d)


def _all_minors(matrix, d, n):
    """Maximal minors via Laplace expansion memoized over (rows, cols)."""
    cache: dict = {}

    def minor(rows, cols):
        if not rows:
            return None
        key = (rows, cols)
        got = cache.get(key)
        if got is not None:
            return got
        if len(rows) == 1:
            val = matrix[rows[0]][cols[0]]
        else:
            c = cols[-1]
            val = None
            k = len(rows)
            for pos, r in enumerate(rows):
                entry = matrix[r][c]
                if not entry:
                    continue
                sub = minor(tuple(x for x in rows if x != r), cols[:-1])
                term = entry * sub
                if (pos + k - 1) % 2:
                    term = -term
                val = term if val is None else val + term
            if val is None:
                val = matrix[rows[0]][cols[0]] - matrix[rows[0]][cols[0]]
        cache[key] = val
        return val

    all_rows = tuple(range(d))
    return {cols: minor(all_rows, cols) for cols in subsets(n, d)}


def pluecker(x: GrassPoint) -> dict[tuple[int, ...], PuiseuxRational]:
    """Maximal minors keyed by sorted column subsets; defined up to a common
    scalar (consumers use ratios and valuations only)."""
    return _all_minors(x.matrix, x.d, x.n)


class TropPlueckerVector:
    """Minor valuations normalized to minimum 0; +inf marks vanishing minors."""

    __slots__ = ("d", "n", "m", "values")

    def __init__(self, d: int, n: int, values, m: int = 1):
        vals = {}
        finite_min = None
        for key, v in values.items():
            key = tuple(sorted(key))
            if len(key) != d or len(set(key)) != d or not all(0 <= i < n for i in key):
                raise ValueError(f"bad subset key {key}")
            v = v if v == inf else frac(v)
            vals[key] = v
            if v != inf and (finite_min is None or v < finite_min):
                finite_min = v
        if len(vals) != math.comb(n, d):
            raise ValueError("missing subsets")
        if finite_min is None:
            raise ValueError("identically infinite tropical vector")
        self.values = {k: (v if v == inf else v - finite_min) for k, v in sorted(vals.items())}
        self.d, self.n, self.m = d, n, m

    def __getitem__(self, key):
        return self.values[tuple(sorted(key))]

    def support(self):
        return tuple(k for k, v in self.values.items() if v != inf)

    def twist(self, c) -> "TropPlueckerVector":
        """Add sum(c_i, i in I) to each value (a monomial frame change)."""
        c = [frac(v) for v in c]
        return TropPlueckerVector(
            self.d, self.n,
            {k: (inf if v == inf else v + sum(c[i] for i in k)) for k, v in self.values.items()},
            m=self.m,
        )

    def __eq__(self, other):
        return (
            isinstance(other, TropPlueckerVector)
            and (self.d, self.n) == (other.d, other.n)
            and self.values == other.values
        )

    def __repr__(self):
        return f"TropPlueckerVector(d={self.d}, n={self.n}, {self.values})"

    def to_json(self) -> str:
        vals = {
            ",".join(str(i + 1) for i in k): ("inf" if v == inf else str(v))
            for k, v in self.values.items()
        }
        return json.dumps({"d": self.d, "n": self.n, "values": vals}, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "TropPlueckerVector":
        doc = json.loads(text)
        values = {}
        for key, v in doc["values"].items():
            idx = tuple(int(s) - 1 for s in key.split(","))
            values[idx] = inf if v == "inf" else parse_fraction(v)
        return TropPlueckerVector(doc["d"], doc["n"], values)


_trop_audit: list | None = None


def enable_trop_audit() -> None:
    """Start recording the exchange-relation verdict of every tropical
    vector computed by trop_pluecker (used by the verification suites)."""
    global _trop_audit
    _trop_audit = []


def drain_trop_audit() -> list[tuple[bool, "TropPlueckerVector"]]:
    global _trop_audit
    out, _trop_audit = _trop_audit or [], None
    return out


def trop_pluecker(x: GrassPoint) -> TropPlueckerVector:
    tp = TropPlueckerVector(
        x.d, x.n, {k: v.valuation() for k, v in pluecker(x).items()}, m=x.m
    )
    if _trop_audit is not None:
        _trop_audit.append((check_trop_relations(tp), tp))
    return tp


def check_trop_relations(tp: TropPlueckerVector) -> bool:
    """Three-term exchange: over every size-(d-2) core S and quadruple
    i<j<k<l, the minimum of the three cross sums is attained twice."""
    n, d = tp.n, tp.d
    if d < 1 or d > n - 1:
        return True

    def val(core, a, b):
        return tp[core + (a, b)]

    for core in combinations(range(n), d - 2) if d >= 2 else [()]:
        if d < 2:
            break
        rest = [i for i in range(n) if i not in core]
        for i, j, k, l in combinations(rest, 4):
            trio = (
                _plus(val(core, i, j), val(core, k, l)),
                _plus(val(core, i, k), val(core, j, l)),
                _plus(val(core, i, l), val(core, j, k)),
            )
            lo = min(trio)
            if lo != inf and sum(1 for t in trio if t == lo) < 2:
                return False
    return True


def _plus(a, b):
    return inf if a == inf or b == inf else a + b


def frame_change(x: GrassPoint, g) -> GrassPoint:
    """Right action on row spans: x -> x.g for invertible g over the base
    local field (integral powers of t only)."""
    g = [list(row) for row in g]
    n = x.n
    if len(g) != n or any(len(r) != n for r in g):
        raise ValueError("frame must be n x n")
    ge = []
    for row in g:
        out = []
        for a in row:
            if not isinstance(a, PuiseuxRational):
                raise TypeError("frame entries must be PuiseuxRational")
            if not a.is_ramification_one():
                raise ValueError(f"frame entry {a} has fractional ramification")
            out.append(a.lift(x.field, x.m))
        ge.append(out)
    from .linalg import det, matmul

    if not det(ge):
        raise ZeroDivisionError("singular frame")
    return GrassPoint(matmul([list(r) for r in x.matrix], ge), base=x.base)


def row_span_equal(x: GrassPoint, y: GrassPoint) -> bool:
    if (x.d, x.n) != (y.d, y.n):
        return False
    m = x.m * y.m // math.gcd(x.m, y.m)
    field = x.field if x.field.r >= y.field.r else y.field
    stacked = [[a.lift(field, m) for a in row] for row in x.matrix]
    stacked += [[a.lift(field, m) for a in row] for row in y.matrix]
    return rank(stacked) == x.d


def _cauchy_matrix(field: GF, d: int, n: int, shift: int = 0):
    """d x n Cauchy matrix 1/(x_i - y_j) over distinct nonzero parameters."""
    if field.q < n + d + 1 + shift:
        raise ValueError(f"field {field} too small for Cauchy({d}, {n})")
    xs = list(range(1 + shift, d + 1 + shift))
    ys = list(range(d + 1 + shift, d + n + 1 + shift))
    return [[field.inv(field.sub(xi, yj)) for yj in ys] for xi in xs]


def _cauchy_is_base_generic(field: GF, base: GF, cauchy, d: int, n: int) -> bool:
    """No maximal minor may be a base-field combination of its neighbours.

    A base-rational column operation col_j += sum(a_i t^(k_i) col_i) turns
    minor_I into minor_I plus base-coefficient multiples of the minors of
    the sets (I - j) + i, so the leading term survives in every such frame
    exactly when minor_I avoids the base span of those neighbours."""
    from itertools import product as iproduct

    consts = [
        [PuiseuxRational(field, 1, (c,) if c else ()) for c in row] for row in cauchy
    ]
    minors = _all_minors(consts, d, n)
    codes = {}
    for key, v in minors.items():
        if not v:
            return False
        codes[key] = v.num[0]  # constant polynomial
    base_image = [embed_code(c, base, field) for c in range(base.q)]
    for key, code in codes.items():
        for out in key:
            neighbours = [
                codes[tuple(sorted(set(key) - {out} | {inn}))]
                for inn in range(n)
                if inn not in key
            ]
            for combo in iproduct(base_image, repeat=len(neighbours)):
                acc = 0
                for a, m in zip(combo, neighbours):
                    if a:
                        acc = field.add(acc, field.mul(a, m))
                if acc == code:
                    return False
    return True


def gauss_surrogate(
    u,
    h: HodgeDatum,
    frame=None,
    *,
    p: int = 2,
    base_r: int = 1,
) -> GrassPoint:
    """A point with tropical Plücker vector I -> sum(u_i, i in I), full
    residual support at u: Cauchy(d, n) . diag(t^u) [. frame]."""
    u = [frac(v) for v in u]
    n, d = h.n, h.d
    if len(u) != n:
        raise ValueError(f"need {n} apartment coordinates, got {len(u)}")
    m = common_denominator(u)
    base = gf(p, base_r)
    r = base_r
    cauchy = None
    while cauchy is None:
        r += base_r
        if r > 14:
            raise RamificationError("no base-generic Cauchy matrix found")
        field = gf(p, r)
        if field.q < n + d + 1:
            continue
        for shift in range(min(field.q - n - d - 1, 2 * (n + d)) + 1):
            candidate = _cauchy_matrix(field, d, n, shift)
            if _cauchy_is_base_generic(field, base, candidate, d, n):
                cauchy = candidate
                break
    rows = []
    for i in range(d):
        row = []
        for j in range(n):
            mono = PuiseuxRational.t_power(field, u[j], m)
            row.append(mono * PuiseuxRational(field, m, (cauchy[i][j],) if cauchy[i][j] else ()))
        rows.append(row)
    x = GrassPoint(rows, base=base)
    if frame is not None:
        x = frame_change(x, frame)
    return x


# -- point files --

def grass_to_json(x: GrassPoint) -> str:
    doc = {
        "field": format_field(x.field),
        "base_field": format_field(x.base),
        "ramification": x.m,
        "d": x.d,
        "n": x.n,
        "matrix": [[str(a) for a in row] for row in x.matrix],
    }
    return json.dumps(doc, sort_keys=True)


def grass_from_json(text: str) -> GrassPoint:
    doc = json.loads(text)
    field = parse_field(doc["field"])
    base = parse_field(doc.get("base_field", doc["field"]))
    m = int(doc.get("ramification", 1))
    rows = [[parse_scalar(s, field, m) for s in row] for row in doc["matrix"]]
    x = GrassPoint(rows, base=base)
    if (x.d, x.n) != (int(doc["d"]), int(doc["n"])):
        raise ValueError("matrix shape disagrees with declared (d, n)")
    return x
