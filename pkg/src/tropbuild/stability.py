"""Torus (semi)stability of Grassmannian points via residual supports.

At an apartment point u, the residual support of a tropical Plücker
vector is the set of d-subsets achieving the minimal twisted valuation
tp(I) - sum(u_i, i in I); it is the Plücker support of the reduction of
the point at u.  Semistability for the torus of the ambient frame is the
exact convex-position test: 0 lies in the convex hull of the recentred
weights chi_I - (d/n) * ones over the support, and stability asks for 0
interior to that hull inside the sum-zero hyperplane.  Both reduce to one
rational LP (maximize the minimal barycentric coordinate) plus a rank
computation, so every verdict is exact and comes with a certificate.

``find_destabilizer_bounded`` is a one-sided oracle only: it scans the
finitely many base-rational subspaces with echelon form of bounded
t-degree for one of positive slope.  Finding one proves instability;
exhausting the family proves nothing, since arbitrary subspaces are
unbounded in degree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import inf

from .grass import GrassPoint, TropPlueckerVector, frame_change, trop_pluecker
from .kottwitz import HodgeDatum, LeviDatum, NewtonPoint, levi_pushforward
from .linalg import rank
from .linprog import INFEASIBLE, OPTIMAL, solve_lp
from .rationals import frac
from .valfield import PuiseuxRational

MAX_DESTABILIZER_CANDIDATES = 500_000


class GuardError(ValueError):
    """A complexity guard was exceeded."""


class HullPosition(Enum):
    EXTERIOR = "exterior"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


class Stability(Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly_semistable"
    UNSTABLE = "unstable"


_POSITION_TO_STABILITY = {
    HullPosition.INTERIOR: Stability.STABLE,
    HullPosition.BOUNDARY: Stability.STRICTLY_SEMISTABLE,
    HullPosition.EXTERIOR: Stability.UNSTABLE,
}


@dataclass(frozen=True)
class ResidualSupport:
    """The argmin d-subsets of the u-twisted tropical vector."""

    subsets: tuple[tuple[int, ...], ...]
    u: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.subsets:
            raise ValueError("empty residual support")


def weight_vector(I, h: HodgeDatum) -> tuple[Fraction, ...]:
    """chi_I recentred to sum zero: chi_I - (d/n) * ones."""
    shift = Fraction(h.d, h.n)
    return tuple((1 - shift) if i in I else -shift for i in range(h.n))


def residual_support(tp: TropPlueckerVector, u, h: HodgeDatum | None = None) -> ResidualSupport:
    """Subsets achieving min over finite I of tp(I) - sum(u_i, i in I)."""
    u = tuple(frac(v) for v in u)
    if len(u) != tp.n:
        raise ValueError(f"need {tp.n} coordinates, got {len(u)}")
    if h is not None and (h.n, h.d) != (tp.n, tp.d):
        raise ValueError("Hodge datum disagrees with tropical vector")
    best = None
    arg = []
    for key, v in tp.values.items():
        if v == inf:
            continue
        tw = v - sum(u[i] for i in key)
        if best is None or tw < best:
            best, arg = tw, [key]
        elif tw == best:
            arg.append(key)
    return ResidualSupport(tuple(sorted(arg)), u)


def hull_position(S: ResidualSupport, h: HodgeDatum, with_certificate: bool = False):
    """Exact position of 0 relative to conv{weight_vector(I): I in S}.

    One LP maximizes the minimal barycentric coordinate tau subject to the
    convex-combination constraints; tau < 0 or infeasible means exterior,
    tau = 0 boundary, and tau > 0 interior provided the weights span the
    full sum-zero space.
    """
    keys = list(S.subsets)
    n = h.n
    k = len(keys)
    if k == math.comb(n, d := h.d) and 0 < d < n:
        # full support: the hypersimplex contains its barycenter interiorly
        if with_certificate:
            return HullPosition.INTERIOR, {I: Fraction(1, k) for I in keys}
        return HullPosition.INTERIOR
    weights = [weight_vector(I, h) for I in keys]
    # variables: lambda_1..lambda_k (nonnegative), tau (free); maximize tau
    c = [Fraction(0)] * k + [Fraction(1)]
    a_eq = []
    b_eq = []
    for coord in range(n):
        a_eq.append([weights[j][coord] for j in range(k)] + [Fraction(0)])
        b_eq.append(Fraction(0))
    a_eq.append([Fraction(1)] * k + [Fraction(0)])
    b_eq.append(Fraction(1))
    a_ub = []
    b_ub = []
    for j in range(k):
        row = [Fraction(0)] * (k + 1)
        row[j] = Fraction(-1)
        row[k] = Fraction(1)
        a_ub.append(row)  # tau - lambda_j <= 0
        b_ub.append(Fraction(0))
    res = solve_lp(
        c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq, nonneg=[True] * k + [False])
    if res.status == INFEASIBLE or (res.status == OPTIMAL and res.value < 0):
        pos, cert = HullPosition.EXTERIOR, None
    else:
        assert res.status == OPTIMAL
        cert = {keys[j]: res.x[j] for j in range(k)}
        if res.value == 0:
            pos = HullPosition.BOUNDARY
        else:
            full = rank([list(w) for w in weights]) == n - 1
            pos = HullPosition.INTERIOR if full else HullPosition.BOUNDARY
    if with_certificate:
        return pos, cert
    return pos


def torus_stability(x: GrassPoint, g=None, u=None, h: HodgeDatum | None = None) -> Stability:
    """GIT verdict for the torus diagonal in frame g at apartment point u."""
    if h is None:
        h = HodgeDatum(x.n, x.d)
    if u is None:
        u = [Fraction(0)] * x.n
    y = x if g is None else frame_change(x, g)
    S = residual_support(trop_pluecker(y), u, h)
    return _POSITION_TO_STABILITY[hull_position(S, h)]


def _echelon_candidates(n: int, w: int, q_field, degree_bound: int):
    """All reduced echelon w x n matrices over F_q[t] with entries of
    t-degree <= degree_bound, deterministic order."""
    coeff_tuples = list(itertools.product(range(q_field.q), repeat=degree_bound + 1))
    for pivots in itertools.combinations(range(n), w):
        free_cells = [
            (i, j)
            for i in range(w)
            for j in range(n)
            if j > pivots[i] and j not in pivots
        ]
        for assignment in itertools.product(coeff_tuples, repeat=len(free_cells)):
            yield pivots, dict(zip(free_cells, assignment))


def _destabilizer_count(n: int, q: int, degree_bound: int) -> int:
    total = 0
    per_cell = q ** (degree_bound + 1)
    for w in range(1, n):
        for pivots in itertools.combinations(range(n), w):
            cells = sum(
                1 for i in range(w) for j in range(n) if j > pivots[i] and j not in pivots
            )
            total += per_cell**cells
    return total


def find_destabilizer_bounded(x: GrassPoint, degree_bound: int):
    """Search bounded-degree base-rational subspaces W maximizing
    slope(W) = (dim(U cap W_K) - (d/n) dim W) / dim W; return the first
    maximizer with positive slope, or None.  None proves nothing."""
    n, d = x.n, x.d
    base = x.base
    if n > 5 or base.q > 4 or degree_bound > 2:
        raise GuardError(f"bounds exceeded: n={n}, q={base.q}, degree_bound={degree_bound}")
    count = _destabilizer_count(n, base.q, degree_bound)
    if count > MAX_DESTABILIZER_CANDIDATES:
        raise GuardError(f"{count} candidate subspaces exceed the enumeration cap")
    field, m = x.field, x.m
    zero = PuiseuxRational.zero(base)
    one = PuiseuxRational.one(base)
    best = None
    best_w = None
    for w in range(1, n):
        for pivots, cells in _echelon_candidates(n, w, base, degree_bound):
            rows = []
            for i in range(w):
                row = [zero] * n
                row[pivots[i]] = one
                for (ci, cj), coeffs in cells.items():
                    if ci == i:
                        row[cj] = PuiseuxRational(base, 1, coeffs)
                rows.append(row)
            stacked = [[a.lift(field, m) for a in row] for row in x.matrix]
            stacked += [[a.lift(field, m) for a in row] for row in rows]
            meet = d + w - rank(stacked)
            slope = (Fraction(meet) - Fraction(d, n) * w) / w
            if slope > 0 and (best is None or slope > best):
                best = slope
                best_w = rows
    if best is None:
        return None
    return best_w, best


def line_in_rational_hyperplane(x: GrassPoint) -> bool:
    """Exact test whether a line point (d = 1) lies in a base-rational
    hyperplane, i.e. whether its entries are linearly dependent over the
    base field F = F_q(t).

    Clears denominators, grades the resulting polynomials in s = t^(1/m)
    by the s-power class mod m and the F_p-coordinates of the residue
    extension, and computes the rank of the coefficient matrix over F;
    independence is equivalent to full rank n.  This settles membership in
    the d = 1 stable locus exactly (unlike the bounded destabilizer scan).
    """
    if x.d != 1:
        raise ValueError("rational-hyperplane test needs d = 1")
    base = x.base
    if base.r != 1:
        raise ValueError("implemented for prime base residue fields only")
    from .valfield import poly_divmod, poly_gcd, poly_mul

    field, m = x.field, x.m
    entries = [a.lift(field, m) for a in x.matrix[0]]
    common = (1,)
    for a in entries:
        g = poly_gcd(field, common, a.den)
        common = poly_mul(field, common, poly_divmod(field, a.den, g)[0])
    graded_rows = []
    for a in entries:
        q, rem = poly_divmod(field, common, a.den)
        assert not rem
        y = poly_mul(field, a.num, q)
        coeffs: dict[tuple[int, int], dict[int, int]] = {}
        for deg, code in enumerate(y):
            if not code:
                continue
            j, level = deg % m, deg // m
            for kk, ck in enumerate(field.coeffs(code)):
                if ck:
                    coeffs.setdefault((j, kk), {})[level] = ck
        graded_rows.append(coeffs)
    keys = sorted({key for row in graded_rows for key in row})
    mat = []
    for row in graded_rows:
        out = []
        for key in keys:
            poly = row.get(key, {})
            tup = tuple(poly.get(level, 0) for level in range(max(poly) + 1)) if poly else ()
            out.append(PuiseuxRational(base, 1, tup))
        mat.append(out)
    return rank(mat) < x.n


def hn_of_block_point(blocks, h: HodgeDatum) -> tuple[NewtonPoint, GrassPoint]:
    """Validate a strictly-decreasing-slope block family and assemble it.

    Each block is a GrassPoint stable for its own standard torus at the
    origin, or a bare int n_i standing for the empty d_i = 0 block.  The
    returned Newton point is the sorted concatenation of the per-block
    constant slopes; the assembled block-diagonal matrix realizes the
    filtration whose graded slopes those are.
    """
    comp = []
    dist = []
    prev = None
    sized: list[tuple[int, int, GrassPoint | None]] = []
    for blk in blocks:
        if isinstance(blk, int):
            ni, di, pt = blk, 0, None
        else:
            ni, di, pt = blk.n, blk.d, blk
        slope = Fraction(di, ni)
        if prev is not None and slope >= prev:
            raise ValueError(f"block slopes must strictly decrease, got {prev} then {slope}")
        prev = slope
        if pt is not None and 0 < di < ni:
            if torus_stability(pt) != Stability.STABLE:
                raise ValueError(f"block Gr({di},{ni}) is not torus-stable at its origin")
        comp.append(ni)
        dist.append(di)
        sized.append((ni, di, pt))
    if (sum(comp), sum(dist)) != (h.n, h.d):
        raise ValueError(f"blocks sum to ({sum(dist)}, {sum(comp)}), need ({h.d}, {h.n})")
    newton = levi_pushforward(LeviDatum(tuple(comp), tuple(dist)))

    fields = [pt.field for _, _, pt in sized if pt is not None]
    if not fields:
        raise ValueError("at least one block must carry a point")
    p = fields[0].p
    r = 1
    m = 1
    for _, _, pt in sized:
        if pt is None:
            continue
        if pt.field.p != p:
            raise ValueError("blocks live over different characteristics")
        r = r * pt.field.r // math.gcd(r, pt.field.r)
        m = m * pt.m // math.gcd(m, pt.m)
    from .gfield import gf

    field = gf(p, r)
    zero = PuiseuxRational.zero(field, m)
    rows = []
    col_off = 0
    for ni, di, pt in sized:
        for i in range(di):
            row = [zero] * h.n
            for j in range(ni):
                row[col_off + j] = pt.matrix[i][j].lift(field, m)
            rows.append(row)
        col_off += ni
    assembled = GrassPoint(rows, base=sized[0][2].base if sized[0][2] is not None else fields[0])
    return newton, assembled
