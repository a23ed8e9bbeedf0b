"""Retraction from torus-stable Grassmannian points to the building.

The apartment retraction of a tropical Plücker vector tp is the unique
sum-zero maximizer of the concave piecewise-linear function

    phi(u) = min over finite I of  tp(I) - sum(u_i, i in I),

computed by one exact LP.  phi is unbounded above exactly when the point
is not semistable for the apartment's torus, and the maximizer is unique
exactly when the residual support at the optimum has interior hull
position; both degeneracies raise typed errors carrying certificates.

The global retraction iterates: start from the apartment retraction in
the standard frame, recompute it in every candidate frame through the
current point, and move to the first disagreeing value; a fixed point is
a point on which all visited apartments agree.  For points sharing their
tropical shadow with an actual apartment-family image the first value is
already the fixed point; for frame-translated points the walk crosses the
finitely many walls separating it from the true value.

The d = 1 cross-check is the classical norm-restriction formula
a -> val(sum a_i x_i), compared against the building norm of the
retraction on a deterministic-plus-seeded family of covectors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .building import (
    BuildingPoint,
    Frame,
    apartment_contains,
    candidate_frames,
    norm_eval,
    points_equal,
)
from .grass import GrassPoint, TropPlueckerVector, frame_change, trop_pluecker
from .kottwitz import HodgeDatum
from .linprog import OPTIMAL, UNBOUNDED, solve_lp
from .rationals import proj0
from .stability import (
    HullPosition,
    hn_of_block_point,
    hull_position,
    residual_support,
)
from .valfield import PuiseuxRational


class NotSemistableForTorus(ArithmeticError):
    """phi unbounded above: 0 outside the hull of the support weights."""

    def __init__(self, message, support=None):
        super().__init__(message)
        self.support = support


class NonUniqueMaximizer(ArithmeticError):
    """The optimal face is positive-dimensional (boundary hull position)."""

    def __init__(self, message, support=None):
        super().__init__(message)
        self.support = support


class NotStable(ArithmeticError):
    """Some visited apartment reported torus-instability."""

    def __init__(self, message, frame=None):
        super().__init__(message)
        self.frame = frame


class MaxIterationsExceeded(RuntimeError):
    """The fixed-point walk did not stabilize; carries the visited points."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = tuple(trace)


@dataclass(frozen=True)
class RetractionConfig:
    frame_depth: int = 1
    max_iterations: int = 64
    verify_depth: int = 2

    def __post_init__(self):
        if self.frame_depth < 1 or self.max_iterations < 1:
            raise ValueError("config values must be positive")
        if self.verify_depth < self.frame_depth:
            raise ValueError("verify_depth must be at least frame_depth")


def apartment_retract(tp: TropPlueckerVector, h: HodgeDatum | None = None):
    """Sum-zero maximizer of phi; unique by the interior-support criterion."""
    if h is None:
        h = HodgeDatum(tp.n, tp.d)
    elif (h.n, h.d) != (tp.n, tp.d):
        raise ValueError("Hodge datum disagrees with tropical vector")
    n = tp.n
    shift = Fraction(h.d, h.n)
    a_ub = []
    b_ub = []
    for key, v in tp.values.items():
        if v == inf:
            continue
        row = [Fraction(1) if i in key else Fraction(0) for i in range(n)]
        row = [r - shift for r in row]  # subtracting the mean keeps phi shift-free
        a_ub.append(row + [Fraction(1)])
        b_ub.append(v)
    a_eq = [[Fraction(1)] * n + [Fraction(0)]]
    b_eq = [Fraction(0)]
    c = [Fraction(0)] * n + [Fraction(1)]
    res = solve_lp(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq)
    if res.status == UNBOUNDED:
        raise NotSemistableForTorus(
            "0 lies outside the weight hull of the finite support", support=tp.support())
    assert res.status == OPTIMAL
    u = tuple(res.x[:n])
    S = residual_support(tp, u, h)
    pos = hull_position(S, h)
    if pos == HullPosition.BOUNDARY:
        raise NonUniqueMaximizer(
            "optimal face is positive-dimensional", support=S.subsets)
    assert pos == HullPosition.INTERIOR
    return u


def retract_in_frame(x: GrassPoint, frame: Frame, h: HodgeDatum | None = None) -> BuildingPoint:
    """Apartment retraction of x in the given frame, as a building point."""
    u = apartment_retract(trop_pluecker(frame_change(x, frame.matrix)), h)
    return BuildingPoint(frame, u)


def _swap_sign_parity(I, i, j):
    """Parity of moving column i into j's slot inside the sorted subset."""
    lo, hi = (i, j) if i < j else (j, i)
    return sum(1 for k in I if k != j and lo < k < hi) % 2


def _wall_candidates(x: GrassPoint, z: BuildingPoint, h: HodgeDatum):
    """Candidate (frame, tropical vector) pairs at z's walls.

    Computes the minors of x in z's frame once; each wall generator is a
    transposition (minors permuted) or a column operation (each affected
    minor updated by base-coefficient multiples of its neighbours), so no
    candidate needs a fresh minor computation.
    """
    from .building import wall_moves
    from .grass import TropPlueckerVector, _trop_audit, check_trop_relations, pluecker

    y = frame_change(x, z.frame.matrix)
    minors = pluecker(y)
    d, n, m = x.d, x.n, x.m
    for gen, kind, payload in wall_moves(z, z.frame):
        if kind == "perm":
            i, j = payload
            sigma = {i: j, j: i}
            vals = {
                I: minors[tuple(sorted(sigma.get(k, k) for k in I))].valuation()
                for I in minors
            }
            coords = list(z.coords)
            coords[i], coords[j] = coords[j], coords[i]
        else:
            j, terms = payload
            vals = {}
            for I, base_minor in minors.items():
                if j not in I:
                    vals[I] = base_minor.valuation()
                    continue
                acc = base_minor
                rest = set(I) - {j}
                for i, coeff in terms:
                    if i in I:
                        continue
                    neighbour = minors[tuple(sorted(rest | {i}))]
                    term = coeff * neighbour
                    acc = acc - term if _swap_sign_parity(I, i, j) else acc + term
                vals[I] = acc.valuation()
            # tight twists leave the point's coordinates unchanged
            coords = list(z.coords)
        tp = TropPlueckerVector(d, n, vals, m=m)
        if _trop_audit is not None:
            _trop_audit.append((check_trop_relations(tp), tp))
        yield z.frame.compose(gen), tp, tuple(coords)


def global_retract(
    x: GrassPoint,
    cfg: RetractionConfig = RetractionConfig(),
    h: HodgeDatum | None = None,
    verify: bool = False,
) -> BuildingPoint:
    """Fixed point of the apartment retractions over the candidate family."""
    if h is None:
        h = HodgeDatum(x.n, x.d)
    start = Frame.identity(x.base, x.n)
    z = _retract_step(x, start, h)
    trace = [z]
    for _ in range(cfg.max_iterations):
        moved = False
        if cfg.frame_depth == 1:
            for f, tp, coords in _wall_candidates(x, z, h):
                # z's own coordinates in f are already optimal exactly when
                # their residual support has interior hull position
                S = residual_support(tp, coords, h)
                if hull_position(S, h) == HullPosition.INTERIOR:
                    continue
                try:
                    u = apartment_retract(tp, h)
                except NotSemistableForTorus as e:
                    raise NotStable(
                        f"torus-unstable in a visited apartment: {e}", frame=f) from e
                zf = BuildingPoint(f, u)
                if not points_equal(zf, z):
                    z = zf
                    trace.append(z)
                    moved = True
                    break
        else:
            for f in candidate_frames(z, cfg.frame_depth):
                zf = _retract_step(x, f, h)
                if not points_equal(zf, z):
                    z = zf
                    trace.append(z)
                    moved = True
                    break
        if not moved:
            if verify and cfg.verify_depth > cfg.frame_depth:
                for f in candidate_frames(z, cfg.verify_depth):
                    zf = _retract_step(x, f, h)
                    if not points_equal(zf, z):
                        raise MaxIterationsExceeded(
                            "deeper candidate family broke the fixed point", trace)
            return z
    raise MaxIterationsExceeded(
        f"no fixed point after {cfg.max_iterations} iterations", trace)


def _retract_step(x, f, h):
    try:
        return retract_in_frame(x, f, h)
    except NotSemistableForTorus as e:
        raise NotStable(f"torus-unstable in a visited apartment: {e}", frame=f) from e


def retraction_certificate(x: GrassPoint, z: BuildingPoint, cfg: RetractionConfig,
                           h: HodgeDatum | None = None) -> list[dict]:
    """Per-frame supports and hull certificates at the fixed point."""
    if h is None:
        h = HodgeDatum(x.n, x.d)
    out = []
    for f in candidate_frames(z, cfg.frame_depth):
        tp = trop_pluecker(frame_change(x, f.matrix))
        _, coords = apartment_contains(z, f)
        S = residual_support(tp, coords, h)
        pos, cert = hull_position(S, h, with_certificate=True)
        out.append(
            {
                "frame": [[str(a) for a in row] for row in f.matrix],
                "coords": [str(c) for c in coords],
                "support": [[i + 1 for i in key] for key in S.subsets],
                "hull_position": pos.value,
                "barycentric": {
                    ",".join(str(i + 1) for i in key): str(v) for key, v in (cert or {}).items()
                },
            }
        )
    return out


def drinfeld_norm(x: GrassPoint, a):
    """val(sum a_i x_i) for a line point (d = 1) and a covector a."""
    if x.d != 1:
        raise ValueError("Drinfeld norm needs d = 1")
    acc = None
    for ai, xi in zip(a, x.matrix[0]):
        term = ai * xi if isinstance(ai, PuiseuxRational) else xi * ai
        acc = term if acc is None else acc + term
    return acc.valuation() if acc is not None and acc else inf


def _random_covector(field, n, rng, max_deg=2):
    while True:
        cov = []
        for _ in range(n):
            coeffs = tuple(rng.randrange(field.q) for _ in range(rng.randint(1, max_deg + 1)))
            cov.append(PuiseuxRational(field, 1, coeffs))
        if any(cov):
            return cov


def verify_drinfeld(
    x: GrassPoint,
    sample_size: int = 100,
    seed: int = 0,
    cfg: RetractionConfig = RetractionConfig(),
) -> bool:
    """Retraction norm vs. norm-restriction formula, up to one constant.

    Samples the standard covector basis plus seeded random covectors over
    the base field; any single disagreement returns False.
    """
    if x.d != 1:
        raise ValueError("Drinfeld comparison needs d = 1")
    z = global_retract(x, cfg)
    base = x.base
    one, zero = PuiseuxRational.one(base), PuiseuxRational.zero(base)
    covectors = [[one if i == j else zero for j in range(x.n)] for i in range(x.n)]
    rng = random.Random(seed)
    covectors += [_random_covector(base, x.n, rng) for _ in range(sample_size)]
    constant = None
    for a in covectors:
        lhs = norm_eval(z, a)
        rhs = drinfeld_norm(x, a)
        if lhs == inf or rhs == inf:
            if lhs != rhs:
                return False
            continue
        diff = rhs - lhs
        if constant is None:
            constant = diff
        elif diff != constant:
            return False
    return True


def degenerate_family(blocks, N: int, h: HodgeDatum):
    """Block family escaping toward a Levi boundary direction.

    Validates the blocks (strictly decreasing slopes, per-block stability),
    assembles the block-diagonal point with the first block's columns
    scaled by t^N, and returns (point, building point, Newton point): the
    building point is glued from the per-block apartment retractions with
    the scaled block shifted by N, so its coordinates are affine in N with
    slope the recentred first-block indicator.  The ambient support of the
    assembled point is mixed-block only, so the ambient LP certifies the
    escape ray rather than a finite value.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    newton, assembled = hn_of_block_point(blocks, h)
    coords = []
    offset = 0
    first_size = None
    for blk in blocks:
        if isinstance(blk, int):
            ni, di, pt = blk, 0, None
        else:
            ni, di, pt = blk.n, blk.d, blk
        if first_size is None:
            first_size = ni
        if pt is None or di in (0, ni):
            coords.extend([Fraction(0)] * ni)
        else:
            coords.extend(apartment_retract(trop_pluecker(pt)))
        offset += ni
    shifted = [c + N if j < first_size else c for j, c in enumerate(coords)]
    z = BuildingPoint(Frame.identity(assembled.base, h.n), proj0(shifted))
    field, m = assembled.field, assembled.m
    tN = PuiseuxRational.t_power(field, N, m) if N else PuiseuxRational.one(field, m)
    one, zero = PuiseuxRational.one(field, m), PuiseuxRational.zero(field, m)
    scale = [[(tN if j < first_size else one) if i == j else zero for j in range(h.n)]
             for i in range(h.n)]
    x_n = frame_change(assembled, scale)
    return x_n, z, newton
