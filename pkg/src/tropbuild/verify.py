"""Seeded verification suites behind ``tropbuild verify``.

Each suite returns a list of Check records; a suite passes when every
check does.  All randomness flows through one seeded generator per suite,
so a report replays exactly given (suite, seed).  While a suite runs, the
tropical audit records the exchange-relation verdict of every tropical
Plücker vector computed anywhere inside it, and the suite appends that
tally as its final check.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .building import BuildingPoint, Frame, act, apartment_contains, points_equal
from .gfield import gf
from .grass import (
    GrassPoint,
    drain_trop_audit,
    enable_trop_audit,
    frame_change,
    gauss_surrogate,
    trop_pluecker,
)
from .kottwitz import (
    HodgeDatum,
    NewtonPoint,
    enumerate_kottwitz,
    enumerate_sr,
    hasse_edges,
    hodge_polygon,
    is_hn_decomposable,
    is_strongly_regular,
    stratum_dim,
)
from .linalg import matmul
from .rationals import frac, proj0
from .retract import (
    MaxIterationsExceeded,
    NotStable,
    RetractionConfig,
    global_retract,
    retract_in_frame,
    verify_drinfeld,
)
from .stability import HullPosition, hull_position, line_in_rational_hyperplane, residual_support
from .valfield import PuiseuxRational

SUITES = ("counts", "section", "drinfeld", "equivariance", "compat", "basechange",
          "hull", "matroid")


@dataclass
class Check:
    name: str
    ok: bool
    witness: dict | None = None


@dataclass
class Report:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_doc(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "checks": [
                {"name": c.name, "status": "pass" if c.ok else "fail"}
                | ({"witness": c.witness} if c.witness and not c.ok else {})
                for c in self.checks
            ],
        }


def _coprime_pairs(max_n: int):
    return [(n, d) for n in range(2, max_n + 1) for d in range(1, n) if math.gcd(n, d) == 1]


def _audit_check(checks: list[Check]):
    audit = drain_trop_audit()
    bad = [tp.to_json() for ok, tp in audit if not ok]
    checks.append(Check(
        "tropical_exchange_audit", not bad,
        {"vectors_checked": len(audit), "violations": bad[:3]} if bad else
        {"vectors_checked": len(audit)}))


# -- counts: the Newton-polygon combinatorics --

def run_counts(seed: int = 0) -> Report:
    checks = []
    for n, d in _coprime_pairs(9):
        got = len(enumerate_sr(HodgeDatum(n, d)))
        want = d * (n - d) + 1
        checks.append(Check(
            f"sr_count_n{n}_d{d}", got == want, {"got": got, "want": want}))
    h = HodgeDatum(5, 2)
    K = enumerate_kottwitz(h)
    checks.append(Check("kottwitz_size_n5_d2", len(K) == 8, {"got": len(K)}))
    indec = [v for v in K if not v.is_basic() and not is_hn_decomposable(v, h)]
    target = NewtonPoint([Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)])
    checks.append(Check(
        "unique_hn_indecomposable_n5_d2",
        indec == [target],
        {"got": [v.to_json() for v in indec]}))
    for n in range(2, 10):
        for d in range(1, n):
            if d in (1, n - 1) or n <= 4:
                hh = HodgeDatum(n, d)
                same = enumerate_sr(hh) == enumerate_kottwitz(hh)
                if not same:
                    checks.append(Check(f"fully_decomposable_n{n}_d{d}", False, {}))
    checks.append(Check("fully_decomposable_cases", True,
                        {"note": "sr equals full set for d in {1, n-1} or n <= 4"}))
    fig = NewtonPoint([1, Fraction(1, 2), Fraction(1, 2),
                       Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), 0])
    h73 = HodgeDatum(7, 3)
    checks.append(Check(
        "vertex_polygon_regression",
        fig.vertices() == ((0, 0), (1, 1), (3, 2), (6, 3), (7, 3))
        and is_hn_decomposable(fig, h73) and not is_strongly_regular(fig, h73),
        {"vertices": [list(v) for v in fig.vertices()]}))
    dim_ok = True
    mono_ok = True
    for n in range(2, 10):
        for d in range(1, n):
            hh = HodgeDatum(n, d)
            K = enumerate_kottwitz(hh)
            basic = NewtonPoint([Fraction(d, n)] * n)
            if stratum_dim(basic, hh) != d * (n - d) or stratum_dim(hodge_polygon(hh), hh) != 0:
                dim_ok = False
            for a, b in hasse_edges(K):
                if stratum_dim(a, hh) <= stratum_dim(b, hh):
                    mono_ok = False
    checks.append(Check("dimension_formula_basic", dim_ok, None))
    checks.append(Check("dimension_strictly_decreasing_up_hasse", mono_ok, None))
    return Report("counts", seed, checks)


# -- samplers shared by the retraction suites --

_SECTION_BUDGET = [(2, 1, 40), (3, 1, 30), (3, 2, 30), (4, 1, 25), (4, 3, 25),
                   (5, 1, 13), (5, 2, 13), (5, 3, 12), (5, 4, 12)]


def _grid_u(n: int):
    us = [[0] * n, [1] + [0] * (n - 1)]
    us.append([Fraction(n - i, 2) for i in range(n)])
    return us


def _random_u(n, rng, max_den=4):
    den = rng.choice([1, 2, 4])
    assert den <= max_den
    return [Fraction(rng.randint(-2 * den, 2 * den), den) for _ in range(n)]


def section_samples(seed: int):
    rng = random.Random(seed)
    for n, d, count in _SECTION_BUDGET:
        h = HodgeDatum(n, d)
        us = _grid_u(n)
        while len(us) < count:
            us.append(_random_u(n, rng))
        for u in us[:count]:
            yield h, [frac(v) for v in u]


def run_section(seed: int = 0, samples=None) -> Report:
    enable_trop_audit()
    checks = []
    cfg = RetractionConfig()
    bad = []
    total = 0
    for h, u in samples or section_samples(seed):
        total += 1
        x = gauss_surrogate(u, h)
        expected = BuildingPoint(Frame.identity(x.base, h.n), proj0(u))
        try:
            z = global_retract(x, cfg, h)
            ok = points_equal(z, expected)
        except (NotStable, MaxIterationsExceeded) as e:
            ok = False
        if not ok:
            bad.append({"n": h.n, "d": h.d, "u": [str(v) for v in u]})
    checks.append(Check("section_identity", not bad,
                        {"points": total, "failures": bad[:3]} if bad else {"points": total}))
    _audit_check(checks)
    return Report("section", seed, checks)


def _random_stable_line(n, rng, m=2):
    """A d=1 point with unit fractional tails, exactly base-independent."""
    field = gf(2, 2)
    base = gf(2)
    while True:
        entries = []
        for _ in range(n):
            coeffs = [0] * (2 * m + 1)
            coeffs[0] = 1
            for k in range(1, len(coeffs)):
                coeffs[k] = rng.randrange(field.q)
            shift = rng.randint(0, 2)
            val = PuiseuxRational(field, m, coeffs)
            entries.append(val * PuiseuxRational.t_power(field, shift, m))
        x = GrassPoint([entries], base=base)
        if not line_in_rational_hyperplane(x):
            return x


def drinfeld_samples(seed: int, count: int = 50):
    rng = random.Random(seed)
    sizes = [2, 3, 4]
    for i in range(count):
        yield _random_stable_line(sizes[i % len(sizes)], rng)


def run_drinfeld(seed: int = 0, count: int = 50) -> Report:
    enable_trop_audit()
    checks = []
    bad = []
    for i, x in enumerate(drinfeld_samples(seed, count)):
        try:
            ok = verify_drinfeld(x, sample_size=100, seed=seed + i)
        except (NotStable, MaxIterationsExceeded):
            ok = False
        if not ok:
            bad.append({"index": i, "n": x.n})
    checks.append(Check("drinfeld_agreement", not bad,
                        {"points": count, "failures": bad[:3]} if bad else {"points": count}))
    _audit_check(checks)
    return Report("drinfeld", seed, checks)


def _random_frame_word(field, n, rng, factors=None):
    zero, one = PuiseuxRational.zero(field), PuiseuxRational.one(field)
    out = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for _ in range(factors if factors is not None else rng.randint(1, 3)):
        kind = rng.choice(["mono", "perm", "elem"])
        if kind == "mono":
            g = [[PuiseuxRational.t_power(field, rng.randint(-2, 2)) if i == j else zero
                  for j in range(n)] for i in range(n)]
        elif kind == "perm":
            sigma = list(range(n))
            rng.shuffle(sigma)
            g = [[one if sigma[i] == j else zero for j in range(n)] for i in range(n)]
        else:
            i0, j0 = rng.sample(range(n), 2)
            coeffs = [rng.randrange(field.q) for _ in range(3)]
            if not any(coeffs):
                coeffs[0] = 1
            g = [[one if i == j else zero for j in range(n)] for i in range(n)]
            g[i0][j0] = PuiseuxRational(field, 1, coeffs) * PuiseuxRational.t_power(
                field, rng.randint(-2, 2))
        out = matmul(out, g)
    return out


def equivariance_samples(seed: int, count: int = 50):
    rng = random.Random(seed)
    sizes = [(2, 1)] * 15 + [(3, 1), (3, 2)] * 8 + [(4, 1), (4, 3)] * 7 + [(5, 2)] * 5
    for i in range(count):
        n, d = sizes[i % len(sizes)]
        h = HodgeDatum(n, d)
        u = _random_u(n, rng)
        x = gauss_surrogate(u, h)
        g = _random_frame_word(x.base, n, rng)
        yield h, u, x, g


def run_equivariance(seed: int = 0, count: int = 50) -> Report:
    enable_trop_audit()
    checks = []
    bad = []
    cfg = RetractionConfig()
    for i, (h, u, x, g) in enumerate(equivariance_samples(seed, count)):
        try:
            z = global_retract(x, cfg, h)
            zg = global_retract(frame_change(x, g), cfg, h)
            ok = points_equal(zg, act(g, z))
        except (NotStable, MaxIterationsExceeded):
            ok = False
        if not ok:
            bad.append({"index": i, "n": h.n, "d": h.d, "u": [str(v) for v in u]})
    checks.append(Check("equivariance", not bad,
                        {"pairs": count, "failures": bad[:3]} if bad else {"pairs": count}))
    _audit_check(checks)
    return Report("equivariance", seed, checks)


def run_compat(seed: int = 0, count: int = 100) -> Report:
    """Apartment compatibility: frames sharing an interior neighborhood of
    the retraction point must retract to the same building point."""
    enable_trop_audit()
    rng = random.Random(seed)
    checks = []
    bad = []
    sizes = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2)]
    for i in range(count):
        n, d = sizes[i % len(sizes)]
        h = HodgeDatum(n, d)
        u = _random_u(n, rng)
        x = gauss_surrogate(u, h)
        z = BuildingPoint(Frame.identity(x.base, n), proj0(u))
        frame = _strict_overlap_frame(z, rng)
        ok_contains, _ = apartment_contains(z, frame)
        try:
            zf = retract_in_frame(x, frame, h)
            ok = ok_contains and points_equal(zf, z)
        except (NotStable, MaxIterationsExceeded):
            ok = False
        if not ok:
            bad.append({"index": i, "n": n, "d": d, "u": [str(v) for v in u]})
    checks.append(Check("apartment_compatibility", not bad,
                        {"instances": count, "failures": bad[:3]} if bad else
                        {"instances": count}))
    _audit_check(checks)
    return Report("compat", seed, checks)


def _strict_overlap_frame(z: BuildingPoint, rng) -> Frame:
    """Integral frame whose apartment shares an interior neighborhood of z:
    elementary twists strictly above the wall level, plus transpositions."""
    from .building import _elementary, _transposition, _evaluated_coords
    from .rationals import floor_frac

    field = z.frame.field
    n = z.n
    f = z.frame
    for _ in range(rng.randint(1, 2)):
        coords = _evaluated_coords(z, f)
        if rng.random() < 0.3:
            i, j = rng.sample(range(n), 2)
            f = f.compose(_transposition(field, n, i, j))
            continue
        i, j = rng.sample(range(n), 2)
        k = floor_frac(coords[j] - coords[i]) + 1
        a = rng.randrange(1, field.q)
        coeff = PuiseuxRational(field, 1, (a,)) * PuiseuxRational.t_power(field, k)
        f = f.compose(_elementary(field, n, i, j, coeff))
    return f


def _rescale_point(x: GrassPoint, k: int = 2) -> GrassPoint:
    rows = [[a.lift(m=a.m * k) for a in row] for row in x.matrix]
    return GrassPoint(rows, base=x.base)


def run_basechange(seed: int = 0) -> Report:
    """Criteria re-run after ramification rescale m -> 2m must agree."""
    enable_trop_audit()
    checks = []
    cfg = RetractionConfig()
    bad_section = []
    total = 0
    for h, u in section_samples(seed):
        total += 1
        x = gauss_surrogate(u, h)
        x2 = _rescale_point(x)
        try:
            z = global_retract(x, cfg, h)
            z2 = global_retract(x2, cfg, h)
            ok = points_equal(z, z2) and points_equal(
                z2, BuildingPoint(Frame.identity(x.base, h.n), proj0(u)))
        except (NotStable, MaxIterationsExceeded):
            ok = False
        if not ok:
            bad_section.append({"n": h.n, "d": h.d, "u": [str(v) for v in u]})
    checks.append(Check("basechange_section", not bad_section,
                        {"points": total, "failures": bad_section[:3]} if bad_section
                        else {"points": total}))
    bad_dr = []
    count = 50
    for i, x in enumerate(drinfeld_samples(seed, count)):
        x2 = _rescale_point(x)
        try:
            z = global_retract(x, cfg)
            z2 = global_retract(x2, cfg)
            ok = points_equal(z, z2) and verify_drinfeld(x2, sample_size=100, seed=seed + i)
        except (NotStable, MaxIterationsExceeded):
            ok = False
        if not ok:
            bad_dr.append({"index": i, "n": x.n})
    checks.append(Check("basechange_drinfeld", not bad_dr,
                        {"points": count, "failures": bad_dr[:3]} if bad_dr
                        else {"points": count}))
    _audit_check(checks)
    return Report("basechange", seed, checks)


def _random_point(n, d, rng, field=gf(2, 2), m=2):
    while True:
        rows = []
        for _ in range(d):
            row = []
            for _ in range(n):
                coeffs = [rng.randrange(field.q) for _ in range(rng.randint(1, 3))]
                row.append(PuiseuxRational(field, m, coeffs))
            rows.append(row)
        try:
            return GrassPoint(rows, base=gf(2))
        except ValueError:
            continue


def run_hull(seed: int = 0, per_pair: int = 1000) -> Report:
    """Boundary exclusion for coprime (d, n): realized residual supports
    must never sit exactly on the hull boundary."""
    enable_trop_audit()
    rng = random.Random(seed)
    checks = []
    for n, d in _coprime_pairs(6):
        h = HodgeDatum(n, d)
        boundary = []
        for i in range(per_pair):
            x = _random_point(n, d, rng)
            u = _random_u(n, rng)
            S = residual_support(trop_pluecker(x), u, h)
            if hull_position(S, h) == HullPosition.BOUNDARY:
                boundary.append({"index": i, "support": [list(k) for k in S.subsets]})
        checks.append(Check(f"no_boundary_n{n}_d{d}", not boundary,
                            {"points": per_pair, "violations": boundary[:3]} if boundary
                            else {"points": per_pair}))
    _audit_check(checks)
    return Report("hull", seed, checks)


def run_matroid(seed: int = 0) -> Report:
    """Exchange relations on a mixed stream of computed tropical vectors."""
    enable_trop_audit()
    rng = random.Random(seed)
    for n, d in _coprime_pairs(6):
        h = HodgeDatum(n, d)
        for _ in range(40):
            trop_pluecker(_random_point(n, d, rng))
        for _ in range(5):
            u = _random_u(n, rng)
            x = gauss_surrogate(u, h)
            trop_pluecker(x)
            g = _random_frame_word(x.base, n, rng, factors=1)
            trop_pluecker(frame_change(x, g))
    checks: list[Check] = []
    _audit_check(checks)
    return Report("matroid", seed, checks)


_RUNNERS = {
    "counts": run_counts,
    "section": run_section,
    "drinfeld": run_drinfeld,
    "equivariance": run_equivariance,
    "compat": run_compat,
    "basechange": run_basechange,
    "hull": run_hull,
    "matroid": run_matroid,
}


def run_suite(name: str, seed: int = 0) -> list[Report]:
    if name == "all":
        return [_RUNNERS[s](seed) for s in SUITES]
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return [_RUNNERS[name](seed)]
