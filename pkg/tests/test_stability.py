import random
from fractions import Fraction
from itertools import combinations

import pytest

from tropbuild.gfield import gf
from tropbuild.grass import (
    GrassPoint,
    TropPlueckerVector,
    gauss_surrogate,
    subsets,
    trop_pluecker,
)
from tropbuild.kottwitz import HodgeDatum
from tropbuild.stability import (
    GuardError,
    HullPosition,
    ResidualSupport,
    Stability,
    find_destabilizer_bounded,
    hn_of_block_point,
    hull_position,
    residual_support,
    torus_stability,
    weight_vector,
)
from tropbuild.valfield import PuiseuxRational

F = Fraction


def hull_oracle(S, h):
    """Independent position test: Caratheodory enumeration of exact convex
    representations of 0, plus direct affine-span rank."""
    pts = [weight_vector(I, h) for I in S.subsets]
    n = h.n

    def solve(sub):
        # lambda >= 0, sum lambda = 1, sum lambda p = 0 solved exactly over the
        # affinely independent subset via least... just full elimination
        k = len(sub)
        rows = [[pts[j][c] for j in sub] for c in range(n)] + [[1] * k]
        rhs = [F(0)] * n + [F(1)]
        # gaussian elimination on the k-column system
        aug = [row[:] + [r] for row, r in zip(rows, rhs)]
        pivcols = []
        r = 0
        for c in range(k):
            piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            lead = aug[r][c]
            aug[r] = [x / lead for x in aug[r]]
            for i in range(len(aug)):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            pivcols.append(c)
            r += 1
        for i in range(r, len(aug)):
            if aug[i][k]:
                return None
        lam = [F(0)] * k
        for idx, c in enumerate(pivcols):
            lam[c] = aug[idx][k]
        if any(v < 0 for v in lam):
            return None
        return lam

    in_hull = any(
        solve(sub) is not None
        for size in range(1, min(len(pts), n) + 1)
        for sub in combinations(range(len(pts)), size)
    )
    if not in_hull:
        return HullPosition.EXTERIOR
    # relative interior: average of all successful reps hits every index
    positive = set()
    for size in range(1, len(pts) + 1):
        for sub in combinations(range(len(pts)), size):
            lam = solve(sub)
            if lam is not None:
                positive.update(j for j, v in zip(sub, lam) if v > 0)
    all_positive = positive == set(range(len(pts)))
    from tropbuild.linalg import rank

    full_span = rank([list(p) for p in pts]) == n - 1
    if all_positive and full_span:
        return HullPosition.INTERIOR
    return HullPosition.BOUNDARY


def test_weight_vectors_sum_zero():
    h = HodgeDatum(5, 2)
    for I in subsets(5, 2):
        assert sum(weight_vector(I, h)) == 0


def test_residual_support_examples():
    tp = TropPlueckerVector(1, 2, {(0,): 0, (1,): 3})
    assert residual_support(tp, [0, 0]).subsets == ((0,),)
    assert residual_support(tp, [F(-3, 2), F(3, 2)]).subsets == ((0,), (1,))
    h = HodgeDatum(5, 2)
    u = [1, F(1, 2), 0, 0, 0]
    s = gauss_surrogate(u, h)
    assert residual_support(trop_pluecker(s), u, h).subsets == tuple(subsets(5, 2))


def test_residual_support_shift_invariance():
    tp = TropPlueckerVector(2, 4, {k: i for i, k in enumerate(subsets(4, 2))})
    u = [F(1, 2), 0, -1, F(3, 2)]
    base = residual_support(tp, u).subsets
    shifted = residual_support(tp, [v + 5 for v in u]).subsets
    assert base == shifted
    twisted = residual_support(tp.twist([3, 3, 3, 3]), u).subsets
    assert base == twisted


def test_hull_position_examples():
    h = HodgeDatum(5, 2)
    full = ResidualSupport(tuple(subsets(5, 2)), (0, 0, 0, 0, 0))
    assert hull_position(full, h) == HullPosition.INTERIOR
    single = ResidualSupport(((0,),), (0, 0))
    assert hull_position(single, HodgeDatum(2, 1)) == HullPosition.EXTERIOR
    # {1},{2} inside n=3: every combination leaves the third coordinate at
    # -1/3, so 0 is outside the hull (not merely on its boundary)
    two = ResidualSupport(((0,), (1,)), (0, 0, 0))
    assert hull_position(two, HodgeDatum(3, 1)) == HullPosition.EXTERIOR
    blocks = ResidualSupport(((0, 1), (2, 3)), (0, 0, 0, 0))
    assert hull_position(blocks, HodgeDatum(4, 2)) == HullPosition.BOUNDARY


def test_hull_position_certificate():
    h = HodgeDatum(4, 2)
    full = ResidualSupport(tuple(subsets(4, 2)), (0, 0, 0, 0))
    pos, cert = hull_position(full, h, with_certificate=True)
    assert pos == HullPosition.INTERIOR
    assert sum(cert.values()) == 1
    assert all(v > 0 for v in cert.values())
    combo = [F(0)] * 4
    for I, lam in cert.items():
        for c, wc in enumerate(weight_vector(I, h)):
            combo[c] += lam * wc
    assert all(v == 0 for v in combo)


def test_hull_position_against_oracle_random():
    rng = random.Random(17)
    for _ in range(80):
        n = rng.randint(2, 5)
        d = rng.randint(1, n - 1)
        h = HodgeDatum(n, d)
        keys = list(subsets(n, d))
        size = rng.randint(1, len(keys))
        S = ResidualSupport(tuple(sorted(rng.sample(keys, size))), tuple([0] * n))
        assert hull_position(S, h) == hull_oracle(S, h)


def test_torus_stability_examples():
    h = HodgeDatum(5, 2)
    u = [1, 0, 0, 0, 0]
    s = gauss_surrogate(u, h)
    assert torus_stability(s, u=u, h=h) == Stability.STABLE
    F5 = gf(5)
    one, zero = PuiseuxRational.one(F5), PuiseuxRational.zero(F5)
    assert torus_stability(GrassPoint([[one, zero, zero]])) == Stability.UNSTABLE
    b = gauss_surrogate([0, 0], HodgeDatum(2, 1))
    z2 = PuiseuxRational.zero(b.field)
    rows = [list(b.matrix[0]) + [z2, z2], [z2, z2] + list(b.matrix[0])]
    xb = GrassPoint(rows, base=b.base)
    assert torus_stability(xb) == Stability.STRICTLY_SEMISTABLE


def test_surrogate_stable_exactly_on_its_fiber():
    h = HodgeDatum(3, 1)
    u = [F(1, 2), 0, 0]
    s = gauss_surrogate(u, h)
    assert torus_stability(s, u=u, h=h) == Stability.STABLE
    assert torus_stability(s, u=[v + 7 for v in u], h=h) == Stability.STABLE
    assert torus_stability(s, u=[2, 0, 0], h=h) == Stability.UNSTABLE


def test_support_permutation_invariance():
    h = HodgeDatum(4, 2)
    rng = random.Random(23)
    s = gauss_surrogate([F(1, 2), 0, 1, 0], h)
    tp = trop_pluecker(s)
    u = [F(1, 2), 0, 1, 0]
    S = residual_support(tp, u, h)
    perm = [2, 0, 3, 1]
    tp_p = TropPlueckerVector(
        2, 4, {tuple(sorted(perm[i] for i in k)): v for k, v in tp.values.items()})
    u_p = [None] * 4
    for i, pi in enumerate(perm):
        u_p[pi] = u[i]
    S_p = residual_support(tp_p, u_p, h)
    expect = tuple(sorted(tuple(sorted(perm[i] for i in k)) for k in S.subsets))
    assert S_p.subsets == expect
    assert hull_position(S, h) == hull_position(S_p, h)


def test_find_destabilizer_rational_point():
    F3 = gf(3)
    x = GrassPoint([[PuiseuxRational.one(F3), PuiseuxRational.t_power(F3, 1)]])
    W, slope = find_destabilizer_bounded(x, 1)
    assert slope == F(1, 2)  # 1 - d/n
    # W is the point's own row span
    from tropbuild.grass import row_span_equal

    assert row_span_equal(GrassPoint(W, base=F3), x)


def test_find_destabilizer_none_cases():
    F3 = gf(3)
    x = GrassPoint([[PuiseuxRational.one(F3), PuiseuxRational.t_power(F3, F(1, 2))]])
    assert find_destabilizer_bounded(x, 1) is None
    assert find_destabilizer_bounded(x, 2) is None
    s = gauss_surrogate([F(1, 2), 0, 0], HodgeDatum(3, 1))
    assert find_destabilizer_bounded(s, 1) is None


def test_find_destabilizer_guards():
    s = gauss_surrogate([0, 0, 0, 0, 0, 0], HodgeDatum(6, 1))
    with pytest.raises(GuardError):
        find_destabilizer_bounded(s, 1)
    x = gauss_surrogate([0, 0], HodgeDatum(2, 1))
    with pytest.raises(GuardError):
        find_destabilizer_bounded(x, 3)


def test_hn_of_block_point_examples():
    g11 = GrassPoint([[PuiseuxRational.one(gf(2, 2))]])
    g14 = gauss_surrogate([0, 0, 0, 0], HodgeDatum(4, 1))
    nv, asm = hn_of_block_point([g11, g14], HodgeDatum(5, 2))
    assert [str(s) for s in nv.slopes] == ["1", "1/4", "1/4", "1/4", "1/4"]
    assert (asm.d, asm.n) == (2, 5)
    nv2, _ = hn_of_block_point(
        [gauss_surrogate([0, 0], HodgeDatum(2, 1)), gauss_surrogate([0, 0, 0], HodgeDatum(3, 1))],
        HodgeDatum(5, 2),
    )
    assert [str(s) for s in nv2.slopes] == ["1/2", "1/2", "1/3", "1/3", "1/3"]
    whole = gauss_surrogate([0, 0, 0], HodgeDatum(3, 1))
    nv3, asm3 = hn_of_block_point([whole], HodgeDatum(3, 1))
    assert nv3.is_basic()
    from tropbuild.grass import row_span_equal

    assert row_span_equal(asm3, whole)


def test_hn_of_block_point_errors():
    b = gauss_surrogate([0, 0], HodgeDatum(2, 1))
    with pytest.raises(ValueError, match="strictly decrease"):
        hn_of_block_point([b, b], HodgeDatum(4, 2))
    F5 = gf(5)
    one, zero = PuiseuxRational.one(F5), PuiseuxRational.zero(F5)
    unstable = GrassPoint([[one, zero]])
    with pytest.raises(ValueError, match="not torus-stable"):
        hn_of_block_point([unstable, 1], HodgeDatum(3, 1))
