import random
from fractions import Fraction
from math import inf

import pytest

from tropbuild.building import BuildingPoint, Frame, act, normalize, points_equal
from tropbuild.gfield import gf
from tropbuild.grass import (
    GrassPoint,
    TropPlueckerVector,
    frame_change,
    gauss_surrogate,
    trop_pluecker,
)
from tropbuild.kottwitz import HodgeDatum, enumerate_kottwitz
from tropbuild.linalg import matmul
from tropbuild.rationals import proj0
from tropbuild.retract import (
    MaxIterationsExceeded,
    NonUniqueMaximizer,
    NotSemistableForTorus,
    NotStable,
    RetractionConfig,
    apartment_retract,
    degenerate_family,
    drinfeld_norm,
    global_retract,
    retraction_certificate,
    verify_drinfeld,
)
from tropbuild.valfield import PuiseuxRational, parse_scalar

F = Fraction


def sc(text, field, m=1):
    return parse_scalar(text, field, m)


def elementary(field, n, i, j, text):
    out = [
        [PuiseuxRational.one(field) if a == b else PuiseuxRational.zero(field) for b in range(n)]
        for a in range(n)
    ]
    out[i][j] = sc(text, field)
    return out


def monomial(field, exps):
    n = len(exps)
    zero = PuiseuxRational.zero(field)
    return [
        [PuiseuxRational.t_power(field, e) if i == j else zero for j, e in enumerate(exps)]
        for i in range(n)
    ]


def brute_force_apartment_max(tp, samples):
    """Independent oracle: evaluate phi on a grid and confirm the LP value
    dominates; phi(u) = min over finite I of tp(I) - sum(u_i in I)."""
    def phi(u):
        u = proj0(u)
        best = None
        for key, v in tp.values.items():
            if v == inf:
                continue
            val = v - sum(u[i] for i in key)
            best = val if best is None else min(best, val)
        return best

    return max(phi(u) for u in samples)


def test_apartment_retract_one_variable():
    tp = TropPlueckerVector(1, 2, {(0,): 0, (1,): 3})
    assert apartment_retract(tp) == (F(-3, 2), F(3, 2))


def test_apartment_retract_is_true_maximum():
    rng = random.Random(2)
    tp = TropPlueckerVector(2, 4, {
        (0, 1): 0, (0, 2): F(1, 2), (0, 3): 1, (1, 2): 1, (1, 3): F(3, 2), (2, 3): 2})
    u = apartment_retract(tp)
    val = min(v - sum(u[i] for i in k) for k, v in tp.values.items())
    samples = [u] + [[F(rng.randint(-8, 8), 4) for _ in range(4)] for _ in range(300)]
    assert brute_force_apartment_max(tp, samples) == val


def test_apartment_retract_surrogate_fixed_point():
    h = HodgeDatum(5, 2)
    u = [1, F(1, 2), 0, 0, F(-1, 2)]
    s = gauss_surrogate(u, h)
    assert apartment_retract(trop_pluecker(s), h) == proj0(u)


def test_apartment_retract_errors():
    with pytest.raises(NotSemistableForTorus):
        apartment_retract(TropPlueckerVector(1, 3, {(0,): 0, (1,): inf, (2,): inf}))
    with pytest.raises(NonUniqueMaximizer) as ei:
        apartment_retract(TropPlueckerVector(2, 4, {
            (0, 1): 0, (2, 3): 0, (0, 2): inf, (0, 3): inf, (1, 2): inf, (1, 3): inf}))
    assert ei.value.support == ((0, 1), (2, 3))


def test_apartment_retract_twist_covariance():
    rng = random.Random(6)
    h = HodgeDatum(4, 2)
    s = gauss_surrogate([F(1, 2), 0, F(1, 4), 0], h)
    tp = trop_pluecker(s)
    u = apartment_retract(tp, h)
    for _ in range(10):
        c = [F(rng.randint(-6, 6), rng.choice([1, 2])) for _ in range(4)]
        shifted = apartment_retract(tp.twist(c), h)
        assert shifted == tuple(a + b for a, b in zip(u, proj0(c)))


def test_global_retract_surrogate_section():
    cases = [
        (HodgeDatum(2, 1), [F(1, 2), 0]),
        (HodgeDatum(3, 1), [1, 0, 0]),
        (HodgeDatum(3, 2), [F(5, 4), F(1, 2), 0]),
        (HodgeDatum(5, 2), [1, F(1, 2), F(1, 4), 0, 0]),
    ]
    for h, u in cases:
        x = gauss_surrogate(u, h)
        z = global_retract(x, h=h)
        assert points_equal(z, BuildingPoint(Frame.identity(x.base, h.n), proj0(u)))


def test_global_retract_verify_mode():
    h = HodgeDatum(3, 1)
    x = gauss_surrogate([F(1, 2), 0, 0], h)
    z = global_retract(x, RetractionConfig(frame_depth=1, verify_depth=2), h=h, verify=True)
    assert normalize(z).coords == proj0([F(1, 2), 0, 0])


def test_global_retract_equivariance_hard_frames():
    h = HodgeDatum(2, 1)
    x = gauss_surrogate([F(1, 2), 0], h)
    base = x.base
    z = global_retract(x)
    for g in [
        monomial(base, [2, 0]),
        elementary(base, 2, 1, 0, "t^(-3)"),
        elementary(base, 2, 0, 1, "(1)/(1+t)"),
        matmul(elementary(base, 2, 0, 1, "t^2"), elementary(base, 2, 1, 0, "t^(-1)")),
    ]:
        zg = global_retract(frame_change(x, g))
        assert points_equal(zg, act(g, z))


def test_global_retract_rational_points_rejected():
    F5 = gf(5)
    one, t = PuiseuxRational.one(F5), PuiseuxRational.t_power(F5, 1)
    for entries in [[one, PuiseuxRational.zero(F5)], [one, one + one], [one, t**3], [one, one + t]]:
        with pytest.raises((NotStable, MaxIterationsExceeded)):
            global_retract(GrassPoint([entries]))


def test_retraction_certificate_structure():
    h = HodgeDatum(2, 1)
    x = gauss_surrogate([F(1, 2), 0], h)
    cfg = RetractionConfig()
    z = global_retract(x, cfg, h)
    cert = retraction_certificate(x, z, cfg, h)
    assert cert and all(c["hull_position"] == "interior" for c in cert)
    assert all(sum(F(v) for v in c["barycentric"].values()) == 1 for c in cert)


def test_drinfeld_norm_examples():
    F5 = gf(5)
    x = GrassPoint([[PuiseuxRational.one(F5), PuiseuxRational.t_power(F5, 1) ** 3]])
    one, zero = PuiseuxRational.one(F5), PuiseuxRational.zero(F5)
    assert drinfeld_norm(x, [one, zero]) == 0
    assert drinfeld_norm(x, [zero, one]) == 3
    assert drinfeld_norm(x, [one, -one]) == 0
    assert drinfeld_norm(x, [zero, zero]) == inf


def test_drinfeld_norm_ultrametric_random():
    rng = random.Random(31)
    F4 = gf(2, 2)
    x = GrassPoint([[sc("1", F4), sc("1 + t^(1/2)", F4, 2), sc("t^(1/3)", F4, 3)]], base=gf(2))
    for _ in range(40):
        a = [PuiseuxRational(gf(2), 1, [rng.randrange(2) for _ in range(3)]) for _ in range(3)]
        b = [PuiseuxRational(gf(2), 1, [rng.randrange(2) for _ in range(3)]) for _ in range(3)]
        s = [p + q for p, q in zip(a, b)]
        assert drinfeld_norm(x, s) >= min(drinfeld_norm(x, a), drinfeld_norm(x, b))


def test_verify_drinfeld_stable_points():
    F4 = gf(2, 2)
    pts = [
        GrassPoint([[sc("1", F4), sc("1 + t^(1/2)", F4, 2)]], base=gf(2)),
        GrassPoint([[sc("1", F4), sc("1 + t^(1/2)", F4, 2), sc("t^(1/3)", F4, 3)]], base=gf(2)),
    ]
    for x in pts:
        assert verify_drinfeld(x, sample_size=30, seed=7)


def test_verify_drinfeld_rejects_rational():
    F5 = gf(5)
    x = GrassPoint([[PuiseuxRational.one(F5), PuiseuxRational.t_power(F5, 1) ** 3]])
    with pytest.raises((NotStable, MaxIterationsExceeded)):
        verify_drinfeld(x, sample_size=5, seed=1)


def test_degenerate_family_five_two():
    h = HodgeDatum(5, 2)
    b1 = gauss_surrogate([0, 0], HodgeDatum(2, 1))
    b2 = gauss_surrogate([0, 0, 0], HodgeDatum(3, 1))
    zs = {}
    for N in (0, 1, 2, 3):
        xN, zN, nu = degenerate_family([b1, b2], N, h)
        zs[N] = zN
        assert [str(s) for s in nu.slopes] == ["1/2", "1/2", "1/3", "1/3", "1/3"]
        assert nu in set(enumerate_kottwitz(h))
        assert (xN.d, xN.n) == (2, 5)
    d1 = tuple(a - b for a, b in zip(zs[2].coords, zs[1].coords))
    d2 = tuple(a - b for a, b in zip(zs[3].coords, zs[2].coords))
    assert d1 == d2 == proj0([1, 1, 0, 0, 0])
    assert all(c == 0 for c in zs[0].coords)
    # ambient support of the assembled point is mixed-block only: the LP
    # certifies the escape ray instead of a finite value
    xN, _, _ = degenerate_family([b1, b2], 1, h)
    with pytest.raises(NotSemistableForTorus):
        apartment_retract(trop_pluecker(xN), h)


def test_wall_candidates_match_direct_computation():
    from tropbuild.retract import _wall_candidates

    rng = random.Random(5)
    for n, d in [(3, 1), (4, 2), (5, 2)]:
        h = HodgeDatum(n, d)
        u = [F(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(n)]
        x = gauss_surrogate(u, h)
        z = BuildingPoint(Frame.identity(x.base, n), proj0(u))
        for f, tp, coords in _wall_candidates(x, z, h):
            assert tp.values == trop_pluecker(frame_change(x, f.matrix)).values
            from tropbuild.building import norm_eval

            direct = [norm_eval(z, col) for col in f.columns()]
            assert tuple(coords) == tuple(proj0(direct)) or tuple(coords) == tuple(direct)


def test_cascading_residue_collision_regression():
    # entries whose leading residues collide at several levels force the walk
    # through composite column operations; a single-root family stalls here
    F4 = gf(2, 2)
    x = GrassPoint(
        [[sc("t + t^2 + (1+g)*t^(5/2)", F4, 2),
          sc("t + g*t^2 + g*t^(5/2) + (1+g)*t^3", F4, 2),
          sc("t + (1+g)*t^2 + (1+g)*t^(5/2)", F4, 2)]],
        base=gf(2),
    )
    assert verify_drinfeld(x, sample_size=60, seed=11)
    z = global_retract(x)
    z2 = global_retract(x, RetractionConfig(frame_depth=1, verify_depth=2), verify=True)
    assert points_equal(z, z2)


def test_degenerate_family_two_blocks_of_one():
    h = HodgeDatum(2, 1)
    g11 = GrassPoint([[PuiseuxRational.one(gf(2, 2))]])
    for N in (1, 2, 3):
        xN, zN, nu = degenerate_family([g11, 1], N, h)
        assert zN.coords == (F(N, 2), F(-N, 2))
        assert [str(s) for s in nu.slopes] == ["1", "0"]
