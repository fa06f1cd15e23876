"""Legendre curves: group law, division polynomials, point counts."""

import pytest

from higgsflow import (
    LegendreCurve,
    PointsOnDifferentCurves,
    ProjPoint,
    build_field,
    deuring_supersingular,
    division_poly,
    frobenius_decompose,
    frobenius_trace,
    lattes_p,
    n_torsion_x,
    point_count,
    torsion_order,
    x_mult,
)


def curve(p, f, lam_index):
    F = build_field(p, f)
    return LegendreCurve(F.from_index(lam_index))


def all_points(c):
    pts = [c.identity()]
    for x in c.field:
        P = c.lift_x(x)
        if P is not None:
            pts.append(P)
            if not P.y.is_zero():
                pts.append(-P)
    return pts


def test_group_axioms_exhaustive():
    c = curve(7, 1, 3)
    pts = all_points(c)
    O = c.identity()
    for P in pts:
        assert P + O == P
        assert P + (-P) == O
    for P in pts:
        for Q in pts:
            assert P + Q == Q + P
    import random

    rng = random.Random(1)
    for _ in range(60):
        P, Q, R = rng.choice(pts), rng.choice(pts), rng.choice(pts)
        assert (P + Q) + R == P + (Q + R)


def test_mixing_curves_is_an_error():
    a, b = curve(5, 1, 2), curve(5, 1, 3)
    with pytest.raises(PointsOnDifferentCurves):
        all_points(a)[1] + all_points(b)[1]


def test_point_counts_satisfy_hasse_bound():
    for p, f, lam in [(5, 1, 2), (7, 1, 4), (5, 2, 7), (11, 1, 6)]:
        c = curve(p, f, lam)
        q = p ** f
        n = point_count(c, f)
        assert abs(q + 1 - n) ** 2 <= 4 * q
        assert n == len(all_points(c))


def test_trace_is_compatible_between_degrees():
    c = curve(5, 1, 3)
    t1 = frobenius_trace(c, 1)
    t2 = frobenius_trace(c, 2)
    assert t2 == t1 * t1 - 2 * 5  # a_{q^2} = a_q^2 - 2q


def test_x_mult_agrees_with_group_law():
    # the algebraic multiplication-by-n map versus honest repeated addition
    checked = 0
    for p, f, lam in [(5, 1, 2), (7, 1, 3), (5, 2, 7), (13, 1, 6)]:
        c = curve(p, f, lam)
        for n in (2, 3, 5, p):
            mx = x_mult(c, n)
            for P in all_points(c):
                if P.is_identity:
                    continue
                got = mx.eval_proj(ProjPoint.finite(P.x))
                Q = P.scalar_mul(n)
                want = (
                    ProjPoint.infinity(c.field)
                    if Q.is_identity
                    else ProjPoint.finite(Q.x)
                )
                assert got == want
                checked += 1
    assert checked >= 50


def test_division_poly_roots_are_torsion_x_coordinates():
    c = curve(7, 1, 5)
    for n in (2, 3, 4, 6, 8):
        xs = {pt for pt in n_torsion_x(c, n, 2) if not pt.is_infinity}
        big = build_field(7, 2)
        cbig = c.base_change(big)
        for pt in xs:
            P = cbig.lift_x(pt.value)
            if P is None:
                bigger = build_field(7, 4)
                P = cbig.base_change(bigger).lift_x(pt.value * big.one())
            assert P.scalar_mul(n).is_identity


def test_division_poly_degrees():
    c = curve(5, 1, 2)
    for n in (3, 7, 9):  # n coprime to p, so the leading coefficient n survives
        xpart, parity = division_poly(c, n)
        assert parity == 0 and xpart.degree == (n * n - 1) // 2


def test_lattes_decomposition():
    c = curve(7, 1, 3)
    R, psi = lattes_p(c)
    assert R.degree == 49 and psi.degree == 7
    # psi(z^7) reassembles the multiplication map
    from higgsflow import Poly, RationalMap

    z7 = RationalMap(Poly(c.field, [0] * 7 + [1]), Poly.one(c.field))
    assert psi.compose(z7) == R
    assert frobenius_decompose(R) == psi


def test_torsion_order_matches_group_order():
    c = curve(5, 1, 3)
    n = point_count(c, 1)
    for P in all_points(c):
        o = torsion_order(P, n + 1)
        assert o is not None and n % o == 0
        assert P.scalar_mul(o).is_identity


def test_deuring_criterion_matches_trace():
    for p in (3, 5, 7, 11, 13):
        F = build_field(p, 1)
        for v in range(2, p):
            lam = F.element(v)
            c = LegendreCurve(lam)
            assert deuring_supersingular(p, lam) == (frobenius_trace(c, 1) % p == 0)
