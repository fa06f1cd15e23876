"""Dynamics of the self-map: periodic-point census, the torsion
correspondence under the double cover, the deformation coefficient, and
Artin-Schreier lifting mechanics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import LiftNotFound
from .field import build_field, embed, min_subfield_degree, trace_to_prime
from .poly import Poly, ProjPoint, RationalMap, fixed_point_divisor, iterate_map, roots_with_multiplicity
from .elliptic import LegendreCurve, n_torsion_x, torsion_order

TOWER_DEGREE_CAP = 64


@dataclass
class CensusEntry:
    point: ProjPoint
    multiplicity: int
    field_degree: int
    exact_period: int


@dataclass
class PeriodicCensus:
    lam: object
    p: int
    side: str
    period: int
    search_degree: int
    entries: list
    total_with_multiplicity: int
    distinct_count: int
    unaccounted_multiplicity: int

    def to_json(self):
        return {
            "lambda": self.lam.to_json(),
            "p": self.p,
            "side": self.side,
            "period": self.period,
            "search_degree": self.search_degree,
            "entries": [
                {
                    "point": e.point.to_json(),
                    "multiplicity": e.multiplicity,
                    "field_degree": e.field_degree,
                    "exact_period": e.exact_period,
                }
                for e in self.entries
            ],
            "total_with_multiplicity": self.total_with_multiplicity,
            "distinct_count": self.distinct_count,
            "unaccounted_multiplicity": self.unaccounted_multiplicity,
        }


def periodic_census(rmap, f, lam, side="flow", search_degree=None):
    """All points fixed by the f-th iterate, with multiplicities.

    Roots are extracted over F_{p^search_degree} (default p^{2f});
    multiplicity sitting in larger fields is reported as unaccounted.  The
    total with multiplicity, including the point at infinity and the
    unaccounted part, is deg(rmap)^f + 1 by Bezout.
    """
    if search_degree is None:
        search_degree = 2 * f
    iterated = iterate_map(rmap, f)
    F, inf_fixed, inf_mult = fixed_point_divisor(iterated)
    big = build_field(rmap.field.p, search_degree)
    lifted = rmap.map_field(big)
    entries = []
    found = 0
    for root, mult in roots_with_multiplicity(F, search_degree):
        entries.append(
            CensusEntry(
                point=ProjPoint.finite(root),
                multiplicity=mult,
                field_degree=min_subfield_degree(root),
                exact_period=_exact_period(lifted, ProjPoint.finite(root), f),
            )
        )
        found += mult
    if inf_fixed:
        entries.append(
            CensusEntry(
                point=ProjPoint.infinity(big),
                multiplicity=inf_mult,
                field_degree=1,
                exact_period=_exact_period(lifted, ProjPoint.infinity(big), f),
            )
        )
    total = F.degree + inf_mult
    return PeriodicCensus(
        lam=lam,
        p=rmap.field.p,
        side=side,
        period=f,
        search_degree=search_degree,
        entries=entries,
        total_with_multiplicity=total,
        distinct_count=len(entries),
        unaccounted_multiplicity=F.degree - found,
    )


def _exact_period(rmap, point, f):
    orbit = point
    for e in range(1, f + 1):
        orbit = rmap.eval_proj(orbit)
        if orbit == point and f % e == 0:
            return e
    return f


def separability_report(rmap, f):
    """Distinct-versus-repeated structure of the fixed-point divisor."""
    iterated = iterate_map(rmap, f)
    F, inf_fixed, inf_mult = fixed_point_divisor(iterated)
    rep = F.gcd(F.derivative())
    repeated = rep.degree if not rep.is_zero() else 0
    distinct_finite = F.degree - repeated
    return {
        "finite_degree": F.degree,
        "finite_distinct": distinct_finite,
        "repeated_part_degree": repeated,
        "all_simple": repeated == 0 and inf_mult <= 1,
        "infinity_fixed": inf_fixed,
        "infinity_multiplicity": inf_mult,
    }


@dataclass
class TorsionReport:
    point: ProjPoint
    lift: object  # CurvePoint
    order: int | None
    divides_minus: bool
    divides_plus: bool

    def to_json(self):
        return {
            "point": self.point.to_json(),
            "lift": self.lift.to_json() if self.lift is not None else None,
            "order": self.order,
            "divides_minus": self.divides_minus,
            "divides_plus": self.divides_plus,
        }


def lift_to_curve(lam, z, max_extra_degree=2):
    """A curve point with the given finite x-coordinate, extending the field
    of z at most quadratically."""
    field = z.field
    curve = LegendreCurve(embed(lam, field) if lam.field is not field else lam)
    P = curve.lift_x(z)
    if P is not None:
        return P
    if max_extra_degree >= 2:
        big = build_field(field.p, 2 * field.f)
        P = curve.base_change(big).lift_x(embed(z, big))
        if P is not None:
            return P
    raise LiftNotFound(f"no curve point above {z!r}")


def torsion_correspondence(lam, f, census):
    """Lift every census point through the double cover and record its exact
    torsion order and the (p^f -+ 1)-divisibility flags."""
    p = lam.field.p
    minus, plus = p ** f - 1, p ** f + 1
    bound = plus + 2
    reports = []
    for entry in census.entries:
        z = entry.point
        if z.is_infinity:
            big = build_field(p, census.search_degree)
            curve = LegendreCurve(embed(lam, big))
            lift = curve.identity()
            order = 1
        else:
            lift = lift_to_curve(lam, z.value)
            order = torsion_order(lift, bound)
        reports.append(
            TorsionReport(
                point=z,
                lift=lift,
                order=order,
                divides_minus=order is not None and minus % order == 0,
                divides_plus=order is not None and plus % order == 0,
            )
        )
    return reports


def torsion_points_are_periodic(lam, f, rmap, search_degree=None):
    """The converse direction: every x-coordinate of a (p^f -+ 1)-torsion
    point found in the search field is fixed by the f-th iterate.

    Returns (checked, failures) where failures lists non-periodic torsion
    x-coordinates (a conjecture violation).
    """
    p = lam.field.p
    if search_degree is None:
        search_degree = 2 * f
    big = build_field(p, search_degree)
    curve = LegendreCurve(embed(lam, big))
    iterated = iterate_map(rmap.map_field(big), f)
    xs = set()
    for n in (p ** f - 1, p ** f + 1):
        for pt in n_torsion_x(curve, n, search_degree):
            xs.add(pt)
    xs.add(ProjPoint.infinity(big))  # the identity lies over infinity
    failures = [z for z in sorted(xs, key=_point_key) if iterated.eval_proj(z) != z]
    return len(xs), failures


def _point_key(pt):
    return (1, 0) if pt.is_infinity else (0, pt.value.index())


def deformation_coefficient(psi, zbar, at_frobenius=True):
    """The linear coefficient a of the deformation map at a fixed point:
    the derivative of the Verschiebung part, evaluated at zbar^p (the
    default convention) or at zbar."""
    field = psi.field
    if isinstance(zbar, ProjPoint):
        if zbar.is_infinity:
            raise ValueError("the coefficient at infinity needs a chart flip")
        zbar = zbar.value
    if zbar.field is not field:
        zbar = embed(zbar, field) if zbar.field.f <= field.f else zbar
    if zbar.field is not field:
        psi = psi.map_field(zbar.field)
    at = zbar ** zbar.field.p if at_frobenius else zbar
    d = psi.derivative()
    if d.den.eval(at).is_zero():
        raise ValueError("derivative has a pole at the evaluation point")
    return d.num.eval(at) / d.den.eval(at)


@dataclass
class LiftStep:
    a: object
    b: object
    field: object
    solutions: list
    count_in_field: int
    gamma_degree: int
    minimal_degree: int

    def to_json(self):
        return {
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "field": self.field.to_json(),
            "solutions": [s.to_json() for s in self.solutions],
            "count_in_field": self.count_in_field,
            "gamma_degree": self.gamma_degree,
            "minimal_degree": self.minimal_degree,
        }


def _solve_linearized(a, b, fld):
    """All z in the field with a z^p - z + b = 0, by F_p-linear algebra."""
    p, e = fld.p, fld.f
    # columns: coordinates of L(t^i) = a t^{ip} - t^i
    cols = []
    for i in range(e):
        basis = fld.from_index(p ** i) if i else fld.one()
        img = a * basis ** p - basis
        cols.append(list(img.coeffs))
    M = [[cols[j][i] for j in range(e)] for i in range(e)]
    rhs = [(-c) % p for c in b.coeffs]
    # Gaussian elimination over Z/p on the augmented matrix
    aug = [M[i] + [rhs[i]] for i in range(e)]
    pivots = []
    r = 0
    for col in range(e):
        pr = next((i for i in range(r, e) if aug[i][col] % p), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][col], p - 2, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(e):
            if i != r and aug[i][col] % p:
                fct = aug[i][col]
                aug[i] = [(v - fct * w) % p for v, w in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, e):
        if aug[i][e] % p:
            return []
    free = [c for c in range(e) if c not in pivots]
    base = [0] * e
    for row, col in enumerate(pivots):
        base[col] = aug[row][e]
    kernel = []
    for fc in free:
        vec = [0] * e
        vec[fc] = 1
        for row, col in enumerate(pivots):
            vec[col] = (-aug[row][fc]) % p
        kernel.append(vec)
    sols = []

    def emit(vec):
        sols.append(fld.element(tuple(c % p for c in vec)))

    def rec(i, acc):
        if i == len(kernel):
            emit(acc)
            return
        for c in range(p):
            rec(i + 1, [x + c * y for x, y in zip(acc, kernel[i])])

    rec(0, base)
    return sorted(sols, key=lambda s: s.index())


def artin_schreier_solve(a, b):
    """Solutions of a z^p - z + b = 0 in the field of the inputs, plus the
    exact degree of the minimal field containing all p solutions.

    Writing z = gamma u with a gamma^{p-1} = 1 turns the equation into
    u^p - u + b/gamma = 0 over F' = F(gamma).  If gamma already lies in F the
    classical trace criterion decides solvability there; if it does not, the
    equation is always solvable over F' (the relative trace of b/gamma to F
    vanishes identically), so the minimal field is F' itself.  In-field
    solutions are found directly by F_p-linear algebra, which also covers
    the case of a single solution when the kernel line is not rational.
    """
    fld = a.field
    if b.field is not fld:
        raise ValueError("a and b must come from the same field")
    p, e = fld.p, fld.f
    if a.is_zero():
        return LiftStep(
            a=a, b=b, field=fld, solutions=[b], count_in_field=1,
            gamma_degree=e, minimal_degree=e,
        )
    sols = _solve_linearized(a, b, fld)
    # minimal m' with a a (p-1)-th power in F_{p^{e m'}}
    q = p ** e
    mprime = 1
    while True:
        exp = (p ** (e * mprime) - 1) // (p - 1) % (q - 1)
        if (a ** exp) == fld.one():
            break
        mprime += 1
    gamma_degree = e * mprime
    if mprime > 1:
        minimal = gamma_degree
    else:
        minimal = e if sols else e * p
    return LiftStep(
        a=a, b=b, field=fld, solutions=sols, count_in_field=len(sols),
        gamma_degree=gamma_degree, minimal_degree=minimal,
    )


def lifting_tower_sim(a, q_degree, steps, b_mode="random", b_sequence=None, seed=0,
                      max_degree=TOWER_DEGREE_CAP):
    """Field-degree trajectory of iterated Artin-Schreier lifting.

    At each step the equation a z^p - z + b = 0 is posed over the current
    field; the next field is the minimal one containing all p solutions.
    The affine terms b are exogenous: all zero, drawn from a seeded RNG, or
    taken from b_sequence (elements of the then-current fields).
    """
    p = a.field.p
    if q_degree % a.field.f:
        raise ValueError("starting degree must be a multiple of the degree of a")
    rng = random.Random(seed)
    degrees = [q_degree]
    notes = []
    cur = build_field(p, q_degree)
    for step in range(steps):
        if degrees[-1] > max_degree:
            notes.append("degree cap reached")
            break
        cur = build_field(p, degrees[-1])
        a_cur = embed(a, cur) if a.field is not cur else a
        if b_sequence is not None:
            b = b_sequence[step]
            if b.field is not cur:
                b = embed(b, cur)
        elif b_mode == "zero":
            b = cur.zero()
        elif b_mode == "random":
            b = cur.element(tuple(rng.randrange(p) for _ in range(cur.f)))
        elif b_mode == "traced":
            b = _nonzero_trace_element(cur)
        else:
            raise ValueError(f"unknown b-mode {b_mode!r}")
        result = artin_schreier_solve(a_cur, b)
        degrees.append(result.minimal_degree)
        notes.append(
            "grew" if result.minimal_degree > degrees[-2] else "stayed"
        )
    return {"degrees": degrees, "notes": notes, "p": p}


def _nonzero_trace_element(fld):
    # trace is linear and surjective, so some power of the generator works
    x = fld.one()
    for _ in range(fld.f):
        if not trace_to_prime(x).is_zero():
            return x
        x = x * fld.gen()
    raise AssertionError("trace is surjective; unreachable")
