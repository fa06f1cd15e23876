"""The Legendre curve y^2 = x(x-1)(x-lambda): group law, division
polynomials, x-coordinate multiplication maps, torsion and supersingularity.

Division polynomials are stored as a pure-x polynomial together with a parity
flag for a single leftover factor of y, with y^2 eliminated via the curve
equation.  The multiplication-by-n descent to P^1 built from them shares no
code with the flow engine, so the two sides of the commutation check can fail
independently.
"""

from __future__ import annotations

import math

from .errors import FieldTooLarge, PointsOnDifferentCurves
from .field import build_field, embed, is_square, sqrt
from .poly import Poly, ProjPoint, RationalMap, frobenius_decompose

POINT_COUNT_CAP = 10 ** 6


class LegendreCurve:
    """y^2 = x(x-1)(x-lambda) over the field of lambda."""

    __slots__ = ("field", "lam", "a2", "a4", "_divpolys", "_rhs")

    def __init__(self, lam):
        field = lam.field
        if lam.is_zero() or lam == field.one():
            raise ValueError("lambda in {0, 1} gives a singular cubic")
        self.field = field
        self.lam = lam
        self.a2 = -(field.one() + lam)
        self.a4 = lam
        self._rhs = Poly(field, (field.zero(), self.a4, self.a2, field.one()))
        self._divpolys = {}

    def rhs_poly(self):
        """x^3 + a2 x^2 + a4 x, the square of y."""
        return self._rhs

    def rhs(self, x):
        return self._rhs.eval(x)

    def identity(self):
        return CurvePoint(self, None, None)

    def point(self, x, y):
        return CurvePoint(self, self.field.element(x), self.field.element(y))

    def base_change(self, target):
        return LegendreCurve(embed(self.lam, target))

    def lift_x(self, x):
        """A point with the given x-coordinate over this field, or None."""
        r = sqrt(self.rhs(self.field.element(x)))
        if r is None:
            return None
        return CurvePoint(self, self.field.element(x), r[0])

    def __eq__(self, other):
        return (
            isinstance(other, LegendreCurve)
            and self.field is other.field
            and self.lam == other.lam
        )

    def __hash__(self):
        return hash((self.field, self.lam))

    def to_json(self):
        return {"p": self.field.p, "f": self.field.f, "lambda": self.lam.to_json()}

    def __repr__(self):
        return f"LegendreCurve(lambda={self.lam!r} over GF({self.field.p}^{self.field.f}))"


class CurvePoint:
    """A point of the curve: affine (x, y) or the identity O."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        if (x is None) != (y is None):
            raise ValueError("affine points need both coordinates")
        if x is not None and y * y != curve.rhs(x):
            raise ValueError("point not on the curve")
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_identity(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.curve, self.x, self.y))

    def __neg__(self):
        if self.is_identity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __add__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.curve != other.curve:
            raise PointsOnDifferentCurves("points live on different curves")
        if self.is_identity:
            return other
        if other.is_identity:
            return self
        c = self.curve
        if self.x == other.x:
            if (self.y + other.y).is_zero():
                return c.identity()
            two = c.field.element(2)
            s = (c.field.element(3) * self.x * self.x + two * c.a2 * self.x + c.a4) / (
                two * self.y
            )
        else:
            s = (other.y - self.y) / (other.x - self.x)
        x3 = s * s - c.a2 - self.x - other.x
        y3 = s * (self.x - x3) - self.y
        return CurvePoint(c, x3, y3)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        return self.scalar_mul(n)

    def scalar_mul(self, n):
        if n < 0:
            return (-self).scalar_mul(-n)
        acc = self.curve.identity()
        base = self
        while n:
            if n & 1:
                acc = acc + base
            base = base + base
            n >>= 1
        return acc

    def base_change(self, target):
        big = self.curve.base_change(target)
        if self.is_identity:
            return big.identity()
        return CurvePoint(big, embed(self.x, target), embed(self.y, target))

    def to_json(self):
        if self.is_identity:
            return "O"
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    def __repr__(self):
        return "O" if self.is_identity else f"({self.x!r}, {self.y!r})"


class DivisionPolySequence:
    """Division polynomials of a curve, as (x-part, y-parity) pairs.

    psi_n = xpart(x) * y^parity with y^2 reduced via the curve equation;
    parity is 0 for odd n and 1 for even n.
    """

    def __init__(self, curve, n):
        self.curve = curve
        self.n = n
        for k in range(-1, n + 1):
            division_poly(curve, k)

    def __getitem__(self, k):
        if not -1 <= k <= self.n:
            raise IndexError(k)
        return division_poly(self.curve, k)


def division_poly(curve, n):
    """(x-part, y-parity) of the n-th division polynomial."""
    cache = curve._divpolys
    if n in cache:
        return cache[n]
    field = curve.field
    Y = curve.rhs_poly()
    b2 = field.element(4) * curve.a2
    b4 = field.element(2) * curve.a4
    b8 = -(curve.a4 * curve.a4)

    def const(c):
        return Poly(field, (c,))

    if n == -1:
        val = (const(-field.one()), 0)
    elif n == 0:
        val = (Poly.zero(field), 0)
    elif n == 1:
        val = (Poly.one(field), 0)
    elif n == 2:
        val = (const(field.element(2)), 1)
    elif n == 3:
        three = field.element(3)
        val = (
            Poly(field, (b8, field.zero(), three * b4, b2, three)),
            0,
        )
    elif n == 4:
        inner = Poly(
            field,
            (
                b4 * b8,
                b2 * b8,
                field.element(10) * b8,
                field.zero(),
                field.element(5) * b4,
                b2,
                field.element(2),
            ),
        )
        val = (inner * field.element(2), 1)
    else:
        def mul(a, b):
            xa, pa = a
            xb, pb = b
            x = xa * xb
            par = pa + pb
            if par >= 2:
                x = x * (Y ** (par // 2))
            return (x, par % 2)

        def sub(a, b):
            if a[1] != b[1]:
                raise AssertionError("parity mismatch in division-poly recurrence")
            return (a[0] - b[0], a[1])

        m, r = divmod(n, 2)
        if r:
            t1 = mul(division_poly(curve, m + 2), mul(division_poly(curve, m), mul(division_poly(curve, m), division_poly(curve, m))))
            pm1 = division_poly(curve, m + 1)
            t2 = mul(division_poly(curve, m - 1), mul(pm1, mul(pm1, pm1)))
            val = sub(t1, t2)
        else:
            pm_m1 = division_poly(curve, m - 1)
            pm_p1 = division_poly(curve, m + 1)
            t1 = mul(division_poly(curve, m + 2), mul(pm_m1, pm_m1))
            t2 = mul(division_poly(curve, m - 2), mul(pm_p1, pm_p1))
            num = mul(division_poly(curve, m), sub(t1, t2))
            # divide by 2y: the parity-0 numerator carries a factor Y
            if num[1] != 0:
                raise AssertionError("even-index numerator parity is off")
            if num[0].is_zero():
                val = (num[0], 1)
            else:
                val = (num[0].exact_div(Y) * field.element(2).inverse(), 1)
    cache[n] = val
    return val


def division_polys(curve, n):
    """The sequence psi_0 .. psi_n."""
    return DivisionPolySequence(curve, n)


def x_mult(curve, n):
    """The descent of multiplication by n to the x-line, as a RationalMap."""
    if n < 1:
        raise ValueError("n must be >= 1")
    field = curve.field
    if n == 1:
        return RationalMap(Poly.x(field), Poly.one(field))
    Y = curve.rhs_poly()
    x = Poly.x(field)
    fn, pn = division_poly(curve, n)
    fprev, pprev = division_poly(curve, n - 1)
    fnext, pnext = division_poly(curve, n + 1)
    cross = fprev * fnext
    if pn == 0:
        # psi_n^2 = fn^2 ; psi_{n-1} psi_{n+1} = cross * Y
        num = x * fn * fn - cross * Y
        den = fn * fn
    else:
        # psi_n^2 = fn^2 Y ; psi_{n-1} psi_{n+1} = cross
        num = x * fn * fn * Y - cross
        den = fn * fn * Y
    return RationalMap(num, den)


def lattes_p(curve):
    """x-descent of multiplication by p and its Verschiebung part."""
    R = x_mult(curve, curve.field.p)
    return R, frobenius_decompose(R)


def deuring_supersingular(p, lam):
    """Whether the curve with this lambda is supersingular, via the Hasse
    invariant polynomial sum_{i<=m} C(m,i)^2 lam^i, m = (p-1)/2."""
    field = lam.field
    if field.p != p:
        raise ValueError("lambda is not in characteristic p")
    if lam.is_zero() or lam == field.one():
        raise ValueError("lambda in {0, 1} is singular")
    m = (p - 1) // 2
    acc = field.zero()
    power = field.one()
    for i in range(m + 1):
        acc = acc + field.element(math.comb(m, i) ** 2) * power
        power = power * lam
    return acc.is_zero()


def torsion_order(point, bound):
    """The smallest m <= bound with [m]P = O, or None."""
    acc = point
    for m in range(1, bound + 1):
        if acc.is_identity:
            return m
        acc = acc + point
    return None


def n_torsion_x(curve, n, search_degree):
    """x-coordinates in F_{p^search_degree} of affine points with [n]P = O."""
    if n < 1:
        raise ValueError("n must be >= 1")
    field = curve.field
    big = build_field(field.p, search_degree)
    out = set()
    xpart, _ = division_poly(curve, n)
    if not xpart.is_zero():
        lifted = xpart.map_field(big) if big is not field else xpart
        for root in _distinct_roots(lifted):
            out.add(root)
    if n % 2 == 0:
        for t in (field.zero(), field.one(), curve.lam):
            out.add(embed(t, big))
    pts = [ProjPoint.finite(v) for v in out]
    pts.sort(key=lambda pt: pt.value.index())
    return pts


def _distinct_roots(poly):
    field = poly.field
    if field.q > POINT_COUNT_CAP:
        raise FieldTooLarge("root scan field too large")
    return [x for x in field if poly.eval(x).is_zero()]


def point_count(curve, d):
    """#C_lambda(F_{p^d}) including the identity, by exhaustive scan."""
    field = curve.field
    if d % field.f != 0:
        raise ValueError("count degree must be a multiple of the lambda field degree")
    if field.p ** d > POINT_COUNT_CAP:
        raise FieldTooLarge(f"p^{d} exceeds the exhaustive-count cap")
    big = build_field(field.p, d)
    rhs = curve.rhs_poly().map_field(big) if big is not field else curve.rhs_poly()
    count = 1  # identity
    for x in big:
        v = rhs.eval(x)
        if v.is_zero():
            count += 1
        elif is_square(v):
            count += 2
    return count


def frobenius_trace(curve, d):
    """q + 1 - #C(F_q) for q = p^d."""
    return curve.field.p ** d + 1 - point_count(curve, d)
