"""Dense univariate polynomials and rational self-maps of P^1 over a field.

Polynomials are immutable coefficient tuples (low to high degree, no trailing
zeros).  RationalMap enforces the canonical form gcd(N, D) = 1 with a monic
denominator, so two maps are equal as functions on P^1 iff their canonical
forms are identical.
"""

from __future__ import annotations

from .errors import (
    BothZero,
    DegreeOverflow,
    DivisionByZeroPoly,
    FieldTooLarge,
    InconsistentSamples,
    InsufficientSamples,
    NotFrobeniusComposite,
    ZeroPolynomial,
)
from .field import FieldElement, build_field, embed

DEGREE_CAP_DEFAULT = 10 ** 5
ROOT_SEARCH_CAP = 10 ** 6


def _raw_conv(a, b, field):
    """Convolution of two FieldElement lists, minimizing wrapper overhead."""
    p = field.p
    n = len(a) + len(b) - 1
    acc = [(0,) * field.f for _ in range(n)]
    mul = field._mul
    for i, x in enumerate(a):
        xc = x.coeffs
        if not any(xc):
            continue
        for j, y in enumerate(b):
            yc = y.coeffs
            if not any(yc):
                continue
            prod = mul(xc, yc)
            cur = acc[i + j]
            acc[i + j] = tuple((u + v) % p for u, v in zip(cur, prod))
    return [FieldElement(field, c) for c in acc]


class Poly:
    """Dense polynomial over an ExtensionField."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs=()):
        cs = [field.element(c) if not isinstance(c, FieldElement) else c for c in coeffs]
        for c in cs:
            if c.field is not field:
                raise ValueError("coefficient from a different field")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def const(cls, c):
        return cls(c.field, (c,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def from_roots(cls, field, roots):
        out = cls.one(field)
        for r in roots:
            out = out * cls(field, (-field.element(r), field.one()))
        return out

    # -- basic structure --------------------------------------------------

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, (self[i] + other[i] for i in range(n)))

    def __sub__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, (self[i] - other[i] for i in range(n)))

    def __neg__(self):
        return Poly(self.field, (-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            s = self.field.element(other)
            return Poly(self.field, (c * s for c in self.coeffs))
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.field)
        return Poly(self.field, _raw_conv(self.coeffs, other.coeffs, self.field))

    __rmul__ = __mul__

    def __pow__(self, e):
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (FieldElement, int)):
            return Poly(self.field, (other,))
        raise TypeError(f"cannot combine Poly with {type(other)!r}")

    def divmod(self, other):
        """Euclidean division: self = q * other + r with deg r < deg other."""
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZeroPoly("division by the zero polynomial")
        a = list(self.coeffs)
        inv = other.leading().inverse()
        q = [self.field.zero()] * max(0, len(a) - len(other.coeffs) + 1)
        while len(a) >= len(other.coeffs):
            s = a[-1] * inv
            d = len(a) - len(other.coeffs)
            q[d] = s
            for i, c in enumerate(other.coeffs):
                a[i + d] = a[i + d] - s * c
            while a and a[-1].is_zero():
                a.pop()
            if not a:
                break
        return Poly(self.field, q), Poly(self.field, a)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division was not exact")
        return q

    def gcd(self, other):
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def monic(self):
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return self * self.leading().inverse()

    def derivative(self):
        return Poly(self.field, (self.coeffs[i] * i for i in range(1, len(self.coeffs))))

    def compose(self, other):
        """self(other) by Horner."""
        other = self._coerce(other)
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.const(c)
        return acc

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        x = self.field.element(x)
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, a):
        """self(z + a)."""
        return self.compose(Poly(self.field, (a, 1)))

    def reverse(self, n=None):
        """w^n * self(1/w); n defaults to the degree."""
        if n is None:
            n = self.degree
        if n < self.degree:
            raise ValueError("reversal length below degree")
        cs = [self[n - i] for i in range(n + 1)]
        return Poly(self.field, cs)

    def map_field(self, target):
        """Embed all coefficients into a larger field."""
        return Poly(target, (embed(c, target) for c in self.coeffs))

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(
            f"({c!r})z^{i}" if i else f"({c!r})" for i, c in enumerate(self.coeffs) if c
        )


class ProjPoint:
    """A point of P^1: either a finite field element or infinity."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = value  # FieldElement or None for infinity

    @classmethod
    def finite(cls, x):
        return cls(x.field, x)

    @classmethod
    def infinity(cls, field):
        return cls(field, None)

    @property
    def is_infinity(self):
        return self.value is None

    def map_field(self, target):
        if self.is_infinity:
            return ProjPoint.infinity(target)
        return ProjPoint.finite(embed(self.value, target))

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.field is not other.field:
            return False
        return self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def to_json(self):
        return "inf" if self.is_infinity else self.value.to_json()

    def __repr__(self):
        return "inf" if self.is_infinity else repr(self.value)


class RationalMap:
    """A self-map of P^1 in canonical form: gcd(N, D) = 1, D monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num, den):
        num, den = _canonical_pair(num, den)
        self.field = num.field
        self.num = num
        self.den = den

    @property
    def degree(self):
        return max(self.num.degree, self.den.degree)

    def __eq__(self, other):
        return (
            isinstance(other, RationalMap)
            and self.field is other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    # -- function-field arithmetic (results re-canonicalized) -----------

    def __add__(self, other):
        other = self._coerce(other)
        return RationalMap(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        other = self._coerce(other)
        return RationalMap(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalMap(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalMap(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise DivisionByZeroPoly("division by the zero rational function")
        return RationalMap(self.num * other.den, self.den * other.num)

    def _coerce(self, other):
        if isinstance(other, RationalMap):
            if other.field is not self.field:
                raise ValueError("maps over different fields")
            return other
        if isinstance(other, Poly):
            return RationalMap(other, Poly.one(other.field))
        if isinstance(other, (FieldElement, int)):
            f = self.field
            return RationalMap(Poly(f, (other,)), Poly.one(f))
        raise TypeError(f"cannot combine RationalMap with {type(other)!r}")

    def __pow__(self, e):
        if e < 0:
            return RationalMap(self.den, self.num) ** (-e)
        out = RationalMap(Poly.one(self.field), Poly.one(self.field))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def derivative(self):
        n, d = self.num, self.den
        return RationalMap(n.derivative() * d - n * d.derivative(), d * d)

    # -- P^1 structure ----------------------------------------------------

    def eval_proj(self, z):
        """Projective evaluation at a ProjPoint (or FieldElement)."""
        if isinstance(z, FieldElement):
            z = ProjPoint.finite(z)
        if z.field is not self.field:
            raise ValueError("point and map over different fields")
        if z.is_infinity:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return ProjPoint.infinity(self.field)
            if dn < dd:
                return ProjPoint.finite(self.field.zero())
            return ProjPoint.finite(self.num.leading() / self.den.leading())
        dv = self.den.eval(z.value)
        if dv.is_zero():
            return ProjPoint.infinity(self.field)
        return ProjPoint.finite(self.num.eval(z.value) / dv)

    def compose(self, other):
        """self after other, canonical."""
        other = self._coerce(other)
        k = self.degree
        sn, sd = other.num, other.den
        # homogeneous substitution: sum coeff_i * sn^i * sd^(k-i)
        sn_pows = [Poly.one(self.field)]
        sd_pows = [Poly.one(self.field)]
        for _ in range(k):
            sn_pows.append(sn_pows[-1] * sn)
            sd_pows.append(sd_pows[-1] * sd)

        def subst(poly):
            acc = Poly.zero(self.field)
            for i in range(k + 1):
                c = poly[i]
                if not c.is_zero():
                    acc = acc + sn_pows[i] * sd_pows[k - i] * c
            return acc

        return RationalMap(subst(self.num), subst(self.den))

    def map_field(self, target):
        return RationalMap(self.num.map_field(target), self.den.map_field(target))

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "num": self.num.to_json(),
            "den": self.den.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        fld = build_field(data["field"]["p"], data["field"]["f"])
        if list(fld.modulus) != data["field"]["modulus"]:
            raise ValueError("serialized modulus does not match the canonical one")
        num = Poly(fld, (fld.element(c) for c in data["num"]))
        den = Poly(fld, (fld.element(c) for c in data["den"]))
        return cls(num, den)

    def __repr__(self):
        return f"({self.num!r}) / ({self.den!r})"


def _canonical_pair(num, den):
    if not isinstance(num, Poly) or not isinstance(den, Poly):
        raise TypeError("numerator and denominator must be Poly")
    if num.field is not den.field:
        raise ValueError("numerator and denominator over different fields")
    if num.is_zero() and den.is_zero():
        raise BothZero("numerator and denominator both zero")
    if den.is_zero():
        # the constant map to infinity is not a self-map we support
        raise DivisionByZeroPoly("denominator is the zero polynomial")
    if num.is_zero():
        return num, Poly.one(num.field)
    g = num.gcd(den)
    num = num.exact_div(g)
    den = den.exact_div(g)
    lead = den.leading().inverse()
    return num * lead, den * lead


def canonicalize(num, den):
    """Canonical RationalMap with common factors removed, denominator monic."""
    return RationalMap(num, den)


def eval_proj(rmap, z):
    return rmap.eval_proj(z)


def frobenius_decompose(rmap):
    """The map psi with psi(z^p) = rmap(z), if rmap is a polynomial in z^p."""
    p = rmap.field.p

    def descend(poly):
        cs = [poly.field.zero()] * (poly.degree // p + 1) if not poly.is_zero() else []
        for i, c in enumerate(poly.coeffs):
            if c.is_zero():
                continue
            if i % p:
                raise NotFrobeniusComposite(
                    f"exponent {i} not divisible by {p}; map does not factor through z^{p}"
                )
            cs[i // p] = c
        return Poly(poly.field, cs)

    return RationalMap(descend(rmap.num), descend(rmap.den))


def iterate_map(rmap, n, cap=DEGREE_CAP_DEFAULT):
    """n-fold composition of rmap with itself, canonical."""
    if n < 1:
        raise ValueError("iteration count must be >= 1")
    if rmap.degree >= 1 and rmap.degree ** n > cap:
        raise DegreeOverflow(f"degree {rmap.degree}^{n} exceeds cap {cap}")
    out = rmap
    for _ in range(n - 1):
        out = out.compose(rmap)
    return out


def fixed_point_divisor(rmap):
    """Fixed points of rmap as a divisor of degree deg + 1.

    Returns (F, inf_fixed, inf_mult) where F(z) = N(z) - z D(z) carries the
    finite fixed points with multiplicity and inf_mult is the vanishing order
    at infinity in the w = 1/z chart.  deg F + inf_mult = deg(rmap) + 1.
    """
    field = rmap.field
    F = rmap.num - Poly.x(field) * rmap.den
    if F.is_zero():
        raise ValueError("identity map: every point is fixed")
    d = rmap.degree
    nh = rmap.num.reverse(d)
    dh = rmap.den.reverse(d)
    inf_fixed = rmap.num.degree > rmap.den.degree
    inf_mult = 0
    if inf_fixed:
        g = dh - Poly.x(field) * nh
        while inf_mult <= g.degree and g[inf_mult].is_zero():
            inf_mult += 1
    assert F.degree + inf_mult == d + 1
    return F, inf_fixed, inf_mult


def roots_with_multiplicity(poly, search_degree):
    """All roots of poly in F_{p^search_degree}, with multiplicities.

    Exhaustive scan of the search field; the field order must stay at desk
    scale (<= 10^6).  Returns a list of (FieldElement, int) sorted by the
    canonical element order.
    """
    if poly.is_zero():
        raise ZeroPolynomial("the zero polynomial has every root")
    base = poly.field
    if search_degree % base.f != 0:
        raise ValueError("search degree must be a multiple of the coefficient field degree")
    if base.p ** search_degree > ROOT_SEARCH_CAP:
        raise FieldTooLarge(f"p^{search_degree} exceeds the exhaustive-search cap")
    big = build_field(base.p, search_degree)
    lifted = poly.map_field(big) if big is not base else poly
    out = []
    for x in big:
        if lifted.eval(x).is_zero():
            mult = 0
            rem = lifted
            lin = Poly(big, (-x, big.one()))
            while True:
                q, r = rem.divmod(lin)
                if not r.is_zero():
                    break
                rem = q
                mult += 1
            out.append((x, mult))
    return out


def interpolate_rational(samples, deg_bound):
    """The unique canonical RationalMap of degree <= deg_bound through samples.

    samples: list of (ProjPoint, ProjPoint) with distinct finite abscissae;
    infinite values are handled by a Moebius change of coordinates on the
    value side.  Every sample is re-checked on the result.
    """
    if deg_bound < 0:
        raise ValueError("degree bound must be >= 0")
    if not samples:
        raise InsufficientSamples("no samples")
    field = samples[0][0].field
    pts = []
    seen = set()
    for z, v in samples:
        if z.is_infinity:
            raise ValueError("abscissae must be finite")
        if z.value in seen:
            raise InsufficientSamples(f"duplicate abscissa {z.value!r}")
        seen.add(z.value)
        pts.append((z.value, v))
    if len(pts) < 2 * deg_bound + 2:
        raise InsufficientSamples(
            f"need at least {2 * deg_bound + 2} samples for degree {deg_bound}, got {len(pts)}"
        )

    has_inf = any(v.is_infinity for _, v in pts)
    if has_inf:
        finite_vals = {v.value for _, v in pts if not v.is_infinity}
        beta = None
        for cand in field:
            if cand not in finite_vals:
                beta = cand
                break
        if beta is None:
            raise InconsistentSamples("field too small to shift infinite values away")
        moved = [
            (z, ProjPoint.finite(field.zero() if v.is_infinity else (v.value - beta).inverse()))
            for z, v in pts
        ]
        t = _cauchy_interpolate(moved, deg_bound, field)
        one = Poly.one(field)
        result = RationalMap(t.num * beta + t.den * one, t.num)
    else:
        result = _cauchy_interpolate(pts, deg_bound, field)

    if result.degree > deg_bound:
        raise InconsistentSamples("no map of the requested degree fits the samples")
    for z, v in samples:
        if result.eval_proj(z) != v:
            raise InconsistentSamples(f"reconstruction fails at {z!r}")
    return result


def _cauchy_interpolate(pts, d, field):
    """Rational reconstruction from finite-valued points via EEA."""
    # Newton interpolation of the dense interpolant P, then EEA against
    # M = prod (z - z_i), stopping at numerator degree <= d.
    zs = [z for z, _ in pts]
    vs = [v.value for _, v in pts]
    n = len(pts)
    coeffs = list(vs)
    inv_cache = {}
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            diff = zs[i] - zs[i - j]
            inv = inv_cache.get(diff.coeffs)
            if inv is None:
                inv = diff.inverse()
                inv_cache[diff.coeffs] = inv
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) * inv
    P = Poly.zero(field)
    for i in range(n - 1, -1, -1):
        P = P * Poly(field, (-zs[i], field.one())) + Poly.const(coeffs[i])
    M = Poly.from_roots(field, zs)

    r_prev, r_cur = M, P
    t_prev, t_cur = Poly.zero(field), Poly.one(field)
    while not r_cur.is_zero() and r_cur.degree > d:
        q, r_next = r_prev.divmod(r_cur)
        r_prev, r_cur = r_cur, r_next
        t_prev, t_cur = t_cur, t_prev - q * t_cur
    if t_cur.is_zero() or (not r_cur.is_zero() and r_cur.degree > d) or t_cur.degree > d:
        raise InconsistentSamples("no map of the requested degree fits the samples")
    if r_cur.is_zero():
        return RationalMap(Poly.zero(field), Poly.one(field))
    return RationalMap(r_cur, t_cur)


def taylor_expansion(num, den, a, order):
    """First `order` Taylor coefficients of num/den at z = a; den(a) != 0."""
    field = num.field
    a = field.element(a)
    if den.eval(a).is_zero():
        raise DivisionByZeroPoly("expansion point is a pole")
    ns = num.shift(a).coeffs
    ds = den.shift(a).coeffs
    inv0 = ds[0].inverse()
    out = []
    # naive series division, fine at desk scale
    rem = list(ns) + [field.zero()] * order
    for k in range(order):
        c = rem[k] * inv0
        out.append(c)
        for i, dcoef in enumerate(ds):
            if k + i < len(rem):
                rem[k + i] = rem[k + i] - c * dcoef
    return out
