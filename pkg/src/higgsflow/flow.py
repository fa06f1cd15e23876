"""The flow side: moduli points, the explicit Frobenius-pullback flat bundle,
the Hodge filtration, and the induced self-map of the z-line.

A moduli point is the zero z0 of the Higgs field on O + O(-1).  Pulling the
bundle back along z -> z^p and twisting the connection by the pulled-back
Higgs field yields a flat bundle whose non-logarithmic poles at 1 and lambda
are cured by a meromorphic gauge; the unique degree-(1-p)/2 sub-line-bundle
compatible with the bundle's extension to infinity then produces, via its
second fundamental form, a new moduli point.  Reconstructing the pointwise
map by rational interpolation gives the degree-p^2 self-map and its
Verschiebung factor.
"""

from __future__ import annotations

from .certificates import Certificate
from .errors import (
    InconsistentSamples,
    LambdaNotInPrimeField,
    NonUniqueFiltration,
    NoValidFiltration,
)
from .field import build_field, embed, project, subfield_member
from .poly import (
    Poly,
    ProjPoint,
    RationalMap,
    frobenius_decompose,
    interpolate_rational,
    taylor_expansion,
)
from .elliptic import lattes_p, LegendreCurve


class HiggsPoint:
    """A point of the moduli line: the zero locus z0 of the Higgs field."""

    __slots__ = ("z0", "lam", "field")

    def __init__(self, z0, lam):
        field = z0.field
        if lam.field is not field:
            raise ValueError("z0 and lambda live in different fields")
        if lam.is_zero() or lam == field.one():
            raise ValueError("lambda in {0, 1} is outside the moduli family")
        self.z0 = z0
        self.lam = lam
        self.field = field

    def __eq__(self, other):
        return (
            isinstance(other, HiggsPoint)
            and self.z0 == other.z0
            and self.lam == other.lam
        )

    def __hash__(self):
        return hash((self.z0, self.lam))

    def __repr__(self):
        return f"HiggsPoint(z0={self.z0!r}, lambda={self.lam!r})"


class LogFlatBundle:
    """Rank-2 flat bundle with log poles at {0, 1, infinity, lambda}.

    Chart frames: on the z-chart (u1, u2) with nabla u1 = ctilde * u2 dz and
    nabla u2 = 0; on the w = 1/z chart (u1 + gauge_w * w2, w2) with
    w2 = z^{-p} u2 and entry entry_w.  Relative to the raw Frobenius-pullback
    frame, u1 differs by the z-chart gauge: u1 = v1 + gauge_z * u2 where the
    raw entry is c_raw.
    """

    __slots__ = (
        "point", "field", "p", "lam", "c_raw", "gauge_z", "ctilde",
        "_gauge_w", "_entry_w",
    )

    def __init__(self, point, c_raw, gauge_z, ctilde):
        self.point = point
        self.field = point.field
        self.p = point.field.p
        self.lam = point.lam
        self.c_raw = c_raw
        self.gauge_z = gauge_z
        self.ctilde = ctilde
        self._gauge_w = None
        self._entry_w = None

    def _w_chart(self):
        if self._entry_w is None:
            field = self.field
            inv = RationalMap(Poly.one(field), Poly.x(field))
            e_hat = -(self.ctilde.compose(inv)) * (inv ** (self.p + 2))
            self._gauge_w, self._entry_w = _gauge_and_log_entry(e_hat, (field.zero(),))
        return self._gauge_w, self._entry_w

    @property
    def gauge_w(self):
        return self._w_chart()[0]

    @property
    def entry_w(self):
        return self._w_chart()[1]

    @property
    def rank(self):
        return 2

    @property
    def degree(self):
        return -self.p

    def connection_matrix(self, chart):
        """2x2 matrix of the connection in the given chart frame."""
        field = self.field
        zero = RationalMap(Poly.zero(field), Poly.one(field))
        if chart == "z":
            entry = self.ctilde
        elif chart == "w":
            entry = self.entry_w
        else:
            raise ValueError("chart must be 'z' or 'w'")
        return ((zero, zero), (entry, zero))

    def residue(self, at):
        """Residue of the lower-left connection entry at a log point.

        `at` is a FieldElement (0, 1 or lambda) or the string "inf".
        """
        if at == "inf":
            return _residue_at(self.entry_w, self.field.zero())
        return _residue_at(self.ctilde, at)

    def residue_matrix(self, at):
        z = self.field.zero()
        return ((z, z), (self.residue(at), z))

    def glue_residual(self):
        """entry_w - (pushforward of the z-chart connection); zero iff the
        two charts describe the same connection."""
        field = self.field
        inv = RationalMap(Poly.one(field), Poly.x(field))
        # the rescaling w2 = z^{-p} u2 contributes no derivative term in
        # characteristic p; only the change of coordinate and the second
        # gauge remain.
        pushed = -(self.ctilde.compose(inv)) * (inv ** (self.p + 2)) + self.gauge_w.derivative()
        return self.entry_w - pushed


def _residue_at(rmap, a):
    """Residue of a rational function with at most a simple pole at a."""
    field = rmap.field
    lin = Poly(field, (-a, field.one()))
    num, den = rmap.num, rmap.den
    q, r = den.divmod(lin)
    if not r.is_zero():
        if not den.eval(a).is_zero():
            return field.zero()
    if den.eval(a).is_zero():
        q = den.exact_div(lin)
        if q.eval(a).is_zero():
            raise ValueError("pole of order >= 2; not a log point")
        return num.eval(a) / q.eval(a)
    return field.zero()


def inverse_cartier(h):
    """The flat bundle obtained from the Higgs point by Frobenius pullback.

    lambda must come from the prime field (embedded anywhere); z0 may lie in
    any extension.
    """
    field = h.field
    p = field.p
    if not subfield_member(h.lam, 1):
        raise LambdaNotInPrimeField("the self-map needs lambda in the prime field")
    lam = h.lam
    z = Poly.x(field)
    zp = z ** p
    one = Poly.one(field)
    if h.z0.is_infinity:
        num = z ** (p - 1)
    else:
        s = h.z0.value ** p
        num = (z ** (p - 1)) * (zp - Poly.const(s))
    den = zp * (zp - one) * (zp - Poly.const(lam))
    c_raw = RationalMap(num, den)

    gauge_z, ctilde = _gauge_and_log_entry(
        c_raw, (field.zero(), field.one(), lam), complete=True
    )
    return LogFlatBundle(h, c_raw, gauge_z, ctilde)


def _gauge_and_log_entry(entry, pole_candidates, complete=False):
    """Split off the order->=2 principal parts of `entry` at the given points.

    Returns (gauge, logged) with logged = entry + gauge' having at most simple
    poles at the candidates; gauge is the antiderivative of minus the
    higher-order principal parts (every pole order k satisfies k - 1 != 0 in
    the field, so the antiderivative exists).  With complete=True the caller
    asserts that the candidates cover every pole of `entry` and that `entry`
    vanishes at infinity; logged is then assembled directly from the
    residues, which is much cheaper than the generic path.
    """
    field = entry.field
    num, den = entry.num, entry.den
    if complete and num.degree >= den.degree:
        raise ValueError("entry does not vanish at infinity")
    gauge = RationalMap(Poly.zero(field), Poly.one(field))
    residues = []
    for a in pole_candidates:
        k = 0
        rest = den
        lin = Poly(field, (-a, field.one()))
        while True:
            q, r = rest.divmod(lin)
            if not r.is_zero():
                break
            rest = q
            k += 1
        if k == 0:
            continue
        # entry = num / ((z-a)^k * rest); expand num/rest at a.  The
        # principal part is sum_j ser[k-j] (z-a)^{-j}, j = 2..k; its
        # antiderivative over a common denominator (z-a)^{k-1} has numerator
        # sum_i ser[i]/(k-1-i) (z-a)^i, i = 0..k-2.
        ser = taylor_expansion(num, rest, a, k)
        residues.append((a, ser[k - 1]))
        ucoeffs = []
        for i in range(k - 1):
            denom = field.element(k - 1 - i)
            if denom.is_zero():
                raise ValueError("non-integrable principal part")
            ucoeffs.append(ser[i] / denom)
        unum = Poly(field, ucoeffs)
        if unum.is_zero():
            continue
        gauge = gauge + RationalMap(unum.shift(-a), lin ** (k - 1))
    if complete:
        logged = RationalMap(Poly.zero(field), Poly.one(field))
        for a, r in residues:
            if not r.is_zero():
                logged = logged + RationalMap(
                    Poly.const(r), Poly(field, (-a, field.one()))
                )
    else:
        logged = entry + gauge.derivative()
    return gauge, logged


class HodgeFiltration:
    """The sub-line-bundle L of degree -(p-1)/2, as a section pair.

    The section is x * u1 + y * u2 in the z-chart log frame, with deg x
    bounded by (p-1)/2 and y the polynomial correction forced by regularity
    at infinity.
    """

    __slots__ = ("bundle", "x", "y", "degree")

    def __init__(self, bundle, x, y):
        self.bundle = bundle
        self.x = x
        self.y = y
        self.degree = -(bundle.p - 1) // 2

    def __repr__(self):
        return f"HodgeFiltration(x={self.x!r}, y={self.y!r})"


def hodge_filtration(V):
    """The unique admissible sub-line-bundle of V, by linear algebra.

    Sections x*u1 + y*u2 with deg x <= d0 extend to maps O(-d0) -> V iff the
    Laurent coefficients of x*g at infinity in z^-j vanish for
    j = 1 .. p - d0 - 1 (g the z-chart gauge) and y cancels the polynomial
    part of x*g.  The solution space must be one-dimensional.
    """
    field = V.field
    p = V.p
    d0 = (p - 1) // 2
    g = V.gauge_z
    nconds = p - d0 - 1

    # Laurent coefficients of g at infinity: g(1/w) = w^shift * series(w)
    gn, gd = g.num, g.den
    if gn.is_zero():
        coeff_at = lambda m: field.zero()
    else:
        shift = gd.degree - gn.degree
        order = 2 * p + 2
        ser = taylor_expansion(gn.reverse(), gd.reverse(), field.zero(), order)

        def coeff_at(m):
            i = m - shift
            return ser[i] if 0 <= i < len(ser) else field.zero()

    rows = [[coeff_at(i + j) for i in range(d0 + 1)] for j in range(1, nconds + 1)]
    kernel = _kernel_basis(rows, d0 + 1, field)
    if not kernel:
        raise NoValidFiltration("no admissible section")
    if len(kernel) > 1:
        raise NonUniqueFiltration(f"{len(kernel)}-dimensional section space")
    x = Poly(field, kernel[0])
    if g.num.is_zero():
        y = Poly.zero(field)
    else:
        y = -((x * g.num) // g.den)

    # saturation: the section may not vanish anywhere, including at infinity
    if y.is_zero():
        if x.degree > 0:
            raise NoValidFiltration("section vanishes at a finite point")
    elif x.gcd(y) != Poly.one(field):
        raise NoValidFiltration("section vanishes at a finite point")
    tail = x * g.num + y * g.den  # x*g + y, as a fraction over g.den
    if x.degree < d0:
        # the u2-component at infinity must then be nonzero: ord_inf of
        # (x*g + y) must be exactly p - d0
        if tail.is_zero() or g.den.degree - tail.degree != p - d0:
            raise NoValidFiltration("section vanishes at infinity")
    return HodgeFiltration(V, x, y)


def _kernel_basis(rows, ncols, field):
    """Basis of the kernel of the matrix over the field."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if not m[i][col].is_zero():
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][col].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][col].is_zero():
                fctr = m[i][col]
                m[i] = [v - fctr * w for v, w in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [field.zero()] * ncols
        vec[free] = field.one()
        for row_idx, col in enumerate(pivots):
            vec[col] = -m[row_idx][free]
        basis.append(vec)
    return basis


def grade_and_twist(V, L):
    """The new moduli point: the zero of the second fundamental form of L.

    After twisting by O((p-1)/2) the graded Higgs field is a section of O(1);
    its single zero is the output point.
    """
    field = V.field
    lam = V.lam
    x, y = L.x, L.y
    ct = V.ctilde
    cubic = Poly(field, (field.zero(), lam, -(field.one() + lam), field.one()))
    # W = x^2 * ctilde + x y' - x' y has at most simple poles at 0, 1, lambda;
    # Q = W * z(z-1)(z-lambda) must be a polynomial of degree <= 1.
    scaled = cubic.exact_div(ct.den) if not ct.num.is_zero() else Poly.zero(field)
    t1 = x * x * ct.num * scaled if not ct.num.is_zero() else Poly.zero(field)
    t2 = (x * y.derivative() - x.derivative() * y) * cubic
    Q = t1 + t2
    if Q.degree > 1:
        raise NoValidFiltration(f"second fundamental form of degree {Q.degree}")
    if Q.is_zero():
        raise NoValidFiltration("second fundamental form vanishes")
    if Q.degree == 0:
        return HiggsPoint(ProjPoint.infinity(field), lam)
    return HiggsPoint(ProjPoint.finite(-Q[0] / Q[1]), lam)


def phi_pointwise(lam, z0):
    """One flow step: the image of z0 under the self-map for this lambda.

    lam must be a prime-field value (possibly embedded); z0 a ProjPoint over
    any extension of the same prime field.
    """
    field = z0.field
    if lam.field is not field:
        lam = embed(lam, field)
    h = HiggsPoint(z0, lam)
    V = inverse_cartier(h)
    L = hodge_filtration(V)
    return grade_and_twist(V, L).z0


def phi_map(lam):
    """The self-map as a canonical RationalMap over F_p, with its
    Verschiebung part.

    Reconstructed by interpolation from 2p^2 + 3 pointwise evaluations over
    the smallest extension with at least 2p^2 + 7 elements.
    """
    prime = build_field(lam.field.p, 1)
    lam0 = project(lam, prime)
    if lam0 is None:
        raise LambdaNotInPrimeField("the self-map needs lambda in the prime field")
    p = prime.p
    target = 2 * p * p + 7
    m = 1
    while p ** m < target:
        m += 1
    work = build_field(p, m)
    lam_w = embed(lam0, work)
    nsamples = 2 * p * p + 3
    samples = []
    for i, zval in enumerate(work):
        if i >= nsamples:
            break
        z = ProjPoint.finite(zval)
        samples.append((z, phi_pointwise(lam_w, z)))
    phi_big = interpolate_rational(samples, p * p)

    def descend(poly):
        out = []
        for c in poly.coeffs:
            c0 = project(c, prime)
            if c0 is None:
                raise InconsistentSamples(
                    "reconstructed map has a coefficient outside the prime field"
                )
            out.append(c0)
        return Poly(prime, out)

    phi = RationalMap(descend(phi_big.num), descend(phi_big.den))
    return phi, frobenius_decompose(phi)


def conjecture_check(lam, p=None):
    """Compare the flow self-map against the x-line descent of
    multiplication by p on the Legendre curve; PASS iff identical."""
    prime = build_field(lam.field.p, 1)
    lam0 = project(lam, prime)
    if lam0 is None:
        raise LambdaNotInPrimeField("the comparison needs lambda in the prime field")
    if p is not None and p != prime.p:
        raise ValueError("p does not match the field of lambda")
    p = prime.p
    phi, psi = phi_map(lam0)
    R, psi_v = lattes_p(LegendreCurve(lam0))
    status = "PASS"
    witness = None
    if phi != R:
        status = "FAIL"
        witness = _first_difference(phi, R)
    return Certificate(
        kind="map-commutation",
        inputs={"p": p, "lambda": lam0.to_json()},
        status=status,
        payload={
            "phi": phi.to_json(),
            "psi": psi.to_json(),
            "multiplication_descent": R.to_json(),
            **({"witness": witness} if witness else {}),
        },
    )


def _first_difference(A, B):
    for part in ("num", "den"):
        pa, pb = getattr(A, part), getattr(B, part)
        for i in range(max(pa.degree, pb.degree) + 1):
            if pa[i] != pb[i]:
                return {
                    "part": part,
                    "coefficient": i,
                    "values": [pa[i].to_json(), pb[i].to_json()],
                }
    return None
