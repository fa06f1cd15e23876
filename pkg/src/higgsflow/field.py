"""Exact arithmetic in F_p and its extensions F_{p^f}.

Elements are coefficient vectors over F_p modulo a deterministically chosen
monic irreducible, so the same (p, f) always produces the same field on any
machine.  Everything is immutable and safe to share.
"""

from __future__ import annotations

from .errors import DegreeNotDivisor, EvenPrime, NotPrime

P_BOUND = 1 << 20


def is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class ExtensionField:
    """The finite field F_{p^f} with a deterministic modulus.

    Use :func:`build_field`; constructing directly bypasses the cache.
    """

    def __init__(self, p, f):
        if not isinstance(p, int) or not is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if p == 2:
            raise EvenPrime("characteristic 2 is not supported")
        if p > P_BOUND:
            raise NotPrime(f"p = {p} exceeds the supported bound {P_BOUND}")
        if not isinstance(f, int) or f < 1:
            raise ValueError(f"extension degree must be a positive integer, got {f}")
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = self._find_modulus()
        # reduction table: x^(f+k) mod modulus for k = 0..f-2, as raw tuples
        self._red = self._reduction_table()
        self._embeddings = {}
        self._nonresidue = None

    # -- construction -------------------------------------------------

    def _find_modulus(self):
        p, f = self.p, self.f
        if f == 1:
            return (0, 1)
        n = 0
        while True:
            coeffs = []
            m = n
            for _ in range(f):
                coeffs.append(m % p)
                m //= p
            cand = tuple(coeffs) + (1,)
            if self._is_irreducible(cand):
                return cand
            n += 1

    def _is_irreducible(self, m):
        # Rabin's test: x^(p^f) == x mod m, and x^(p^(f/l)) - x coprime to m
        # for every prime l | f.
        p, f = self.p, self.f
        if m[0] == 0:
            return False
        x = (0, 1)
        xq = _rp_powmod_xp(x, p, f, m, p)
        if _rp_trim(_rp_sub(xq, x, p)):
            return False
        for l in _prime_factors(f):
            xk = _rp_powmod_xp(x, p, f // l, m, p)
            g = _rp_gcd(_rp_sub(xk, x, p), m, p)
            if len(g) != 1:
                return False
        return True

    def _reduction_table(self):
        f, p = self.f, self.p
        if f == 1:
            return []
        # x^f = -(modulus without leading term)
        base = tuple((-c) % p for c in self.modulus[:f])
        rows = [base]
        for _ in range(f - 2):
            prev = rows[-1]
            # multiply by x, reduce
            shifted = (0,) + prev
            top = shifted[f]
            row = tuple((shifted[i] + top * base[i]) % p for i in range(f))
            rows.append(row)
        return rows

    # -- element factories ---------------------------------------------

    def zero(self):
        return FieldElement(self, (0,) * self.f)

    def one(self):
        return FieldElement(self, (1,) + (0,) * (self.f - 1))

    def gen(self):
        """The class of x, a generator of the field over F_p (f >= 2)."""
        if self.f == 1:
            return self.one()
        return FieldElement(self, (0, 1) + (0,) * (self.f - 2))

    def element(self, value):
        """Coerce an int, list of ints, or FieldElement of this field."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.f - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.f:
            raise ValueError("coefficient vector too long")
        coeffs += (0,) * (self.f - len(coeffs))
        return FieldElement(self, coeffs)

    def from_index(self, n):
        """Element number n in the canonical enumeration, 0 <= n < q."""
        coeffs = []
        for _ in range(self.f):
            coeffs.append(n % self.p)
            n //= self.p
        return FieldElement(self, tuple(coeffs))

    def __iter__(self):
        for n in range(self.q):
            yield self.from_index(n)

    # -- raw tuple arithmetic (used by FieldElement) --------------------

    def _mul(self, a, b):
        p, f = self.p, self.f
        if f == 1:
            return (a[0] * b[0] % p,)
        n = 2 * f - 1
        conv = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:f]]
        for k in range(f, n):
            c = conv[k] % p
            if c:
                row = self._red[k - f]
                for i in range(f):
                    out[i] = (out[i] + c * row[i]) % p
        return tuple(out)

    def _pow(self, a, e):
        if e < 0:
            a = self._inv(a)
            e = -e
        result = (1,) + (0,) * (self.f - 1)
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero field element")
        return self._pow(a, self.q - 2)

    def nonresidue(self):
        """First non-square in enumeration order (cached)."""
        if self._nonresidue is None:
            e = (self.q - 1) // 2
            for x in self:
                if not x.is_zero() and x ** e != self.one():
                    self._nonresidue = x
                    break
        return self._nonresidue

    # -- misc ------------------------------------------------------------

    def to_json(self):
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"F_{self.p}^{self.f}" if self.f > 1 else f"F_{self.p}"

    def __eq__(self, other):
        return self is other or (
            isinstance(other, ExtensionField) and (self.p, self.f) == (other.p, other.f)
        )

    def __hash__(self):
        return hash((self.p, self.f))


class FieldElement:
    """An element of an ExtensionField, stored as a coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs))
        )

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field.element(other) / self

    def __pow__(self, e):
        return FieldElement(self.field, self.field._pow(self.coeffs, e))

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.element(other)
        return (
            isinstance(other, FieldElement)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.f, self.coeffs))

    def index(self):
        """Position in the canonical enumeration order."""
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def to_json(self):
        return list(self.coeffs)

    def __repr__(self):
        if self.field.f == 1:
            return str(self.coeffs[0])
        return f"{list(self.coeffs)}/{self.field!r}"


# ----------------------------------------------------------------------
# public operations


_FIELD_CACHE = {}


def build_field(p, f=1):
    """The field of order p^f, with the canonical modulus.  Cached."""
    key = (p, f)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = ExtensionField(p, f)
    return _FIELD_CACHE[key]


def frobenius(x):
    """x ** p, the absolute Frobenius."""
    return x ** x.field.p


def frobenius_inverse(x):
    """The unique y with y^p = x, i.e. frobenius applied f-1 times."""
    return x ** (x.field.p ** (x.field.f - 1))


def trace_to_prime(x):
    """Tr_{F_q / F_p}(x), returned as an element of F_p."""
    field = x.field
    acc = x
    y = x
    for _ in range(field.f - 1):
        y = y ** field.p
        acc = acc + y
    # the trace lies in the prime subfield, i.e. is a constant vector
    assert all(c == 0 for c in acc.coeffs[1:])
    return build_field(field.p, 1).element(acc.coeffs[0])


def norm_to_prime(x):
    """N_{F_q / F_p}(x) = x^((q-1)/(p-1)), as an element of F_p."""
    field = x.field
    n = x ** ((field.q - 1) // (field.p - 1)) if not x.is_zero() else x
    assert all(c == 0 for c in n.coeffs[1:])
    return build_field(field.p, 1).element(n.coeffs[0])


def is_square(x):
    if x.is_zero():
        return True
    return x ** ((x.field.q - 1) // 2) == x.field.one()


def sqrt(x):
    """Both square roots of x, or None if x is not a square.

    Returns (0,) for zero and an ordered pair (r, -r) otherwise.
    """
    field = x.field
    if x.is_zero():
        return (x,)
    if not is_square(x):
        return None
    q = field.q
    if q % 4 == 3:
        r = x ** ((q + 1) // 4)
    else:
        r = _tonelli_shanks(x)
    assert r * r == x
    r2 = -r
    return (r, r2) if r.index() <= r2.index() else (r2, r)


def _tonelli_shanks(x):
    field = x.field
    q = field.q
    s, t = 0, q - 1
    while t % 2 == 0:
        t //= 2
        s += 1
    z = field.nonresidue()
    m = s
    c = z ** t
    u = x ** t
    r = x ** ((t + 1) // 2)
    one = field.one()
    while u != one:
        # find least i with u^(2^i) = 1
        i, u2 = 0, u
        while u2 != one:
            u2 = u2 * u2
            i += 1
        b = c ** (1 << (m - i - 1))
        m = i
        c = b * b
        u = u * c
        r = r * b
    return r


def subfield_member(x, d):
    """True iff x lies in the subfield F_{p^d}; requires d | f."""
    if x.field.f % d != 0:
        raise DegreeNotDivisor(f"{d} does not divide {x.field.f}")
    return x ** (x.field.p ** d) == x


def min_subfield_degree(x):
    """Smallest d | f with x in F_{p^d}."""
    f = x.field.f
    for d in sorted(d for d in range(1, f + 1) if f % d == 0):
        if subfield_member(x, d):
            return d
    raise AssertionError("unreachable")


def embed(x, target):
    """Canonical embedding of x into the larger field `target`.

    Requires the same characteristic and source degree dividing the target
    degree.  The source generator is sent to the least root (in enumeration
    order) of the source modulus inside `target`; the choice is cached per
    field pair, so the embedding is a fixed deterministic homomorphism.
    """
    src = x.field
    if src is target:
        return x
    if src.p != target.p:
        raise ValueError("cannot embed between different characteristics")
    if target.f % src.f != 0:
        raise DegreeNotDivisor(f"{src.f} does not divide {target.f}")
    if src.f == 1:
        return target.element(x.coeffs[0])
    img = src._embeddings.get((target.p, target.f))
    if img is None:
        img = _least_root_of_modulus(src, target)
        src._embeddings[(target.p, target.f)] = img
    acc = target.zero()
    for c in reversed(x.coeffs):
        acc = acc * img + target.element(c)
    return acc


def project(x, target):
    """Inverse of embed, or None if x lies outside the image subfield."""
    src = x.field
    if src is target:
        return x
    if not subfield_member(x, target.f):
        return None
    if target.f == 1:
        return target.element(x.coeffs[0])
    # match against the embedded enumeration; desk-scale targets only
    for y in target:
        if embed(y, src) == x:
            return y
    raise AssertionError("unreachable: membership already checked")


def _least_root_of_modulus(src, target):
    """Least root (enumeration order) of src.modulus inside target."""
    m = [target.element(c) for c in src.modulus]
    roots = _poly_roots(m, target)
    assert len(roots) == src.f, "modulus must split in the target field"
    return min(roots, key=lambda r: r.index())


# minimal polynomial machinery over an ExtensionField, local to embeddings;
# the full Poly type lives in poly.py and depends on this module.


def _ptrim(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def _pmod(a, b):
    a = list(a)
    inv = b[-1].inverse()
    while len(a) >= len(b):
        s = a[-1] * inv
        d = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + d] = a[i + d] - s * c
        _ptrim(a)
        if not a:
            break
    return a


def _pgcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _pmulmod(a, b, m, field):
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _pmod(out, m)


def _ppowmod(a, e, m, field):
    result = [field.one()]
    base = _pmod(a, m)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, field)
        base = _pmulmod(base, base, m, field)
        e >>= 1
    return result


def _poly_roots(m, field):
    """All roots in `field` of a squarefree polynomial that splits there."""
    m = _ptrim(list(m))
    roots = []
    stack = [m]
    x = [field.zero(), field.one()]
    while stack:
        h = stack.pop()
        if len(h) == 2:
            roots.append(-h[0] / h[1])
            continue
        # deterministic Cantor-Zassenhaus: shift by successive elements
        for delta in field:
            t = _ppowmod([delta, field.one()], (field.q - 1) // 2, h, field)
            if not t:
                t = [field.zero()]
            t = _ptrim([t[0] - field.one()] + list(t[1:]))
            g = _pgcd(h, t)
            if 1 < len(g) < len(h):
                stack.append(g)
                stack.append(_pdiv_exact(h, g, field))
                break
        else:
            raise AssertionError("failed to split polynomial over the field")
    return roots


def _pdiv_exact(a, b, field):
    a = list(a)
    q = [field.zero()] * (len(a) - len(b) + 1)
    inv = b[-1].inverse()
    while len(a) >= len(b):
        s = a[-1] * inv
        d = len(a) - len(b)
        q[d] = s
        for i, c in enumerate(b):
            a[i + d] = a[i + d] - s * c
        _ptrim(a)
        if not a:
            break
    assert not a, "division was not exact"
    return q


# raw int-tuple polynomial helpers over F_p, used by the irreducibility test


def _rp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _rp_sub(a, b, p):
    n = max(len(a), len(b))
    return tuple(
        ((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)
    )


def _rp_mod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        s = a[-1] * inv % p
        d = len(a) - len(m)
        for i, c in enumerate(m):
            a[i + d] = (a[i + d] - s * c) % p
        while a and a[-1] == 0:
            a.pop()
        if not a:
            break
    return tuple(a)


def _rp_mulmod(a, b, m, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _rp_mod(tuple(out), m, p)


def _rp_powmod_xp(x, p, k, m, _p):
    """x^(p^k) mod m over F_p, by binary powering on the exponent."""
    e = p ** k
    result = (1,)
    base = _rp_mod(x, m, p)
    while e:
        if e & 1:
            result = _rp_mulmod(result, base, m, p)
        base = _rp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _rp_gcd(a, b, p):
    a, b = _rp_trim(a), _rp_trim(b)
    while b:
        a, b = b, _rp_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a
