"""Cubic curves over small prime fields and their point orders.

Curves are given as y^2 = c3*x^3 + c2*x^2 + c1*x + c0 with rational
coefficients, reduced modulo a prime p (optionally into the quadratic
extension F_p(sqrt(d))).  The chord-tangent group law is implemented
directly for the general cubic, so curves printed with c3 = 4 or in
factored singular form need no preliminary transformation.

For a singular curve whose coefficients cannot be reduced mod p (prime in
a denominator), ``node_order`` computes the order of a smooth point through
the node parametrization: the smooth locus of a nodal cubic is isomorphic
to a multiplicative group, and the parameter of a point reduces mod p even
when the curve itself does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactring import (
    BadReductionError,
    QuadElem,
    ResidueInt,
    mod_reduce,
)

__all__ = [
    "SingularPointError",
    "OrderNotFoundError",
    "Fp",
    "Fp2",
    "CurveSpec",
    "CurvePoint",
    "INFINITY",
    "is_prime",
    "make_curve",
    "make_point",
    "on_curve",
    "point_add",
    "point_neg",
    "point_order",
    "count_points",
    "gap_vs_order",
    "node_order",
    "parse_rat",
    "parse_coord",
]


class SingularPointError(ValueError):
    """A singular point of a singular curve was supplied."""


class OrderNotFoundError(ArithmeticError):
    """No multiple of the point reached infinity within the search bound."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid far beyond any desk-scale modulus."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


@dataclass(frozen=True)
class Fp:
    """Prime field; elements are ResidueInt with modulus p."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, value):
        if isinstance(value, Fraction):
            return mod_reduce(value, self.p)
        return ResidueInt(value, self.p)

    @property
    def order(self):
        return self.p

    def sqrt(self, value):
        """A square root in Fp, or None when value is a non-residue."""
        elem = self(value)
        if elem.value == 0:
            return self(0)
        if not elem.is_square():
            return None
        root = elem.sqrt()
        # deterministic choice: the numerically smaller representative
        other = -root
        return root if root.value <= other.value else other


@dataclass(frozen=True)
class Fp2:
    """Quadratic extension F_p(sqrt(d)) with d a verified non-residue."""

    p: int
    d: int

    def __post_init__(self):
        base = Fp(self.p)
        if self.p == 2:
            raise ValueError("p = 2 has no quadratic non-residue of this form")
        if base(self.d).is_square():
            raise ValueError(f"{self.d} is a square mod {self.p}")

    def __call__(self, value, sqrt_part=0):
        base = Fp(self.p)
        return QuadElem(base(value), base(sqrt_part), base(self.d))

    @property
    def order(self):
        return self.p * self.p

    def sqrt_of(self, value):
        """sqrt(value) as a field element: in Fp if a residue, else b*sqrt(d)."""
        base = Fp(self.p)
        r = base.sqrt(value)
        if r is not None:
            return self(r.value)
        # value = b^2 * d for some b since value/d is then a residue
        ratio = base(value) / base(self.d)
        b = base.sqrt(ratio.value)
        if b is None:
            raise ValueError("value is neither a residue nor d times a residue")
        return self(0, b.value)


@dataclass(frozen=True)
class CurveSpec:
    """y^2 = c3*x^3 + c2*x^2 + c1*x + c0 reduced over field (Fp or Fp2)."""

    c3: object
    c2: object
    c1: object
    c0: object
    field: object
    singular: bool
    notice: str = ""

    @property
    def p(self):
        return self.field.p

    def rhs(self, x):
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0


@dataclass(frozen=True)
class CurvePoint:
    x: object = None
    y: object = None
    infinity: bool = False


INFINITY = CurvePoint(infinity=True)


def _poly_gcd_mod(a, b, p):
    """Monic gcd of coefficient lists (descending) over Fp."""

    def strip(c):
        i = 0
        while i < len(c) and c[i] % p == 0:
            i += 1
        return [x % p for x in c[i:]]

    a, b = strip(a), strip(b)
    while b:
        inv = pow(b[0], -1, p)
        b = [x * inv % p for x in b]
        while a and len(a) >= len(b):
            # subtract a[0] * x^(deg a - deg b) * b; b is left-aligned in
            # descending-coefficient lists
            lead = a[0]
            a = [(x - lead * (b[i] if i < len(b) else 0)) % p
                 for i, x in enumerate(a)]
            a = strip(a)
        a, b = b, a
    return a if a else [0]


def make_curve(c, p, adjoin=None):
    """Reduce rational coefficients (c3, c2, c1, c0) mod p.

    Raises BadReductionError when a denominator vanishes mod p.  When
    ``adjoin`` is a non-residue the curve is built over F_p(sqrt(adjoin));
    when it is a residue the curve stays over Fp with a notice recorded.
    """
    if p == 2:
        raise ValueError("p = 2 is out of scope for these curves")
    c = tuple(Fraction(x) for x in c)
    reduced = tuple(mod_reduce(x, p) for x in c)
    if reduced[0].value == 0:
        raise ValueError("leading coefficient c3 vanishes mod p")
    notice = ""
    field = Fp(p)
    if adjoin is not None:
        if Fp(p)(adjoin).is_square():
            notice = f"adjoin {adjoin} is a square mod {p}; staying over Fp"
        else:
            field = Fp2(p, adjoin % p)
    ints = [r.value for r in reduced]
    deriv = [3 * ints[0] % p, 2 * ints[1] % p, ints[2] % p]
    g = _poly_gcd_mod(list(ints), deriv, p)
    singular = len(g) >= 2
    if isinstance(field, Fp2):
        coeffs = tuple(field(r.value) for r in reduced)
    else:
        coeffs = reduced
    return CurveSpec(c3=coeffs[0], c2=coeffs[1], c1=coeffs[2], c0=coeffs[3],
                     field=field, singular=singular, notice=notice)


def _is_singular_point(curve, pt):
    if pt.infinity or not curve.singular:
        return False
    two_y = pt.y + pt.y
    grad = (curve.c3 + curve.c3 + curve.c3) * pt.x * pt.x \
        + (curve.c2 + curve.c2) * pt.x + curve.c1
    return _zero(two_y) and _zero(grad)


def _zero(v):
    if isinstance(v, QuadElem):
        return v.is_zero()
    return v.value == 0


def make_point(curve, x, y):
    """Build and validate a point from rational or sqrt coordinates.

    x, y may be Fractions (reduced mod p) or ("sqrt", d) tokens resolved in
    the curve's field (extending to Fp2 is the caller's job via make_curve's
    adjoin argument when d is a non-residue).
    """
    field = curve.field

    def resolve(v):
        if isinstance(v, tuple) and v and v[0] == "sqrt":
            d = v[1]
            if isinstance(field, Fp2):
                return field.sqrt_of(d)
            r = field.sqrt(Fraction(d))
            if r is None:
                raise ValueError(
                    f"sqrt({d}) does not exist in F_{field.p}; "
                    f"build the curve with adjoin={d}")
            return r
        val = mod_reduce(Fraction(v), field.p)
        if isinstance(field, Fp2):
            return field(val.value)
        return val

    pt = CurvePoint(x=resolve(x), y=resolve(y))
    if not on_curve(curve, pt):
        raise ValueError("point does not satisfy the curve equation")
    if _is_singular_point(curve, pt):
        raise SingularPointError("the point is the singular point of the curve")
    return pt


def on_curve(curve, pt):
    if pt.infinity:
        return True
    return _zero(pt.y * pt.y - curve.rhs(pt.x))


def point_neg(pt):
    if pt.infinity:
        return pt
    return CurvePoint(x=pt.x, y=-pt.y)


def point_add(curve, P, Q):
    """Chord-tangent addition on the general cubic y^2 = c3*x^3 + ...

    The chord y = lam*x + nu meets the cubic where
    c3*x^3 + (c2 - lam^2)*x^2 + ... = 0, so the three intersection
    abscissae sum to (lam^2 - c2)/c3; the third point is reflected.
    """
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    for pt in (P, Q):
        if _is_singular_point(curve, pt):
            raise SingularPointError("cannot add through the singular point")
    if _zero(P.x - Q.x):
        if _zero(P.y + Q.y):
            return INFINITY
        # tangent
        num = (curve.c3 + curve.c3 + curve.c3) * P.x * P.x \
            + (curve.c2 + curve.c2) * P.x + curve.c1
        lam = num / (P.y + P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = (lam * lam - curve.c2) / curve.c3 - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(x=x3, y=y3)


def _order_bound(curve):
    p = curve.p
    if curve.singular:
        # smooth locus is a group of size p - 1, p + 1, or p
        return p + 1
    hasse = p + 1 + math.isqrt(4 * p) + (0 if math.isqrt(4 * p) ** 2 == 4 * p else 1)
    if isinstance(curve.field, Fp2):
        return hasse * hasse
    return hasse


def point_order(curve, P):
    """Smallest N >= 1 with [N]P = infinity, by iterated addition."""
    if P.infinity:
        return 1
    bound = _order_bound(curve)
    acc = P
    for n in range(1, bound + 1):
        if acc.infinity:
            return n
        acc = point_add(curve, acc, P)
    if acc.infinity:
        return bound + 1
    raise OrderNotFoundError(
        f"no multiple of the point vanished within bound {bound}")


def count_points(curve):
    """Brute-force #E(Fp) including infinity (nonsingular curves over Fp)."""
    if isinstance(curve.field, Fp2):
        raise ValueError("brute-force count implemented over Fp only")
    p = curve.p
    total = 1  # infinity
    for x in range(p):
        r = curve.rhs(ResidueInt(x, p))
        if r.value == 0:
            total += 1
        elif r.is_square():
            total += 2
    return total


@dataclass(frozen=True)
class GapOrderComparison:
    gap: object
    order: int
    equal: bool
    gap_divides_order: bool
    order_divides_gap: bool


def gap_vs_order(report, curve, P):
    """Compare a divisibility-gap report's N_r with the point order."""
    order = point_order(curve, P)
    gap = report.gap
    if gap is None:
        return GapOrderComparison(gap=None, order=order, equal=False,
                                  gap_divides_order=False,
                                  order_divides_gap=False)
    return GapOrderComparison(
        gap=gap, order=order, equal=gap == order,
        gap_divides_order=order % gap == 0,
        order_divides_gap=gap % order == 0)


# ---------------------------------------------------------------------------
# singular curves whose coefficients do not reduce mod p


def _rational_double_root(c):
    """Double root x0 and simple root x1 of a singular rational cubic."""
    c3, c2, c1, c0 = (Fraction(v) for v in c)
    # gcd(f, f') is linear at a node; its root is the double root
    # f' = 3*c3*x^2 + 2*c2*x + c1; compute gcd over Q via one pseudo-division
    # candidates: roots of f' that are also roots of f
    disc = (2 * c2) ** 2 - 4 * (3 * c3) * c1
    num = disc.numerator * disc.denominator
    r = math.isqrt(abs(num))
    if num < 0 or r * r != num:
        raise ValueError("cubic has no rational double root")
    sq = Fraction(r, disc.denominator)
    for x0 in ((-2 * c2 + sq) / (6 * c3), (-2 * c2 - sq) / (6 * c3)):
        if ((c3 * x0 + c2) * x0 + c1) * x0 + c0 == 0:
            x1 = -c2 / c3 - 2 * x0
            return x0, x1
    raise ValueError("cubic is not singular over Q")


def node_order(c, p, x, y_sq=None):
    """Order of a smooth point of a singular rational cubic, reduced mod p.

    Works even when the curve's coefficients have p in a denominator: the
    node at (x0, 0) has tangent slopes +-m with m^2 = c3*(x0 - x1), and
    t(P) = (y - m*(x - x0)) / (y + m*(x - x0)) maps the smooth locus
    isomorphically to a multiplicative group.  With u^2 = m^2*(x - x0)^2
    and y^2 = f(x) (both rational), the rationalized parameter is

        t = (A - 2*sqrt(E)) / B,  A = y^2 + u^2,  B = y^2 - u^2,  E = y^2*u^2,

    which reduces mod p whenever A, B, E do (the sign choice swaps t with
    1/t and does not affect the order).  The result is the multiplicative
    order of t in Fp or Fp2.
    """
    c3, c2, c1, c0 = (Fraction(v) for v in c)
    x = Fraction(x)
    x0, x1 = _rational_double_root((c3, c2, c1, c0))
    if y_sq is None:
        y_sq = ((c3 * x + c2) * x + c1) * x + c0
    y_sq = Fraction(y_sq)
    m2 = c3 * (x0 - x1)
    u2 = m2 * (x - x0) ** 2
    A = y_sq + u2
    B = y_sq - u2
    E = y_sq * u2
    if B == 0:
        raise ValueError("point lies on a tangent-cone line; parameter undefined")
    a = mod_reduce(A, p)
    b = mod_reduce(B, p)
    e = mod_reduce(E, p)
    if b.value == 0:
        raise BadReductionError("parameter denominator vanishes mod p")
    base = Fp(p)
    root = base.sqrt(Fraction(e.value))
    if root is not None:
        t = (a - root - root) / b
        if t.value == 0:
            raise ValueError("degenerate parameter t = 0")
        one = ResidueInt(1, p)
    else:
        ext = Fp2(p, e.value)
        t = (ext(a.value) - ext(0, 2)) / ext(b.value)
        one = ext(1)
    order = 1
    acc = t
    bound = p * p - 1
    while not _zero(acc - one):
        acc = acc * t
        order += 1
        if order > bound:
            raise OrderNotFoundError("parameter has no order within p^2 - 1")
    return order


# ---------------------------------------------------------------------------
# parsing helpers for the CLI


def parse_rat(s):
    """Parse 'num' or 'num/den' into a Fraction."""
    return Fraction(str(s).strip())


def parse_coord(s):
    """Parse a coordinate: rational string or 'sqrt:d' token."""
    s = str(s).strip()
    if s.startswith("sqrt:"):
        return ("sqrt", int(Fraction(s[5:])))
    return parse_rat(s)
