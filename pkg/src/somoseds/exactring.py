"""Exact arithmetic substrate.

Arbitrary-precision integers (Python ``int``), exact rationals
(``fractions.Fraction``), residue rings, quadratic extensions, and sparse
multivariate (Laurent) polynomials over the integers with exact division.

Polynomials live over a fixed, ordered variable alphabet::

    alpha < beta < gamma < delta < s < x1 < x2 < x3 < x4 < x5

Monomials are compared in graded-lexicographic order (total degree first,
then lexicographic with ``alpha`` most significant).  Internally a monomial
is packed into a single integer -- total degree in the top field, then one
24-bit field per variable -- so that monomial products are plain integer
additions and ``max()`` over keys is the graded-lex leading monomial.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

__all__ = [
    "VARIABLES",
    "NVARS",
    "Rat",
    "ExactMathError",
    "NotDivisibleError",
    "ZeroDivisorError",
    "BadReductionError",
    "ZeroDenominatorError",
    "BudgetExceededError",
    "ResidueInt",
    "SparsePoly",
    "LaurentElem",
    "QuadElem",
    "mod_reduce",
    "domain_div",
]

VARIABLES = ("alpha", "beta", "gamma", "delta", "s", "x1", "x2", "x3", "x4", "x5")
NVARS = len(VARIABLES)
VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}

# x1..x5 are the only variables allowed in Laurent denominators
_LAURENT_VARS = frozenset(range(5, 10))

_EXP_BITS = 24
_EXP_MASK = (1 << _EXP_BITS) - 1
_DEG_SHIFT = NVARS * _EXP_BITS
_MAX_EXP = 1 << (_EXP_BITS - 2)


class ExactMathError(Exception):
    """Base class for all exact-arithmetic failures."""


class NotDivisibleError(ExactMathError):
    """Exact division has a nonzero remainder."""


class ZeroDivisorError(ExactMathError):
    """A required divisor is zero.  Carries ``index`` when raised by an engine."""

    def __init__(self, message, index=None, partial=None):
        super().__init__(message)
        self.index = index
        self.partial = partial


class BadReductionError(ExactMathError):
    """A denominator vanishes modulo the reduction prime."""


class ZeroDenominatorError(ExactMathError):
    """Evaluation point hits a Laurent denominator."""


class BudgetExceededError(ExactMathError):
    """A symbolic computation outgrew the configured budget."""


Rat = Fraction


def _pack(exps):
    key = sum(exps) << _DEG_SHIFT
    for i, e in enumerate(exps):
        key |= e << ((NVARS - 1 - i) * _EXP_BITS)
    return key


def _unpack(key):
    return tuple((key >> ((NVARS - 1 - i) * _EXP_BITS)) & _EXP_MASK for i in range(NVARS))


_ZERO_KEY = 0


# ---------------------------------------------------------------------------
# residue rings


class ResidueInt:
    """An element of Z/mZ, stored reduced.  Mismatched moduli are errors."""

    __slots__ = ("modulus", "value")

    def __init__(self, value, modulus):
        modulus = int(modulus)
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", int(value) % modulus)

    def __setattr__(self, name, value):
        raise AttributeError("ResidueInt is immutable")

    def _coerce(self, other):
        if isinstance(other, ResidueInt):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other
        if isinstance(other, int):
            return ResidueInt(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ResidueInt(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ResidueInt(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ResidueInt(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ResidueInt(-self.value, self.modulus)

    def __pow__(self, n):
        if n < 0:
            return pow(self.inverse(), -n)
        return ResidueInt(pow(self.value, n, self.modulus), self.modulus)

    def inverse(self):
        try:
            inv = pow(self.value, -1, self.modulus)
        except ValueError:
            raise BadReductionError(
                f"{self.value} is not a unit modulo {self.modulus}") from None
        return ResidueInt(inv, self.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus
        return (isinstance(other, ResidueInt)
                and self.modulus == other.modulus and self.value == other.value)

    def __hash__(self):
        return hash((self.modulus, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ResidueInt({self.value}, mod {self.modulus})"

    def is_square(self):
        if self.value == 0:
            return True
        p = self.modulus
        return pow(self.value, (p - 1) // 2, p) == 1

    def sqrt(self):
        """A square root modulo a prime modulus (Tonelli-Shanks)."""
        p, a = self.modulus, self.value
        if a == 0:
            return ResidueInt(0, p)
        if not self.is_square():
            raise ValueError(f"{a} is not a square mod {p}")
        if p % 4 == 3:
            return ResidueInt(pow(a, (p + 1) // 4, p), p)
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return ResidueInt(r, p)


def mod_reduce(x, p):
    """Reduce a rational (or integer) modulo the prime ``p``.

    Raises :class:`BadReductionError` when ``p`` divides the denominator.
    """
    x = Fraction(x)
    if x.denominator % p == 0:
        raise BadReductionError(f"denominator {x.denominator} vanishes mod {p}")
    num = ResidueInt(x.numerator, p)
    if x.denominator == 1:
        return num
    return num * ResidueInt(x.denominator, p).inverse()


# ---------------------------------------------------------------------------
# sparse multivariate polynomials

# size thresholds switching to the Kronecker big-integer fast path
_KRON_MUL_PAIRS = 30_000
_KRON_MAX_SLOTS = 4_000_000


class SparsePoly:
    """Sparse multivariate polynomial over Z with graded-lex term order."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None, _internal=None):
        if _internal is not None:
            self._terms = _internal
            return
        data = {}
        if terms:
            for exps, coeff in terms.items():
                if not isinstance(coeff, int):
                    raise TypeError(f"coefficients must be int, got {type(coeff)}")
                if coeff == 0:
                    continue
                if len(exps) != NVARS:
                    raise ValueError(f"exponent vector must have length {NVARS}")
                if any(e < 0 or e > _MAX_EXP for e in exps):
                    raise ValueError(f"exponent out of range: {exps}")
                data[_pack(exps)] = coeff
        self._terms = data

    # -- constructors

    @classmethod
    def zero(cls):
        return cls(_internal={})

    @classmethod
    def const(cls, c):
        c = int(c)
        return cls(_internal={} if c == 0 else {_ZERO_KEY: c})

    @classmethod
    def variable(cls, name):
        exps = [0] * NVARS
        exps[VAR_INDEX[name]] = 1
        return cls(_internal={_pack(tuple(exps)): 1})

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls({tuple(exps): coeff})

    # -- inspection

    def terms(self):
        """Terms as ``(exponent_tuple, coeff)`` in descending graded-lex order."""
        return [(_unpack(k), c) for k, c in sorted(self._terms.items(), reverse=True)]

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and _ZERO_KEY in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self._terms.get(_ZERO_KEY, 0)

    def total_degree(self):
        if not self._terms:
            return 0
        return max(self._terms) >> _DEG_SHIFT

    def degrees(self):
        """Per-variable maximum exponents."""
        d = [0] * NVARS
        for k in self._terms:
            e = _unpack(k)
            for i in range(NVARS):
                if e[i] > d[i]:
                    d[i] = e[i]
        return tuple(d)

    def min_exponents(self):
        """Componentwise minimum exponent vector (the monomial content)."""
        it = iter(self._terms)
        try:
            m = list(_unpack(next(it)))
        except StopIteration:
            return (0,) * NVARS
        for k in it:
            e = _unpack(k)
            for i in range(NVARS):
                if e[i] < m[i]:
                    m[i] = e[i]
        return tuple(m)

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._terms)
        return _unpack(k), self._terms[k]

    def max_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0)

    # -- ring operations

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        r = dict(self._terms)
        get = r.get
        for k, c in other._terms.items():
            v = get(k, 0) + c
            if v:
                r[k] = v
            elif k in r:
                del r[k]
        return SparsePoly(_internal=r)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        r = dict(self._terms)
        get = r.get
        for k, c in other._terms.items():
            v = get(k, 0) - c
            if v:
                r[k] = v
            elif k in r:
                del r[k]
        return SparsePoly(_internal=r)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return SparsePoly(_internal={k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return SparsePoly.zero()
        if len(a) * len(b) >= _KRON_MUL_PAIRS:
            result = _kron_mul(self, other)
            if result is not None:
                return result
        if len(a) > len(b):
            a, b = b, a
        r = {}
        get = r.get
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                v = get(k, 0) + c1 * c2
                if v:
                    r[k] = v
                elif k in r:
                    del r[k]
        return SparsePoly(_internal=r)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # -- division

    def exact_div(self, den):
        """Exact quotient ``q`` with ``q * den == self``.

        Graded-lex leading-term reduction; raises :class:`NotDivisibleError`
        on the first irreducible leading term.  Large inputs go through a
        Kronecker-substitution fast path that produces the same (unique)
        quotient; the reduction loop remains the deciding algorithm whenever
        the fast path is inconclusive.
        """
        den = _coerce_poly(den)
        if den is NotImplemented:
            raise TypeError("cannot divide by this operand")
        if den.is_zero():
            raise ZeroDivisorError("division by zero polynomial")
        if self.is_zero():
            return SparsePoly.zero()
        if len(self._terms) * len(den._terms) >= _KRON_MUL_PAIRS:
            result = _kron_div(self, den)
            if result is not NotImplemented:
                if result is None:
                    raise NotDivisibleError("nonzero remainder")
                return result
        return self._classical_div(den)

    def _classical_div(self, den):
        r = dict(self._terms)
        lt_key = max(den._terms)
        lt_coeff = den._terms[lt_key]
        lt_exps = _unpack(lt_key)
        den_items = list(den._terms.items())
        q = {}
        while r:
            rk = max(r)
            re = _unpack(rk)
            if any(a < b for a, b in zip(re, lt_exps)):
                raise NotDivisibleError("irreducible leading term")
            qc, rem = divmod(r[rk], lt_coeff)
            if rem:
                raise NotDivisibleError("leading coefficient does not divide")
            qk = rk - lt_key
            q[qk] = qc
            get = r.get
            for k, c in den_items:
                kk = k + qk
                v = get(kk, 0) - c * qc
                if v:
                    r[kk] = v
                elif kk in r:
                    del r[kk]
        return SparsePoly(_internal=q)

    def divides(self, other):
        """True when ``self`` exactly divides ``other``."""
        try:
            other.exact_div(self)
        except NotDivisibleError:
            return False
        return True

    # -- evaluation & substitution

    def eval(self, assignment):
        """Exact rational value at ``{variable name: Fraction}``.

        Every variable occurring in the polynomial must be assigned.
        """
        total = Fraction(0)
        for exps, coeff in self._terms_unpacked():
            v = Fraction(coeff)
            for i, e in enumerate(exps):
                if e:
                    name = VARIABLES[i]
                    if name not in assignment:
                        raise ValueError(f"unassigned variable {name}")
                    v *= Fraction(assignment[name]) ** e
            total += v
        return total

    def _terms_unpacked(self):
        for k, c in self._terms.items():
            yield _unpack(k), c

    def subst(self, mapping):
        """Substitute variables by polynomials; unmapped variables persist."""
        out = SparsePoly.zero()
        for exps, coeff in self._terms_unpacked():
            term = SparsePoly.const(coeff)
            rest = [0] * NVARS
            for i, e in enumerate(exps):
                if not e:
                    continue
                name = VARIABLES[i]
                if name in mapping:
                    term = term * (_coerce_poly(mapping[name]) ** e)
                else:
                    rest[i] = e
            if any(rest):
                term = term * SparsePoly.monomial(tuple(rest))
            out = out + term
        return out

    def shift(self, exps):
        """Multiply by the monomial with the given exponent vector."""
        k0 = _pack(tuple(exps))
        return SparsePoly(_internal={k + k0: c for k, c in self._terms.items()})

    def unshift(self, exps):
        """Divide by a monomial known to divide every term."""
        k0 = _pack(tuple(exps))
        return SparsePoly(_internal={k - k0: c for k, c in self._terms.items()})

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, coeff in self.terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(VARIABLES[i])
                elif e > 1:
                    factors.append(f"{VARIABLES[i]}^{e}")
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _coerce_poly(x):
    if isinstance(x, SparsePoly):
        return x
    if isinstance(x, int):
        return SparsePoly.const(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# Kronecker substitution fast path
#
# A polynomial is packed into one big integer by evaluating each variable at
# a power of 2**L (mixed radix over tight per-variable degree bounds); GMP
# then multiplies or divides the integers.  Balanced L-bit limbs make the
# decoding unique for coefficients below 2**(L-1) in absolute value.


def _kron_layout(polys, dims):
    strides = []
    s = 1
    for d in dims:
        strides.append(s)
        s *= d
    return strides, s


def _kron_active(*polys):
    act = set()
    for p in polys:
        degs = p.degrees()
        for i in range(NVARS):
            if degs[i]:
                act.add(i)
    return sorted(act)


def _kron_encode(poly, vs, strides, limb_bytes, total):
    bpos = bytearray(total * limb_bytes)
    bneg = bytearray(total * limb_bytes)
    any_neg = False
    for k, c in poly._terms.items():
        e = _unpack(k)
        pos = 0
        for j, i in enumerate(vs):
            pos += e[i] * strides[j]
        off = pos * limb_bytes
        if c >= 0:
            bpos[off:off + limb_bytes] = c.to_bytes(limb_bytes, "little")
        else:
            any_neg = True
            bneg[off:off + limb_bytes] = (-c).to_bytes(limb_bytes, "little")
    n = gmpy2.mpz(int.from_bytes(bytes(bpos), "little"))
    if any_neg:
        n -= gmpy2.mpz(int.from_bytes(bytes(bneg), "little"))
    return n


def _kron_decode(n, vs, dims, limb_bits, total):
    neg = n < 0
    raw = int(-n if neg else n)
    limb_bytes = limb_bits // 8
    buf = raw.to_bytes((raw.bit_length() + 7) // 8 + limb_bytes + 1, "little")
    mask = (1 << limb_bits) - 1
    half = 1 << (limb_bits - 1)
    coeffs = []
    carry = 0
    for pos in range(total):
        chunk = int.from_bytes(buf[pos * limb_bytes:(pos + 1) * limb_bytes], "little") + carry
        c = chunk & mask
        carry = chunk >> limb_bits
        if c >= half:
            c -= 1 << limb_bits
            carry += 1
    # a residual carry means the limb size was too small
        coeffs.append(c)
    if carry:
        return None
    out = {}
    for pos, c in enumerate(coeffs):
        if not c:
            continue
        rem = pos
        e = [0] * NVARS
        for j, d in enumerate(dims):
            e[vs[j]] = rem % d
            rem //= d
        out[_pack(tuple(e))] = -c if neg else c
    return SparsePoly(_internal=out)


def _kron_mul(a, b):
    """Kronecker product, or None when the dense layout is too large."""
    vs = _kron_active(a, b)
    da, db = a.degrees(), b.degrees()
    dims = [da[i] + db[i] + 1 for i in vs]
    strides, total = _kron_layout((a, b), dims)
    if total > _KRON_MAX_SLOTS:
        return None
    limb_bits = (a.max_coeff().bit_length() + b.max_coeff().bit_length()
                 + min(len(a), len(b)).bit_length() + 8)
    limb_bits = ((limb_bits + 7) // 8) * 8
    limb_bytes = limb_bits // 8
    na = _kron_encode(a, vs, strides, limb_bytes, total)
    nb = _kron_encode(b, vs, strides, limb_bytes, total)
    return _kron_decode(na * nb, vs, dims, limb_bits, total)


def _kron_div(num, den):
    """Kronecker exact division.

    Returns the quotient, ``None`` when provably not divisible, or
    ``NotImplemented`` when inconclusive (caller falls back to the
    classical reduction loop).
    """
    vs = _kron_active(num, den)
    dn = num.degrees()
    dims = [dn[i] + 1 for i in vs]
    strides, total = _kron_layout((num, den), dims)
    if total > _KRON_MAX_SLOTS:
        return NotImplemented
    limb_bits = num.max_coeff().bit_length() + den.max_coeff().bit_length() + 32
    limb_bits = ((limb_bits + 7) // 8) * 8
    for _ in range(3):
        limb_bytes = limb_bits // 8
        nn = _kron_encode(num, vs, strides, limb_bytes, total)
        nd = _kron_encode(den, vs, strides, limb_bytes, total)
        q, r = gmpy2.t_divmod(nn, nd)
        if r != 0:
            # the substitution is a ring homomorphism, so a nonzero integer
            # remainder rules out polynomial divisibility outright
            return None
        qp = _kron_decode(q, vs, dims, limb_bits, total)
        if qp is not None and qp * den == num:
            return qp
        limb_bits *= 2
    return NotImplemented


# ---------------------------------------------------------------------------
# Laurent elements


class LaurentElem:
    """``num / monomial`` with the monomial restricted to x1..x5.

    Normalized so that the numerator shares no monomial factor with the
    denominator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _coerce_poly(num)
        den = tuple(den) if den is not None else (0,) * NVARS
        if len(den) != NVARS or any(e < 0 for e in den):
            raise ValueError("denominator must be a nonnegative exponent vector")
        if any(den[i] for i in range(NVARS) if i not in _LAURENT_VARS):
            raise ValueError("Laurent denominators may involve x1..x5 only")
        if not num.is_zero():
            m = num.min_exponents()
            cancel = tuple(min(m[i], den[i]) for i in range(NVARS))
            if any(cancel):
                num = num.unshift(cancel)
                den = tuple(d - c for d, c in zip(den, cancel))
        else:
            den = (0,) * NVARS
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentElem is immutable")

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    def is_zero(self):
        return self.num.is_zero()

    def _common(self, other):
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        lift_s = tuple(d - a for d, a in zip(den, self.den))
        lift_o = tuple(d - b for d, b in zip(den, other.den))
        return den, self.num.shift(lift_s), other.num.shift(lift_o)

    def _coerce(self, other):
        if isinstance(other, LaurentElem):
            return other
        p = _coerce_poly(other)
        if p is NotImplemented:
            return NotImplemented
        return LaurentElem(p)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        den, a, b = self._common(other)
        return LaurentElem(a + b, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        den, a, b = self._common(other)
        return LaurentElem(a - b, den)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return LaurentElem(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return LaurentElem(self.num * other.num,
                           tuple(a + b for a, b in zip(self.den, other.den)))

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def laurent_div(self, other):
        """Exact Laurent quotient.

        Clears monomial denominators, splits the divisor's monomial content
        into the result denominator, and performs polynomial exact division
        by the remaining primitive part.  A failure signals a violation of
        the Laurent property and raises :class:`NotDivisibleError`.
        """
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot divide by this operand")
        if other.num.is_zero():
            raise ZeroDivisorError("division by zero Laurent element")
        # (n1/d1) / (n2/d2) = n1 * d2 / (d1 * n2); split n2 = m * prim
        m = other.num.min_exponents()
        prim = other.num.unshift(m) if any(m) else other.num
        num = self.num.shift(other.den)
        if any(e and i not in _LAURENT_VARS for i, e in enumerate(m)):
            # monomial content outside x1..x5 must divide the numerator exactly
            outside = tuple(e if i not in _LAURENT_VARS else 0 for i, e in enumerate(m))
            nm = num.min_exponents()
            if any(a < b for a, b in zip(nm, outside)):
                raise NotDivisibleError("denominator content outside x1..x5")
            num = num.unshift(outside)
            m = tuple(e if i in _LAURENT_VARS else 0 for i, e in enumerate(m))
        q = num.exact_div(prim)
        den = tuple(a + b for a, b in zip(self.den, m))
        return LaurentElem(q, den)

    def eval(self, assignment):
        den_val = Fraction(1)
        for i, e in enumerate(self.den):
            if e:
                name = VARIABLES[i]
                if name not in assignment:
                    raise ValueError(f"unassigned variable {name}")
                v = Fraction(assignment[name])
                if v == 0:
                    raise ZeroDenominatorError(f"{name} = 0 hits the denominator")
                den_val *= v ** e
        return self.num.eval(assignment) / den_val

    def subst(self, mapping):
        """Substitute variables by Laurent elements (or polynomials)."""
        out = LaurentElem(SparsePoly.zero())
        for exps, coeff in self.num._terms_unpacked():
            term = LaurentElem(SparsePoly.const(coeff))
            rest = [0] * NVARS
            for i, e in enumerate(exps):
                if not e:
                    continue
                name = VARIABLES[i]
                if name in mapping:
                    rep = self._coerce(mapping[name])
                    for _ in range(e):
                        term = term * rep
                else:
                    rest[i] = e
            if any(rest):
                term = term * LaurentElem(SparsePoly.monomial(tuple(rest)))
            out = out + term
        inv_den = [0] * NVARS
        for i, e in enumerate(self.den):
            if not e:
                continue
            name = VARIABLES[i]
            if name in mapping:
                rep = self._coerce(mapping[name])
                for _ in range(e):
                    out = out.laurent_div(rep)
            else:
                inv_den[i] = e
        if any(inv_den):
            out = LaurentElem(out.num, tuple(a + b for a, b in zip(out.den, inv_den)))
        return out

    def __repr__(self):
        if not any(self.den):
            return repr(self.num)
        factors = []
        for i, e in enumerate(self.den):
            if e == 1:
                factors.append(VARIABLES[i])
            elif e > 1:
                factors.append(f"{VARIABLES[i]}^{e}")
        return f"({self.num!r}) / ({'*'.join(factors)})"


# ---------------------------------------------------------------------------
# quadratic extensions


def _base_div(num, den):
    """Exact division in whatever base ring the operands live in."""
    if isinstance(den, SparsePoly) or isinstance(num, SparsePoly):
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        return num.exact_div(den)
    if isinstance(den, LaurentElem) or isinstance(num, LaurentElem):
        if not isinstance(num, LaurentElem):
            num = LaurentElem(_coerce_poly(num))
        if not isinstance(den, LaurentElem):
            den = LaurentElem(_coerce_poly(den))
        return num.laurent_div(den)
    if isinstance(num, int) and isinstance(den, int):
        if den == 0:
            raise ZeroDivisorError("integer division by zero")
        q, r = divmod(num, den)
        if r:
            raise NotDivisibleError(f"{den} does not divide {num}")
        return q
    if den == 0:
        raise ZeroDivisorError("division by zero")
    return num / den


class QuadElem:
    """``a + b * sqrt(d)`` over a base ring, with ``(sqrt(d))**2 = d``.

    The base may be :class:`SparsePoly`, :class:`~fractions.Fraction`,
    :class:`ResidueInt`, or plain ``int``; equality is componentwise, which
    is exact whenever ``d`` is not a square in the base ring.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    def _lift(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise ValueError("mismatched adjoined square roots")
            return other
        zero = self.a - self.a
        return QuadElem(other + zero, zero, self.d)

    def __add__(self, other):
        other = self._lift(other)
        return QuadElem(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return QuadElem(self.a - other.a, self.b - other.b, self.d)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __mul__(self, other):
        other = self._lift(other)
        return QuadElem(self.a * other.a + self.d * (self.b * other.b),
                        self.a * other.b + self.b * other.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadElem(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.d * (self.b * self.b)

    def is_zero(self):
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            other = self._lift(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def exact_div(self, other):
        """Exact quotient via the conjugate: ``x / y = x * conj(y) / norm(y)``."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisorError("division by zero quadratic element")
        if not other.b:
            return QuadElem(_base_div(self.a, other.a),
                            _base_div(self.b, other.a), self.d)
        num = self * other.conjugate()
        nrm = other.norm()
        return QuadElem(_base_div(num.a, nrm), _base_div(num.b, nrm), self.d)

    def __truediv__(self, other):
        if not isinstance(other, QuadElem):
            other = self._lift(other)
        return self.exact_div(other)

    def __repr__(self):
        return f"({self.a!r}) + ({self.b!r})*sqrt({self.d!r})"


# ---------------------------------------------------------------------------
# generic exact division across all supported domains


def domain_div(num, den):
    """Exact division dispatching on the operand types.

    Raises :class:`NotDivisibleError` or :class:`ZeroDivisorError`;
    :class:`BadReductionError` for non-unit residue divisors.
    """
    if isinstance(num, QuadElem) or isinstance(den, QuadElem):
        if not isinstance(num, QuadElem):
            num = den._lift(num)
        return num.exact_div(den)
    if isinstance(num, ResidueInt) or isinstance(den, ResidueInt):
        return num / den
    if isinstance(num, Fraction) or isinstance(den, Fraction):
        if den == 0:
            raise ZeroDivisorError("division by zero")
        return Fraction(num) / Fraction(den)
    return _base_div(num, den)
