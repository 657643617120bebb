"""Elliptic divisibility sequences and the companion constructions.

An EDS window satisfies, for all m >= n >= 1, the recurrence family

    a[m+n]*a[m-n] = a[n]^2*a[m-1]*a[m+1] - a[n-1]*a[n+1]*a[m]^2        (for)

whose n = 2 member is the special Somos-4 recurrence used for generation:

    a[m+2]*a[m-2] = a2^2*a[m+1]*a[m-1] - a1*a3*a[m]^2                  (eds)

The companion EDS for Somos-4 adjoins sqrt(alpha); the Somos-5 companion
uses the alternating coefficients h_even = 2*alpha + beta,
h_odd = alpha + 1 (one companion per parity of m + n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactring import (
    LaurentElem,
    NotDivisibleError,
    QuadElem,
    SparsePoly,
    ZeroDivisorError,
    domain_div,
)
from .somos import SeqWindow, SomosSpec, extend as somos_extend, poly_unit_spec, unit_spec

__all__ = [
    "EdsSpec",
    "EdsWindow",
    "CompanionPair",
    "FamilyReport",
    "eds_extend",
    "is_proper",
    "verify_family_for",
    "verify_family_fora2",
    "companion4",
    "companion5",
    "verify_companion",
    "h_coefficients",
]


@dataclass(frozen=True)
class EdsSpec:
    """EDS initial data a1..a4 plus the recurrence coefficient rule.

    The default rule is the constant pair (a2^2, -a1*a3) from (eds); the
    Somos-5 companion instead supplies alternating coefficients through
    ``h_pair`` (h at even step offset, h at odd) with ``parity`` fixing the
    phase, and the constant second coefficient ``minus_alpha``.
    """

    a1: object
    a2: object
    a3: object
    a4: object
    h_pair: tuple = None          # (h_even, h_odd) for index-dependent rule
    parity: int = 0
    minus_alpha: object = None    # second coefficient when h_pair is given

    def coefficients(self, m):
        """(c1, c2) with a[m+2]*a[m-2] = c1*a[m+1]*a[m-1] + c2*a[m]^2."""
        if self.h_pair is None:
            return self.a2 * self.a2, -(self.a1 * self.a3)
        return self.h_pair[(self.parity + m) % 2], self.minus_alpha

    @property
    def initials(self):
        return (self.a1, self.a2, self.a3, self.a4)


class EdsWindow:
    """Terms a[n] for n in lo..hi; a[0] = 0 and a[-n] = -a[n] by construction."""

    __slots__ = ("lo", "hi", "_terms")

    def __init__(self, lo, hi, terms):
        if len(terms) != hi - lo + 1:
            raise ValueError("terms length does not match index range")
        self.lo = lo
        self.hi = hi
        self._terms = tuple(terms)

    def __getitem__(self, n):
        if not self.lo <= n <= self.hi:
            raise IndexError(f"index {n} outside window {self.lo}..{self.hi}")
        return self._terms[n - self.lo]

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def indices(self):
        return range(self.lo, self.hi + 1)

    @property
    def terms(self):
        return self._terms


@dataclass(frozen=True)
class CompanionPair:
    """A Somos window tau with its companion EDS window a."""

    tau: SeqWindow
    a: EdsWindow
    k: int
    sqrt_tag: object  # the adjoined square (alpha, or h for Somos-5)
    parity: int = 0


@dataclass
class FamilyReport:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _is_zero(x):
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def eds_extend(spec, lo, hi):
    """Extend the EDS forward to hi and backward to lo.

    Negative indices come from a[0] = 0 and the antisymmetry a[-n] = -a[n]
    (the recurrence itself cannot cross the zero at index 0).
    """
    if hi < 4:
        raise ValueError("window must reach index 4")
    terms = {1: spec.a1, 2: spec.a2, 3: spec.a3, 4: spec.a4}
    need = max(hi, -lo)
    for m in range(3, need - 1):
        # solves for a[m+2]
        div = terms[m - 2]
        if _is_zero(div):
            raise ZeroDivisorError(
                f"zero divisor a[{m - 2}] while computing a[{m + 2}]", index=m + 2)
        c1, c2 = spec.coefficients(m)
        num = c1 * terms[m + 1] * terms[m - 1] + c2 * terms[m] * terms[m]
        try:
            terms[m + 2] = domain_div(num, div)
        except NotDivisibleError as exc:
            raise NotDivisibleError(
                f"inexact EDS division at index {m + 2}: {exc}") from exc
    zero = spec.a1 - spec.a1
    terms[0] = zero
    for n in range(1, -lo + 1):
        terms[-n] = -terms[n]
    return EdsWindow(lo, hi, tuple(terms[i] for i in range(lo, hi + 1)))


def is_proper(spec):
    """Properness of the initial values plus the integrality criterion a2 | a4.

    Requires a1 = 1, a2^2 + a3^2 != 0, and a2 | a4 over the integers.
    """
    a1, a2, a3, a4 = spec.initials
    if a1 != 1:
        return False
    if a2 * a2 + a3 * a3 == 0:
        return False
    if a2 == 0 or a4 % a2 != 0:
        return False
    return True


def verify_family_for(a, m_range, n_range):
    """Check a[m+n]*a[m-n] = a[n]^2*a[m-1]*a[m+1] - a[n-1]*a[n+1]*a[m]^2."""
    report = FamilyReport(name="for")
    for m in m_range:
        for n in n_range:
            if n > m:
                continue
            needed = (m + n, m - n, n - 1, n, n + 1, m - 1, m, m + 1)
            if not all(i in a for i in needed):
                continue
            lhs = a[m + n] * a[m - n]
            rhs = (a[n] * a[n] * a[m - 1] * a[m + 1]
                   - a[n - 1] * a[n + 1] * a[m] * a[m])
            report.checked += 1
            if not _is_zero(lhs - rhs):
                report.violations.append((m, n))
    return report


def verify_family_fora2(a, m_range, n_range):
    """Check a1*a2*a[m+n+1]*a[m-n] = a[n]*a[m-1]*a[n+1]*a[m+2] - a[n-1]*a[m]*a[n+2]*a[m+1]."""
    report = FamilyReport(name="fora2")
    a1, a2 = a[1], a[2]
    for m in m_range:
        for n in n_range:
            if n > m:
                continue
            needed = (m + n + 1, m - n, n - 1, n, n + 1, n + 2, m - 1, m, m + 1, m + 2)
            if not all(i in a for i in needed):
                continue
            lhs = a1 * a2 * a[m + n + 1] * a[m - n]
            rhs = (a[n] * a[m - 1] * a[n + 1] * a[m + 2]
                   - a[n - 1] * a[m] * a[n + 2] * a[m + 1])
            report.checked += 1
            if not _is_zero(lhs - rhs):
                report.violations.append((m, n))
    return report


# ---------------------------------------------------------------------------
# companion constructions


def _sqrt_exact(x):
    """Exact square root of a nonnegative Fraction, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def companion4(alpha, beta, hi, tau_window=None):
    """Companion EDS for Somos-4 with unit initials.

    Initials a1 = 1, a2 = -sqrt(alpha), a3 = -beta, a4 = sqrt(alpha)*I with
    I = (alpha + beta)^2 + beta; the companion satisfies the same Somos-4
    recurrence as tau.  Symbolic alpha adjoins a formal sqrt(alpha)
    (QuadElem over polynomials); numeric alpha uses the exact root when it
    is a perfect square and a QuadElem over the rationals otherwise.
    """
    symbolic = isinstance(alpha, SparsePoly)
    if symbolic:
        one = SparsePoly.const(1)
        inv = (alpha + beta) * (alpha + beta) + beta
        root = QuadElem(SparsePoly.zero(), one, alpha)  # sqrt(alpha)

        def lift(p):
            return QuadElem(p, SparsePoly.zero(), alpha)

        a1 = lift(one)
        a2 = -root
        a3 = lift(-beta)
        a4 = root * lift(inv)
        al, be = lift(alpha), lift(beta)
        if tau_window is None:
            tau_window = somos_extend(poly_unit_spec(4), 1, hi + 1)
        tau = SeqWindow(tau_window.lo, tau_window.hi,
                        tuple(lift(t) for t in tau_window.terms))
        sqrt_tag = alpha
    else:
        alpha = Fraction(alpha)
        beta = Fraction(beta)
        inv = (alpha + beta) ** 2 + beta
        exact = _sqrt_exact(alpha)
        if exact is not None:
            root = exact
            a1, a2, a3, a4 = Fraction(1), -root, -beta, root * inv
            al, be = alpha, beta

            def lift(v):
                return Fraction(v)
        else:
            zero = Fraction(0)

            def lift(v):
                return QuadElem(Fraction(v), zero, alpha)

            root = QuadElem(zero, Fraction(1), alpha)
            a1 = lift(1)
            a2 = -root
            a3 = lift(-beta)
            a4 = root * lift(inv)
            al, be = lift(alpha), lift(beta)
        if tau_window is None:
            tau_window = somos_extend(
                SomosSpec(k=4, alpha=alpha, beta=beta,
                          initials=(Fraction(1),) * 4, ring="rat"), 1, hi + 1)
        tau = SeqWindow(tau_window.lo, tau_window.hi,
                        tuple(lift(t) for t in tau_window.terms))
        sqrt_tag = alpha
    spec = EdsSpec(a1=a1, a2=a2, a3=a3, a4=a4)
    # same recurrence as tau: coefficients (alpha, beta); a2^2 = alpha and
    # -a1*a3 = beta hold by construction, so the default rule applies
    a = eds_extend(spec, 0, hi)
    return CompanionPair(tau=tau, a=a, k=4, sqrt_tag=sqrt_tag)


def h_coefficients(alpha, beta):
    """(h_even, h_odd) = (2*alpha + beta, alpha + 1)."""
    one = SparsePoly.const(1) if isinstance(alpha, SparsePoly) else 1
    return (alpha + alpha + beta, alpha + one)


def companion5(alpha, beta, parity, hi, tau_window=None):
    """Companion EDS for Somos-5 with unit initials, for one parity of m+n.

    a1 = 1, a2 = sqrt(h), a3 = alpha, a4 = -beta*a2 where h = h_{parity},
    extended by a[k+2]*a[k-2] = h_{parity+k}*a[k+1]*a[k-1] - alpha*a[k]^2.
    """
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    symbolic = isinstance(alpha, SparsePoly)
    h_even, h_odd = h_coefficients(alpha, beta)
    h = (h_even, h_odd)[parity]
    if symbolic:
        zero = SparsePoly.zero()

        def lift(p):
            return QuadElem(p, zero, h)

        root = QuadElem(zero, SparsePoly.const(1), h)
        al = lift(alpha)
    else:
        alpha = Fraction(alpha)
        beta = Fraction(beta)
        h = Fraction(h)
        exact = _sqrt_exact(h)
        if exact is not None:
            root = exact

            def lift(v):
                return Fraction(v)
        else:
            zero = Fraction(0)

            def lift(v):
                return QuadElem(Fraction(v), zero, h)

            root = QuadElem(zero, Fraction(1), h)
        al = lift(alpha)
    a1 = lift(1) if not symbolic else lift(SparsePoly.const(1))
    a2 = root
    a3 = al
    a4 = -(lift(beta) * root)
    h_pair = (lift(h_coefficients(alpha, beta)[0]), lift(h_coefficients(alpha, beta)[1]))
    spec = EdsSpec(a1=a1, a2=a2, a3=a3, a4=a4,
                   h_pair=h_pair, parity=parity, minus_alpha=-al)
    a = eds_extend(spec, 0, hi)
    if tau_window is None:
        if symbolic:
            tau_window = somos_extend(poly_unit_spec(5), 1, hi + 2)
        else:
            tau_window = somos_extend(
                SomosSpec(k=5, alpha=alpha, beta=beta,
                          initials=(Fraction(1),) * 5, ring="rat"), 1, hi + 2)
    tau = SeqWindow(tau_window.lo, tau_window.hi,
                    tuple(lift(t) for t in tau_window.terms))
    return CompanionPair(tau=tau, a=a, k=5, sqrt_tag=h, parity=parity)


def verify_companion(pair, m_range, n_range, pair_other=None):
    """Check the identity families (for1) and (for2) on the (m, n) grid.

    (for1): tau[m+n]*tau[m-n] = a[n]^2*tau[m-1]*tau[m+1] - a[n-1]*a[n+1]*tau[m]^2
    (for2): a1*a2*tau[m+n+1]*tau[m-n]
                = a[n]*tau[m-1]*a[n+1]*tau[m+2] - a[n-1]*tau[m]*a[n+2]*tau[m+1]

    For Somos-5 the companion of parity (m+n) mod 2 serves each (for1)
    instance and parity (m+n+1) mod 2 each (for2) instance; pass the second
    companion as ``pair_other``.  All square-root factors combine so both
    sides agree componentwise as quadratic-extension elements.
    """
    rep1 = FamilyReport(name="for1")
    rep2 = FamilyReport(name="for2")

    def select(parity_needed):
        if pair.k == 4 or pair_other is None:
            return pair
        if parity_needed % 2 == pair.parity:
            return pair
        return pair_other

    for m in m_range:
        for n in n_range:
            if n > m:
                continue
            p1 = select(m + n)
            # each companion lifts tau into its own quadratic extension
            a, tau = p1.a, p1.tau
            if all(i in a for i in (n - 1, n, n + 1)) and all(
                    i in tau for i in (m + n, m - n, m - 1, m, m + 1)):
                lhs = tau[m + n] * tau[m - n]
                rhs = (a[n] * a[n] * tau[m - 1] * tau[m + 1]
                       - a[n - 1] * a[n + 1] * tau[m] * tau[m])
                rep1.checked += 1
                if not _is_zero(lhs - rhs):
                    rep1.violations.append((m, n))
            p2 = select(m + n + 1)
            a, tau = p2.a, p2.tau
            if all(i in a for i in (n - 1, n, n + 1, n + 2)) and all(
                    i in tau for i in (m + n + 1, m - n, m - 1, m, m + 1, m + 2)):
                lhs = a[1] * a[2] * tau[m + n + 1] * tau[m - n]
                rhs = (a[n] * tau[m - 1] * a[n + 1] * tau[m + 2]
                       - a[n - 1] * tau[m] * a[n + 2] * tau[m + 1])
                rep2.checked += 1
                if not _is_zero(lhs - rhs):
                    rep2.violations.append((m, n))
    return rep1, rep2
