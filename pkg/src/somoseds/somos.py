"""Bidirectional Somos-k engine over any exact coefficient domain.

The recurrence is

    tau[n+k-2] * tau[n-2] = alpha * tau[n+k-3] * tau[n-1] + beta * tau[n+k-4] * tau[n]

indexed over all of Z.  Forward steps solve for the highest term, backward
steps for the lowest; every division must be exact in the chosen domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactring import (
    BudgetExceededError,
    LaurentElem,
    NotDivisibleError,
    Rat,
    ResidueInt,
    SparsePoly,
    ZeroDivisorError,
    domain_div,
)

__all__ = [
    "SomosSpec",
    "SeqWindow",
    "InvariantValue",
    "DegenerateExponents",
    "TransformReport",
    "SymmetryReport",
    "extend",
    "reflected_window",
    "invariants4",
    "invariants5",
    "symmetry_check",
    "period_mod",
    "degenerate_exponents",
    "verify_transform",
    "unit_spec",
    "laurent_spec",
    "poly_unit_spec",
]

DEFAULT_SYMBOLIC_BUDGET = 24

RING_TAGS = ("int", "rat", "residue", "poly", "laurent")


@dataclass(frozen=True)
class SomosSpec:
    """One recurrence instance: order k, coefficients, and k initial terms."""

    k: int
    alpha: object
    beta: object
    initials: tuple
    ring: str = "int"

    def __post_init__(self):
        if self.k < 4:
            raise ValueError("Somos-k requires k >= 4")
        if len(self.initials) != self.k:
            raise ValueError(f"need exactly {self.k} initial terms")
        if self.ring.split("(")[0] not in RING_TAGS:
            raise ValueError(f"unknown ring tag {self.ring!r}")
        object.__setattr__(self, "initials", tuple(self.initials))


@dataclass(frozen=True)
class SeqWindow:
    """Terms for indices lo..hi inclusive (indices range over Z)."""

    lo: int
    hi: int
    terms: tuple

    def __post_init__(self):
        if len(self.terms) != self.hi - self.lo + 1:
            raise ValueError("terms length does not match index range")

    def __getitem__(self, n):
        if not self.lo <= n <= self.hi:
            raise IndexError(f"index {n} outside window {self.lo}..{self.hi}")
        return self.terms[n - self.lo]

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def indices(self):
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class InvariantValue:
    """Conserved quantities: (T, I) for Somos-4, (S, J) for Somos-5."""

    T: object = None
    I: object = None  # noqa: E741 - conventional name for this invariant
    S: object = None
    J: object = None


@dataclass(frozen=True)
class DegenerateExponents:
    which: str  # "alpha_zero" or "beta_zero"
    exponents: tuple  # indexed from 1


@dataclass
class SymmetryReport:
    center2: int  # twice the symmetry center (k+1 for unit initials)
    checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


@dataclass
class TransformReport:
    kind: str
    n_max: int
    per_n: dict = field(default_factory=dict)  # n -> bool

    @property
    def ok(self):
        return all(self.per_n.values())


def _is_zero(x):
    if isinstance(x, (SparsePoly, LaurentElem)):
        return x.is_zero()
    if isinstance(x, ResidueInt):
        return x.value == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _budget_check(value, budget):
    if budget is None:
        return
    if isinstance(value, SparsePoly):
        size = len(value)
    elif isinstance(value, LaurentElem):
        size = len(value.num)
    else:
        return
    if size > budget:
        raise BudgetExceededError(
            f"symbolic term has {size} monomials (budget {budget})")


def extend(spec, lo, hi, term_budget=None):
    """Compute the window lo..hi of the sequence.

    ``lo <= 1`` and ``hi >= k`` so the window always covers the initials.
    A zero divisor aborts with :class:`ZeroDivisorError` carrying the
    offending index and the partial window computed so far.
    ``term_budget`` caps the monomial count of any symbolic term.
    """
    k = spec.k
    if lo > 1 or hi < k:
        raise ValueError("window must cover the initial indices 1..k")
    alpha, beta = spec.alpha, spec.beta
    terms = {i + 1: v for i, v in enumerate(spec.initials)}
    # forward: tau[n+k-2] = (alpha*tau[n+k-3]*tau[n-1] + beta*tau[n+k-4]*tau[n]) / tau[n-2]
    for m in range(k + 1, hi + 1):
        n = m - k + 2
        div = terms[n - 2]
        if _is_zero(div):
            raise ZeroDivisorError(
                f"zero divisor tau[{n - 2}] while computing tau[{m}]",
                index=m, partial=_partial(terms, lo, hi))
        num = alpha * terms[m - 1] * terms[n - 1] + beta * terms[m - 2] * terms[n]
        terms[m] = _engine_div(num, div, m)
        _budget_check(terms[m], term_budget)
    # backward: tau[n-2] = (alpha*tau[n+k-3]*tau[n-1] + beta*tau[n+k-4]*tau[n]) / tau[n+k-2]
    for m in range(0, lo - 1, -1):
        n = m + 2
        div = terms[n + k - 2]
        if _is_zero(div):
            raise ZeroDivisorError(
                f"zero divisor tau[{n + k - 2}] while computing tau[{m}]",
                index=m, partial=_partial(terms, lo, hi))
        num = alpha * terms[n + k - 3] * terms[n - 1] + beta * terms[n + k - 4] * terms[n]
        terms[m] = _engine_div(num, div, m)
        _budget_check(terms[m], term_budget)
    return SeqWindow(lo, hi, tuple(terms[i] for i in range(lo, hi + 1)))


def _engine_div(num, div, index):
    try:
        return domain_div(num, div)
    except NotDivisibleError as exc:
        raise NotDivisibleError(
            f"inexact division at index {index}: {exc}") from exc


def _partial(terms, lo, hi):
    idx = sorted(i for i in terms if lo <= i <= hi)
    runs = [i for i in idx]
    if not runs:
        return None
    lo2, hi2 = runs[0], runs[-1]
    if all(i in terms for i in range(lo2, hi2 + 1)):
        return SeqWindow(lo2, hi2, tuple(terms[i] for i in range(lo2, hi2 + 1)))
    return None


def recurrence_residual(spec, window, n):
    """tau[n+k-2]*tau[n-2] - alpha*tau[n+k-3]*tau[n-1] - beta*tau[n+k-4]*tau[n]."""
    k = spec.k
    return (window[n + k - 2] * window[n - 2]
            - spec.alpha * window[n + k - 3] * window[n - 1]
            - spec.beta * window[n + k - 4] * window[n])


def reflected_window(spec, hi, sign_rule):
    """Window -hi..hi built from a forward run plus a reflection rule.

    ``sign_rule(n)`` gives the sign of ``tau[-n]`` relative to ``tau[n]``.
    Used when backward extension crosses a zero term (e.g. the Fibonacci
    extension, where ``tau[0] = 0`` blocks the recurrence); every recurrence
    instance in the result is verified exactly, so the reflected window is a
    certified solution, not a guess.
    """
    fwd = extend(spec, 1, hi)
    k = spec.k
    terms = {n: fwd[n] for n in range(1, hi + 1)}
    # tau[0] and below from the reflection rule; tau[0] must be consistent
    zero = terms[1] - terms[1]
    terms[0] = zero if sign_rule(0) != 1 else terms.get(0, zero)
    for n in range(1, hi + 1):
        terms[-n] = sign_rule(n) * terms[n]
    window = SeqWindow(-hi, hi, tuple(terms[i] for i in range(-hi, hi + 1)))
    for n in range(-hi + 2, hi - k + 3):
        if not _is_zero(recurrence_residual(spec, window, n)):
            raise ValueError(f"reflection rule violates the recurrence at n={n}")
    return window


# ---------------------------------------------------------------------------
# invariants


def invariants4(spec, window, at):
    """T and I from the four consecutive terms starting at ``at`` (k = 4)."""
    if spec.k != 4:
        raise ValueError("invariants4 requires k = 4")
    t1, t2, t3, t4 = (window[at + i] for i in range(4))
    for i, t in enumerate((t1, t2, t3, t4)):
        if _is_zero(t):
            raise ZeroDivisorError(f"zero term tau[{at + i}]", index=at + i)
    alpha, beta = spec.alpha, spec.beta
    num = (t1 * t1 * t4 * t4
           + alpha * (t2 * t2 * t2 * t4 + t1 * t3 * t3 * t3)
           + beta * (t2 * t2 * t3 * t3))
    den = t1 * t2 * t3 * t4
    T = domain_div(num, den)
    return InvariantValue(T=T, I=alpha * alpha + beta * T)


def invariants5(spec, window, at):
    """S and J from the five consecutive terms starting at ``at`` (k = 5)."""
    if spec.k != 5:
        raise ValueError("invariants5 requires k = 5")
    t1, t2, t3, t4, t5 = (window[at + i] for i in range(5))
    for i, t in enumerate((t1, t2, t3, t4, t5)):
        if _is_zero(t):
            raise ZeroDivisorError(f"zero term tau[{at + i}]", index=at + i)
    alpha, beta = spec.alpha, spec.beta
    num = ((t1 * t5 + alpha * t3 * t3) * (t1 * t4 * t4 + t2 * t2 * t5)
           + beta * (t2 * t3 * t3 * t3 * t4))
    den = t1 * t2 * t3 * t4 * t5
    S = domain_div(num, den)
    return InvariantValue(S=S, J=beta + alpha * S)


# ---------------------------------------------------------------------------
# symmetry


def symmetry_check(spec, window, fibonacci=False):
    """Verify the palindromic symmetry of unit-initial windows.

    For initials 1,...,1 the center is c = (k+1)/2 and tau[c+n] = tau[c-n];
    since k+1 may be odd, the check is phrased on 2c = k+1:
    tau[m] = tau[k+1-m] for all representable pairs.  With ``fibonacci``
    the alternative rule tau[n] = (-1)**(n+1) * tau[-n] is checked instead.
    """
    report = SymmetryReport(center2=spec.k + 1, checked=0)
    if fibonacci:
        n = 1
        while n in window and -n in window:
            expected = window[n] if n % 2 == 1 else -window[n]
            report.checked += 1
            if not _is_zero(window[-n] - expected):
                report.violations.append(n)
            n += 1
        return report
    c2 = spec.k + 1
    for m in window.indices():
        mm = c2 - m
        if mm < m or mm not in window:
            continue
        report.checked += 1
        if not _is_zero(window[m] - window[mm]):
            report.violations.append(m)
    return report


# ---------------------------------------------------------------------------
# periodicity


def period_mod(spec, m, window):
    """Smallest period of the window reduced mod m, or None.

    The window must hold exact integers; a period is only reported when a
    full repeat of k consecutive residue-tuples fits inside the window.
    """
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return 1
    residues = [int(t) % m for t in window.terms]
    n = len(residues)
    k = spec.k
    for period in range(1, n - k + 1):
        if all(residues[i] == residues[i + period] for i in range(n - period)):
            return period
    return None


# ---------------------------------------------------------------------------
# degenerate parameters (k = 4)


def degenerate_exponents(which, count):
    """Exponent sequences for the alpha=0 / beta=0 Somos-4 solutions.

    alpha = 0 gives tau[n] = beta**k_n with k[n+2] = 2k[n] - k[n-2] + 1;
    beta = 0 gives tau[n] = alpha**l_n with l[n+2] = l[n+1] + l[n-1] - l[n-2] + 1.
    Unit initials make the first four exponents zero.
    """
    if which not in ("alpha_zero", "beta_zero"):
        raise ValueError("which must be alpha_zero or beta_zero")
    if count < 4:
        raise ValueError("need at least the four initial exponents")
    e = [0, 0, 0, 0]
    while len(e) < count:
        n = len(e)  # computing exponent for index n+1, list is 0-based
        if which == "alpha_zero":
            e.append(2 * e[n - 2] - e[n - 4] + 1)
        else:
            e.append(e[n - 1] + e[n - 3] - e[n - 4] + 1)
    return DegenerateExponents(which=which, exponents=tuple(e[:count]))


# ---------------------------------------------------------------------------
# equivalent-sequence transformations


def _exp_mg(n):
    # gamma exponent in the (mg) transform
    return (n - 1) * (n - 4) // 2


def _exp_mgs_delta(n):
    return (n - 2) * (n - 3) // 2


def _abcba_exponents(n):
    """(A_n, B_n, C_n) for the Somos-5 a,b,c,b,a transform."""
    sign = -1 if n % 2 else 1
    A = Fraction(n * n, 4) - Fraction(3 * n, 2) + Fraction(17 - sign, 8)
    B = Fraction(1 + sign, 2)
    C = Fraction(n * n, 4) - Fraction(3 * n, 2) + Fraction(13 + 3 * sign, 8)
    for v in (A, B, C):
        if v.denominator != 1:
            raise ValueError(f"non-integer exponent at n={n}")
    return int(A), int(B), int(C)


def _laurent_pow(base, n):
    """base**n for a LaurentElem whose numerator is a monomial; n may be negative."""
    if not isinstance(base, LaurentElem):
        base = LaurentElem(base)
    out = LaurentElem(SparsePoly.const(1))
    for _ in range(abs(n)):
        out = out * base if n > 0 else out.laurent_div(base)
    return out


def _scaled_eq(lhs, rhs):
    """Equality of (poly, gamma_exp, delta_exp) pairs with signed exponents.

    Cross-multiplies by gamma/delta powers so both sides become honest
    polynomials before comparing.
    """
    p1, g1, d1 = lhs
    p2, g2, d2 = rhs
    mg, md = min(g1, g2), min(d1, d2)
    gamma = SparsePoly.variable("gamma")
    delta = SparsePoly.variable("delta")
    q1 = p1 * gamma ** (g1 - mg) * delta ** (d1 - md)
    q2 = p2 * gamma ** (g2 - mg) * delta ** (d2 - md)
    return q1 == q2


def _subst_initials_gd(lelem, exps):
    """Substitute x_i -> gamma^g_i * delta^d_i into a Laurent element.

    ``exps`` maps "xi" -> (g, d).  Returns (poly, gamma_exp, delta_exp);
    the x-monomial denominator turns into signed gamma/delta exponents.
    """
    gamma = SparsePoly.variable("gamma")
    delta = SparsePoly.variable("delta")
    mapping = {}
    for name, (g, d) in exps.items():
        mapping[name] = gamma ** g * delta ** d
    num = lelem.num.subst(mapping)
    g_den = d_den = 0
    from .exactring import VARIABLES as _V
    for i, e in enumerate(lelem.den):
        if e:
            g, d = exps[_V[i]]
            g_den += e * g
            d_den += e * d
    return num, -g_den, -d_den


def verify_transform(kind, n_max, term_budget=None):
    """Check one equivalent-sequence transformation symbolically for n <= n_max.

    kind:
      ``mg``            initials (1, g, g, 1), identity
                        tau'[n] = tau[n](g^3 a, g^4 b) / g^((n-1)(n-4)/2)
      ``mgs``           initials (d, g, g, d) with the extra delta prefactor
                        d^((n-2)(n-3)/2) and arguments ((g/d)^3 a, (g/d)^4 b)
      ``somos5_abcba``  initials (a, b, c, b, a) with exponents A_n, B_n, C_n
      ``sign_twist``    initials (1, -1, -1, 1),
                        tau'[n] = (-1)^floor(n/2) * tau[n](-a, b)
    Both sides are computed exactly; the report lists per-n equality.
    Negative prefactor exponents are handled by cross-multiplying, so every
    comparison happens between plain polynomials or Laurent elements.
    """
    if kind not in ("mg", "mgs", "somos5_abcba", "sign_twist"):
        raise ValueError(f"unknown transform kind {kind!r}")
    k = 5 if kind == "somos5_abcba" else 4
    if n_max < k + 1:
        raise ValueError("n_max must exceed k")
    alpha = SparsePoly.variable("alpha")
    beta = SparsePoly.variable("beta")
    gamma = SparsePoly.variable("gamma")
    delta = SparsePoly.variable("delta")
    # generic window with variable initials, specialized per transform
    generic = extend(laurent_spec(k), 1, n_max, term_budget=term_budget)
    # reference window with unit initials (plain polynomials)
    unit = extend(poly_unit_spec(k), 1, n_max, term_budget=term_budget)
    report = TransformReport(kind=kind, n_max=n_max)
    xs = [f"x{i}" for i in range(1, 6)]
    for n in range(1, n_max + 1):
        tau_n = unit[n]
        if kind == "mg":
            lhs = _subst_initials_gd(
                generic[n], {"x1": (0, 0), "x2": (1, 0), "x3": (1, 0), "x4": (0, 0)})
            rhs_poly = tau_n.subst({"alpha": gamma ** 3 * alpha,
                                    "beta": gamma ** 4 * beta})
            report.per_n[n] = _scaled_eq(lhs, (rhs_poly, -_exp_mg(n), 0))
        elif kind == "mgs":
            lhs = _subst_initials_gd(
                generic[n], {"x1": (0, 1), "x2": (1, 0), "x3": (1, 0), "x4": (0, 1)})
            # clear (g/d)^3, (g/d)^4 from the substituted terms: each
            # monomial a^i b^j picks up g^(3i+4j) d^(D-3i-4j) with
            # D = max(3i+4j), leaving the signed exponent -D on delta
            D = 0
            for exps, _ in tau_n._terms_unpacked():
                D = max(D, 3 * exps[0] + 4 * exps[1])
            cleared = SparsePoly.zero()
            for exps, coeff in tau_n._terms_unpacked():
                w = 3 * exps[0] + 4 * exps[1]
                cleared = cleared + (
                    SparsePoly.monomial(exps, coeff) * gamma ** w * delta ** (D - w))
            report.per_n[n] = _scaled_eq(
                lhs, (cleared, -_exp_mg(n), _exp_mgs_delta(n) - D))
        elif kind == "somos5_abcba":
            a, b, c = (LaurentElem(SparsePoly.variable(v)) for v in ("x1", "x2", "x3"))
            lhs = generic[n].subst({"x4": b, "x5": a})
            An, Bn, Cn = _abcba_exponents(n)
            sub_a = _laurent_pow(c, 2).laurent_div(_laurent_pow(a, 2)) * alpha
            sub_b = _laurent_pow(c, 3).laurent_div(_laurent_pow(a, 3)) * beta
            rhs = LaurentElem(tau_n).subst({"alpha": sub_a, "beta": sub_b})
            rhs = rhs * _laurent_pow(a, An) * _laurent_pow(b, Bn)
            rhs = rhs.laurent_div(_laurent_pow(c, Cn))
            report.per_n[n] = (lhs == rhs)
        else:  # sign_twist
            lhs = generic[n].subst(dict(zip(xs, [1, -1, -1, 1])))
            twisted = tau_n.subst({"alpha": -alpha})
            sign = -1 if (n // 2) % 2 else 1
            rhs = LaurentElem(sign * twisted)
            report.per_n[n] = (lhs == rhs)
    return report


# ---------------------------------------------------------------------------
# spec constructors


def unit_spec(k, alpha=1, beta=1):
    """The Somos-k sequence over Z: coefficients alpha, beta, unit initials."""
    return SomosSpec(k=k, alpha=alpha, beta=beta, initials=(1,) * k, ring="int")


def poly_unit_spec(k):
    """Symbolic coefficients alpha, beta with unit initials (ring = poly)."""
    one = SparsePoly.const(1)
    return SomosSpec(k=k, alpha=SparsePoly.variable("alpha"),
                     beta=SparsePoly.variable("beta"),
                     initials=(one,) * k, ring="poly")


def laurent_spec(k):
    """Variable initials x1..xk with symbolic alpha, beta (ring = laurent)."""
    alpha = LaurentElem(SparsePoly.variable("alpha"))
    beta = LaurentElem(SparsePoly.variable("beta"))
    initials = tuple(LaurentElem(SparsePoly.variable(f"x{i}")) for i in range(1, k + 1))
    return SomosSpec(k=k, alpha=alpha, beta=beta, initials=initials, ring="laurent")
