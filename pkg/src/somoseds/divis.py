"""Divisibility analytics for Somos and elliptic divisibility sequences.

Covers p-adic valuations, gap scanning with arithmetic-progression verdicts,
the closure oracle for modified sets of differences, the polynomial
divisibility theorem (common difference d(n) = 2n - k - 1), coprimality and
equivalence-pattern checks, the conjectural prime-power index formula, the
Fibonacci divisibility facts, and the consolidated observation report.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactring import BudgetExceededError, SparsePoly
from .somos import SeqWindow, SomosSpec, extend, poly_unit_spec

__all__ = [
    "GapReport",
    "ClosureResult",
    "ConjectureReport",
    "valuation",
    "gap_scan",
    "closure_oracle",
    "poly_window",
    "poly_div_check",
    "coprime_check",
    "arith_div_check",
    "conjecture_check",
    "fibonacci",
    "cavachi_check",
    "robinson_report",
    "eq_pattern_check",
]


def valuation(x, p):
    """p-adic valuation: largest e with p**e dividing x; x must be nonzero.

    Rational x gives v(numerator) - v(denominator), possibly negative,
    as needed for rational-valued Somos sequences.
    """
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    if p < 2:
        raise ValueError("p must be at least 2")
    if isinstance(x, Fraction) and x.denominator != 1:
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    e = 0
    x = abs(int(x))
    while x % p == 0:
        x //= p
        e += 1
    return e


@dataclass
class GapReport:
    p: int
    r: int
    window: tuple            # (lo, hi)
    occurrences: tuple       # sorted indices with p^r | tau_n
    is_ap: bool
    first: object            # index or None
    gap: object              # N_r or None
    valuation_profile: dict  # index -> v_p(tau_index), over occurrences of p^1
    classification: str      # regular_all_powers | constant_valuation | inconclusive
    w: object                # smallest r with N_{r+1} = p*N_r onward, or None
    obs2_gap_bound: object = None   # N_1 <= p + 1 + ceil(2*sqrt(p)), r=1 only
    obs3_gap_ratio: object = None   # N_2 == p*N_1 when p^2 occurs, r=1 only
    obs4_geometric: object = None   # N_{i+l} = p^l * N_i above smallest power


def _ap_verdict(occ):
    """(is_ap, first, gap): is_ap needs >= 3 occurrences; 2 give gap only."""
    if len(occ) < 2:
        return False, (occ[0] if occ else None), None
    gap = occ[1] - occ[0]
    if len(occ) == 2:
        return False, occ[0], gap
    ok = all(b - a == gap for a, b in zip(occ, occ[1:]))
    return ok, occ[0], (gap if ok else None)


def gap_scan(window, p, r_max):
    """One GapReport per power r = 1..r_max over an integer window.

    Zero terms are skipped (their valuation is undefined); verdicts with
    fewer than 3 occurrences are inconclusive.
    """
    vals = {}
    for n in window.indices():
        t = window[n]
        if t == 0:
            # zero is divisible by every power of p
            vals[n] = math.inf
            continue
        v = valuation(t, p)
        if v > 0:
            vals[n] = v
    occ_by_r = {r: tuple(n for n in sorted(vals) if vals[n] >= r)
                for r in range(1, r_max + 1)}
    profile = dict(sorted(vals.items()))
    distinct = {v for v in profile.values() if v != math.inf}

    # dichotomy: constant valuation across all multiples of p, or
    # every occurring power equally spaced.
    if not profile:
        classification = "inconclusive"
    elif len(distinct) == 1:
        classification = "constant_valuation" if len(profile) >= 3 else "inconclusive"
    else:
        verdicts = [_ap_verdict(occ_by_r[r]) for r in range(1, r_max + 1)
                    if len(occ_by_r[r]) >= 3]
        if verdicts and all(v[0] for v in verdicts):
            classification = "regular_all_powers"
        else:
            classification = "inconclusive"

    gaps = {}
    for r in range(1, r_max + 1):
        is_ap, first, gap = _ap_verdict(occ_by_r[r])
        gaps[r] = gap if is_ap else None

    # w: smallest r with N_{r+1} = p * N_r for all subsequent scanned r
    w = None
    for r in range(1, r_max):
        if all(gaps.get(s) is not None and gaps.get(s + 1) is not None
               and gaps[s + 1] == p * gaps[s] for s in range(r, r_max)):
            w = r
            break

    smallest_power = min(distinct) if distinct else None
    reports = []
    for r in range(1, r_max + 1):
        occ = occ_by_r[r]
        is_ap, first, gap = _ap_verdict(occ)
        obs2 = obs3 = obs4 = None
        if r == 1 and gap is not None and is_ap:
            obs2 = gap <= p + 1 + math.isqrt(4 * p) + (0 if math.isqrt(4 * p) ** 2 == 4 * p else 1)
            if occ_by_r.get(2):
                obs3 = gaps.get(2) is not None and gaps[2] == p * gaps[1]
            if smallest_power is not None:
                i = smallest_power
                obs4 = all(
                    gaps.get(i + l) == (p ** l) * gaps[i]
                    for l in range(1, r_max - i + 1)
                    if occ_by_r.get(i + l)) if gaps.get(i) is not None else None
        reports.append(GapReport(
            p=p, r=r, window=(window.lo, window.hi), occurrences=occ,
            is_ap=is_ap, first=first, gap=gap,
            valuation_profile=profile if r == 1 else {},
            classification=classification, w=w,
            obs2_gap_bound=obs2, obs3_gap_ratio=obs3, obs4_geometric=obs4))
    return reports


@dataclass(frozen=True)
class ClosureResult:
    seed: tuple
    closure: tuple   # intersected with the bounding window
    bound: tuple     # (lo, hi)
    is_ap: bool
    difference: object

    @property
    def trivial(self):
        return len(self.closure) < 2


def closure_oracle(seed, bound):
    """Fixed-point closure of seed under (s, t) -> 2s - t within bound.

    The unrestricted closure is infinite once the seed has two distinct
    elements; the result is intersected with [bound[0], bound[1]].
    """
    lo, hi = bound
    length = hi - lo + 1
    mask = (1 << length) - 1
    cur = 0
    for s in seed:
        if lo <= s <= hi:
            cur |= 1 << (s - lo)
    # fixed point on a bitmask: for each s in the set, {2s - t : t in set}
    # is the set reflected through s, i.e. the bit-reversal of the mask
    # shifted to center 2s
    while True:
        rev = int(f"{cur:0{length}b}"[::-1], 2) if cur else 0
        new = cur
        pos = cur
        while pos:
            low = pos & -pos
            i = low.bit_length() - 1
            pos ^= low
            k = 2 * i - (length - 1)
            new |= (rev << k if k >= 0 else rev >> -k) & mask
        if new == cur:
            break
        cur = new
    closure = tuple(lo + i for i in range(length) if cur >> i & 1)
    is_ap, _first, diff = _ap_verdict(closure)
    if len(closure) == 2:
        # two elements always form an AP; difference is determined
        is_ap, diff = True, closure[1] - closure[0]
    return ClosureResult(seed=tuple(sorted(set(seed))), closure=closure,
                         bound=(lo, hi), is_ap=is_ap, difference=diff)


_POLY_WINDOWS = {}


def poly_window(k, lo, hi, term_budget=None):
    """Cached symbolic unit-initial window for Somos-k over Z[alpha, beta]."""
    key = (k, lo, hi)
    for (ck, clo, chi), win in _POLY_WINDOWS.items():
        if ck == k and clo <= lo and chi >= hi:
            return win
    win = extend(poly_unit_spec(k), lo, hi, term_budget=term_budget)
    _POLY_WINDOWS[key] = win
    return win


def poly_div_check(k, n, l, window=None, term_budget=None):
    """Certify tau_n | tau_{n + l*(2n-k-1)} by exact polynomial division."""
    d = 2 * n - k - 1
    m = n + l * d
    if window is None:
        lo, hi = min(n, m, -5), max(n, m, k + 1)
        window = poly_window(k, lo, hi, term_budget=term_budget)
    return window[n].divides(window[m])


@dataclass
class CoprimeReport:
    span: int
    mode: str                      # "integer-proof" | "polynomial-evidence"
    checked: int = 0
    failures: list = field(default_factory=list)
    evidence_points: int = 0

    @property
    def ok(self):
        return not self.failures


def coprime_check(window, span, rng_seed=0):
    """Pairwise-coprimality of terms within distance span.

    Integer windows give gcd proofs.  Polynomial windows give two-way
    non-divisibility via exact division plus gcd-of-evaluations evidence at
    10 random points (a gcd of 1 at any evaluation point is conclusive for
    that pair, since a common divisor would divide both values).
    """
    symbolic = any(isinstance(window[n], SparsePoly) for n in window.indices())
    mode = "polynomial-evidence" if symbolic else "integer-proof"
    report = CoprimeReport(span=span, mode=mode)
    rng = random.Random(rng_seed)
    points = [{"alpha": rng.randint(2, 50), "beta": rng.randint(2, 50)}
              for _ in range(10)]
    if symbolic:
        report.evidence_points = len(points)
    for n in window.indices():
        for j in range(1, span + 1):
            m = n + j
            if m not in window:
                continue
            x, y = window[n], window[m]
            report.checked += 1
            if symbolic:
                if not x.is_constant() and not y.is_constant():
                    if x.divides(y) or y.divides(x):
                        report.failures.append((n, m, "mutual divisibility"))
                        continue
                good = any(
                    math.gcd(int(x.eval(pt)), int(y.eval(pt))) == 1
                    for pt in points
                    if x.eval(pt).denominator == 1 and y.eval(pt).denominator == 1)
                if not good:
                    report.failures.append((n, m, "no coprime evaluation"))
            else:
                if x == 0 or y == 0:
                    continue
                if math.gcd(x, y) != 1:
                    report.failures.append((n, m, math.gcd(x, y)))
    return report


@dataclass
class ArithDivReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def arith_div_check(terms, d_fn):
    """Verify d(n) | (m - n) implies f_n | f_m for all in-window pairs.

    ``terms`` maps index -> integer; ``d_fn(n)`` returns a positive integer
    or None (None meaning infinite difference: no constraint from n).
    """
    report = ArithDivReport()
    idx = sorted(terms)
    for n in idx:
        d = d_fn(n)
        if d is None:
            continue
        fn = terms[n]
        for m in idx:
            if m == n or (m - n) % d != 0:
                continue
            report.checked += 1
            fm = terms[m]
            if fn == 0:
                if fm != 0:
                    report.failures.append((n, m))
            elif fm % fn != 0:
                report.failures.append((n, m))
    return report


@dataclass
class ConjectureReport:
    k: int
    n: int
    q: int
    d: int
    entries: list           # per-m dicts
    consistent: bool        # occurrence lists nested across powers


def conjecture_check(k, n, m_max, window):
    """Report the conjectural index formula for prime-power divisibility.

    q = tau_n when (k+1) does not divide n, else tau_n / 2; for each
    m = 0..m_max the predicted index is n + ((q^m - 1)/2 + k*q^m)*(2n-k-1).
    Nothing is asserted about the conjecture itself: the report records the
    divisibility verdict at the predicted index and the full in-window
    occurrence list of q^{m+1}.
    """
    tau_n = window[n]
    q = tau_n if n % (k + 1) != 0 else tau_n // 2
    if q <= 1:
        raise ValueError(f"degenerate q = {q}; q must exceed 1")
    d = 2 * n - k - 1
    entries = []
    prev_occ = None
    consistent = True
    for m in range(0, m_max + 1):
        qm = q ** m
        predicted = n + ((qm - 1) // 2 + k * qm) * d
        if predicted not in window:
            raise BudgetExceededError(
                f"predicted index {predicted} outside window "
                f"{window.lo}..{window.hi}")
        power = q ** (m + 1)
        occ = tuple(i for i in window.indices()
                    if window[i] != 0 and window[i] % power == 0)
        if prev_occ is not None and not set(occ) <= set(prev_occ):
            consistent = False
        prev_occ = occ
        entries.append({
            "m": m,
            "predicted_l": predicted,
            "divides_at_predicted": window[predicted] % power == 0,
            "occurrences": occ,
        })
    return ConjectureReport(k=k, n=n, q=q, d=d, entries=entries,
                            consistent=consistent)


def fibonacci(hi):
    """Fibonacci numbers f_1 = f_2 = 1 up to index hi, as a dict."""
    f = {1: 1, 2: 1}
    for i in range(3, hi + 1):
        f[i] = f[i - 1] + f[i - 2]
    return f


@dataclass
class CavachiReport:
    checked: list = field(default_factory=list)   # (n, m, index, ok)
    exceptional: list = field(default_factory=list)  # (m, index, ok)

    @property
    def ok(self):
        return all(t[-1] for t in self.checked + self.exceptional)


def cavachi_check(n_range, m_range, exceptional_m_max=0, index_budget=2_000_000):
    """Check f_n^{m+1} | f_{n*f_n^m} and the n=3 rule 2^{m+2} | f_{3*2^m}."""
    report = CavachiReport()
    top = 0
    pairs = []
    for n in n_range:
        for m in m_range:
            fn_cache = fibonacci(max(n, 2))
            idx = n * fn_cache[n] ** m
            if idx > index_budget:
                raise BudgetExceededError(f"index {idx} exceeds budget")
            pairs.append((n, m, idx))
            top = max(top, idx)
    exc = []
    # the exceptional rule needs m >= 1: f_3 = 2 is divisible by 2 but not 4
    for m in range(1, exceptional_m_max + 1):
        idx = 3 * 2 ** m
        if idx > index_budget:
            raise BudgetExceededError(f"index {idx} exceeds budget")
        exc.append((m, idx))
        top = max(top, idx)
    f = fibonacci(max(top, 2))
    for n, m, idx in pairs:
        ok = f[idx] % f[n] ** (m + 1) == 0
        report.checked.append((n, m, idx, ok))
    for m, idx in exc:
        ok = f[idx] % 2 ** (m + 2) == 0
        report.exceptional.append((m, idx, ok))
    return report


def robinson_report(spec, primes, window, r_max):
    """Per-prime gap scans plus the four observation verdicts.

    Returns {p: {"reports": [GapReport...], "observations": {...},
    "classification": str}}.
    """
    out = {}
    for p in primes:
        reports = gap_scan(window, p, r_max)
        r1 = reports[0]
        out[p] = {
            "reports": reports,
            "classification": r1.classification,
            "observations": {
                "equally_spaced": r1.is_ap,
                "gap_bound": r1.obs2_gap_bound,
                "p_squared_gap": r1.obs3_gap_ratio,
                "geometric_gaps": r1.obs4_geometric,
            },
            "w": r1.w,
        }
    return out


@dataclass
class EqPatternReport:
    gamma: int
    d_by_n: dict
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def eq_pattern_check(gamma=3, n_max=9, term_budget=None):
    """Divisibility pattern of the beta = gamma^2 polynomial sequence.

    With initials (1, gamma, gamma, 1) and beta = gamma^2 the Somos-4
    sequence is polynomial in alpha, and for n > 4 with d = 2n - 5:
    n = 1 mod 3:  tau'_n | tau'_m  iff  d | (m - n);
    otherwise additionally (m - n)/d != 1 mod 3.
    Verified by exact division on the grid n <= n_max, |m - n| <= 2d.
    """
    al = SparsePoly.variable("alpha")
    g = SparsePoly.const(gamma)
    spec = SomosSpec(k=4, alpha=al, beta=SparsePoly.const(gamma * gamma),
                     initials=(SparsePoly.const(1), g, g, SparsePoly.const(1)),
                     ring="poly")
    d_max = 2 * n_max - 5
    lo, hi = 5 - 2 * d_max, n_max + 2 * d_max
    window = extend(spec, lo, hi, term_budget=term_budget)
    report = EqPatternReport(gamma=gamma, d_by_n={})
    for n in range(5, n_max + 1):
        d = 2 * n - 5
        report.d_by_n[n] = d
        for m in range(n - 2 * d, n + 2 * d + 1):
            if m == n or m not in window:
                continue
            divides = window[n].divides(window[m])
            if n % 3 == 1:
                expected = (m - n) % d == 0
            else:
                expected = (m - n) % d == 0 and ((m - n) // d) % 3 != 1
            report.checked += 1
            if divides != expected:
                report.failures.append((n, m, divides, expected))
    return report
