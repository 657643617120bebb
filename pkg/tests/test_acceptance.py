"""Acceptance gate: fifteen criteria, each printing one PASS/FAIL line.

Every check is exact (tolerance zero).  The PASS/FAIL lines are written
straight to the real stdout so they appear even under pytest capture.
"""

import functools
import math
import random
from fractions import Fraction as F

from somoseds.curves import (
    gap_vs_order,
    make_curve,
    make_point,
    node_order,
    point_order,
)
from somoseds.divis import (
    cavachi_check,
    closure_oracle,
    conjecture_check,
    eq_pattern_check,
    fibonacci,
    gap_scan,
    poly_div_check,
)
from somoseds.eds import (
    EdsSpec,
    companion4,
    companion5,
    eds_extend,
    verify_companion,
    verify_family_for,
    verify_family_fora2,
)
from somoseds.exactring import SparsePoly
from somoseds.somos import (
    SomosSpec,
    extend,
    invariants4,
    laurent_spec,
    invariants5,
    period_mod,
    poly_unit_spec,
    recurrence_residual,
    reflected_window,
    symmetry_check,
    unit_spec,
    verify_transform,
)

AL = SparsePoly.variable("alpha")
BE = SparsePoly.variable("beta")

CURVE_UNIT = (4, 0, -4, 1)
CURVE_A4B9 = (4, 0, F(-12428112196, 19683), F(1385503884676628, 14348907))
CURVE_A2B5 = (4, 0, F(-48492460561, 38880000),
              F(10678311547192441, 1259712000000))
CURVE_FIB = (4, 0, F(-25, 12), F(-125, 216))


def _record(num, status):
    import conftest
    line = f"CRITERION {num}: {status}"
    conftest.ACCEPTANCE_RESULTS.append(line)
    print(line)


def criterion(num):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                _record(num, "FAIL")
                raise
            _record(num, "PASS")
        return wrapper
    return deco


def _oracle(k, alpha, beta, initials, hi):
    """Independent recurrence evaluation over plain Fractions."""
    t = {n + 1: F(v) for n, v in enumerate(initials)}
    for n in range(k + 1, hi + 1):
        t[n] = (alpha * t[n - 1] * t[n - k + 1]
                + beta * t[n - 2] * t[n - k + 2]) / t[n - k]
    return t


@criterion(1)
def test_criterion_01_sequence_generation():
    win4 = extend(unit_spec(4), 1, 12)
    assert [win4[n] for n in range(1, 13)] == [
        1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209]
    win5 = extend(unit_spec(5), 1, 11)
    assert [win5[n] for n in range(1, 12)] == [
        1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83]
    o4 = _oracle(4, 1, 1, (1, 1, 1, 1), 12)
    o5 = _oracle(5, 1, 1, (1, 1, 1, 1, 1), 11)
    assert all(win4[n] == o4[n] for n in range(1, 13))
    assert all(win5[n] == o5[n] for n in range(1, 12))


@criterion(2)
def test_criterion_02_p2_occurrences_and_period():
    spec = unit_spec(4)
    win = extend(spec, -50, 200)
    r1, r2 = gap_scan(win, 2, 2)
    assert r1.occurrences == tuple(n for n in range(-50, 201) if n % 5 == 0)
    assert not r2.occurrences  # no index has 2-adic valuation >= 2
    assert period_mod(spec, 4, win) == 10
    assert all(win[n] % 4 != 0 for n in win.indices())


@criterion(3)
def test_criterion_03_polynomial_divisibility(poly4_window, poly5_window):
    for n in range(5, 11):
        for l in (-2, -1, 1, 2):
            assert poly_div_check(4, n, l, window=poly4_window), (4, n, l)
    for n in range(6, 11):
        for l in (-2, -1, 1, 2):
            assert poly_div_check(5, n, l, window=poly5_window), (5, n, l)


@criterion(4)
def test_criterion_04_symmetry_and_laurent(poly4_window, poly5_window,
                                           laurent4_window, laurent5_window):
    for k, win in ((4, poly4_window), (5, poly5_window)):
        rep = symmetry_check(poly_unit_spec(k), win)
        assert rep.ok and rep.checked >= 20
    for k, win in ((4, laurent4_window), (5, laurent5_window)):
        assert win.hi == 20  # the window exists: every division was exact
        for n in win.indices():
            term = win[n]
            assert all(e >= 0 for e in term.den)  # monomial denominator
        spec = laurent_spec(k)
        for n in range(3, 23 - k):
            assert recurrence_residual(spec, win, n).is_zero()


@criterion(5)
def test_criterion_05_invariants(poly4_window, poly5_window):
    inv4 = invariants4(poly_unit_spec(4), poly4_window, at=1)
    assert inv4.I == (AL + BE) * (AL + BE) + BE
    inv5 = invariants5(poly_unit_spec(5), poly5_window, at=1)
    assert inv5.J == (2 * AL + BE) * (AL + SparsePoly.const(1))
    rng = random.Random(17)
    for _ in range(25):
        a, b = rng.randint(1, 50), rng.randint(1, 50)
        w4 = extend(unit_spec(4, a, b), 1, 100)
        vals = {invariants4(unit_spec(4, a, b), w4, at=at).I
                for at in range(1, 97)}
        assert len(vals) == 1, (a, b)
        w5 = extend(unit_spec(5, a, b), 1, 100)
        vals = {invariants5(unit_spec(5, a, b), w5, at=at).J
                for at in range(1, 96)}
        assert len(vals) == 1, (a, b)


@criterion(6)
def test_criterion_06_companion_identities():
    pair = companion4(AL, BE, 22)
    r1, r2 = verify_companion(pair, range(1, 11), range(1, 11))
    assert r1.ok and r2.ok
    assert r1.checked >= 45 and r2.checked >= 45
    rng = random.Random(29)
    for _ in range(50):
        a, b = rng.randint(1, 50), rng.randint(1, 50)
        p0 = companion5(a, b, 0, 14)
        p1 = companion5(a, b, 1, 14)
        r1, r2 = verify_companion(p0, range(1, 12), range(1, 11),
                                  pair_other=p1)
        assert r1.ok and r2.ok, (a, b)


@criterion(7)
def test_criterion_07_reference_eds():
    spec = EdsSpec(1, 1, -1, 1)
    win = eds_extend(spec, -60, 60)
    assert win[0] == 0
    for n in range(1, 61):
        assert win[-n] == -win[n]
    # V_k = {m : a_k | a_m}.  The exact equality V_k = k*Z is a statement
    # about the generic (parameter-initial) sequence; after specializing,
    # unit terms a_k = +-1 divide everything, so equality is only visible
    # when |a_k| > 1.  Both directions are checked where they apply.
    for k in range(2, 9):
        for m in range(-60, 61):
            if m % k == 0:
                assert win[m] % win[k] == 0, (k, m)
            elif abs(win[k]) > 1:
                assert win[m] % win[k] != 0, (k, m)
    assert sum(abs(win[k]) > 1 for k in range(2, 9)) == 3  # k = 5, 7, 8
    for n in range(2, 60):
        assert math.gcd(win[n], win[n + 1]) == 1
    assert verify_family_for(win, range(1, 31), range(1, 31)).ok
    assert verify_family_fora2(win, range(1, 30), range(1, 30)).ok


@criterion(8)
def test_criterion_08_closure_oracle():
    rng = random.Random(99)
    for _ in range(200):
        seed = {rng.randint(-100, 100) for _ in range(rng.randint(1, 5))}
        res = closure_oracle(seed, (-2000, 2000))
        if len(res.closure) < 2:
            continue
        assert res.is_ap
        diffs = [b - a for a in res.seed for b in res.seed if b > a]
        assert res.difference == math.gcd(*diffs) if len(diffs) > 1 \
            else res.difference == diffs[0]


@criterion(9)
def test_criterion_09_alpha4_beta9():
    spec = SomosSpec(k=4, alpha=4, beta=9, initials=(1, 3, 3, 1), ring="int")
    win = extend(spec, 1, 300)
    rep3 = gap_scan(win, 3, 1)[0]
    assert set(rep3.valuation_profile.values()) == {1}
    gaps = {r.r: r.gap for r in gap_scan(win, 5, 4)}
    assert gaps[1] == gaps[2] == gaps[3] == 7 and gaps[4] == 35
    curve = make_curve(CURVE_A4B9, 5)
    point = make_point(curve, F(55750, 243), 2)
    order = point_order(curve, point)
    assert order == 7 == gaps[1]


@criterion(10)
def test_criterion_10_alpha2_beta5():
    spec = SomosSpec(k=4, alpha=F(2), beta=F(5),
                     initials=(F(1), F(3), F(2), F(5)), ring="rat")
    win = extend(spec, 1, 200)
    r1, r2, _r3 = gap_scan(win, 7, 3)
    assert set(r1.valuation_profile.values()) == {2}
    assert r1.gap == r2.gap == 10
    curve = make_curve(CURVE_A2B5, 7)
    point = make_point(curve, F(223081, 21600), ("sqrt", 2))
    assert point_order(curve, point) == 10 == r1.gap


@criterion(11)
def test_criterion_11_gap_equals_order(int4_window):
    for p in (3, 7, 11):
        rep = gap_scan(int4_window, p, 1)[0]
        curve = make_curve(CURVE_UNIT, p)
        point = make_point(curve, 1, 1)
        assert gap_vs_order(rep, curve, point).equal, p


@criterion(12)
def test_criterion_12_fibonacci_battery():
    spec = SomosSpec(k=4, alpha=-1, beta=2, initials=(1, 1, 2, 3), ring="int")
    win = reflected_window(spec, 30, sign_rule=lambda n: (-1) ** (n + 1))
    fib = fibonacci(30)
    for n in range(1, 31):
        assert win[n] == fib[n]
        assert win[-n] == (-1) ** (n + 1) * win[n]
    rep = cavachi_check(range(4, 10), (1, 2), exceptional_m_max=6)
    assert rep.ok
    assert all(ok for _m, _i, ok in rep.exceptional)
    big = reflected_window(spec, 120, sign_rule=lambda n: (-1) ** (n + 1))
    gap = gap_scan(big, 3, 1)[0].gap
    assert node_order(CURVE_FIB, 3, F(7, 12), y_sq=-1) == 4 == gap


@criterion(13)
def test_criterion_13_equivalent_sequences():
    for kind in ("mg", "mgs", "somos5_abcba", "sign_twist"):
        rep = verify_transform(kind, 12)
        assert rep.ok, kind
    rep = eq_pattern_check(gamma=3, n_max=9)
    assert rep.ok
    assert rep.checked == sum(4 * (2 * n - 5) for n in range(5, 10))


@criterion(14)
def test_criterion_14_conjecture_report(int4_window):
    rep = conjecture_check(4, 6, 1, int4_window)
    assert rep.q == 3 and rep.d == 7
    assert [e["predicted_l"] for e in rep.entries] == [34, 97]
    occ3 = {i for i in rep.entries[0]["occurrences"] if i <= 200}
    occ9 = {i for i in rep.entries[1]["occurrences"] if i <= 200}
    assert occ9 <= occ3
    assert rep.consistent


@criterion(15)
def test_criterion_15_determinism(tmp_path):
    from somoseds.cli import run_one
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["gaps", "--k", "4", "--p", "2", "--from", "-50", "--to", "200"]
    assert run_one(argv + ["--output", str(a)]) == 0
    assert run_one(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
