"""Tests for the Somos sequence engine."""

from fractions import Fraction

import pytest

from somoseds.exactring import SparsePoly, ZeroDivisorError
from somoseds.somos import (
    SomosSpec,
    degenerate_exponents,
    extend,
    invariants4,
    invariants5,
    laurent_spec,
    period_mod,
    poly_unit_spec,
    reflected_window,
    symmetry_check,
    unit_spec,
    verify_transform,
)

AL = SparsePoly.variable("alpha")
BE = SparsePoly.variable("beta")
ONE = SparsePoly.const(1)


def oracle_somos(k, alpha, beta, initials, count):
    """Independent oracle: plain-Fraction forward recurrence."""
    t = [Fraction(v) for v in initials]
    while len(t) < count:
        n = len(t)
        num = alpha * t[n - 1] * t[n - k + 1] + beta * t[n - 2] * t[n - k + 2]
        t.append(num / t[n - k])
    return t


# ---------------------------------------------------------------------------
# generation


def test_somos4_unit_matches_oracle():
    win = extend(unit_spec(4), 1, 20)
    expected = oracle_somos(4, 1, 1, (1, 1, 1, 1), 20)
    assert [win[i] for i in range(1, 21)] == [int(v) for v in expected]
    assert [win[i] for i in range(1, 13)] == [
        1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209]


def test_somos5_unit_matches_oracle():
    win = extend(unit_spec(5), 1, 20)
    expected = oracle_somos(5, 1, 1, (1, 1, 1, 1, 1), 20)
    assert [win[i] for i in range(1, 21)] == [int(v) for v in expected]
    assert [win[i] for i in range(1, 12)] == [
        1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83]


def test_backward_extension_symmetric():
    win = extend(unit_spec(4), -10, 15)
    # unit-initial Somos-4 is symmetric about 5/2: tau_n = tau_{5-n}
    for n in range(-10, 16):
        if 5 - n in win:
            assert win[n] == win[5 - n]


def test_general_parameters():
    win = extend(SomosSpec(k=4, alpha=3, beta=7, initials=(1, 1, 1, 1),
                           ring="int"), 1, 12)
    expected = oracle_somos(4, 3, 7, (1, 1, 1, 1), 12)
    assert [win[i] for i in range(1, 13)] == [int(v) for v in expected]


def test_zero_divisor_diagnostic():
    spec = SomosSpec(k=4, alpha=-1, beta=2, initials=(1, 1, 2, 3), ring="int")
    with pytest.raises(ZeroDivisorError) as exc:
        extend(spec, -5, 10)
    assert exc.value.index is not None


def test_reflected_fibonacci_window():
    spec = SomosSpec(k=4, alpha=-1, beta=2, initials=(1, 1, 2, 3), ring="int")
    win = reflected_window(spec, 30, sign_rule=lambda n: (-1) ** (n + 1))
    fib = {1: 1, 2: 1}
    for i in range(3, 31):
        fib[i] = fib[i - 1] + fib[i - 2]
    for n in range(1, 31):
        assert win[n] == fib[n]
        assert win[-n] == (-1) ** (n + 1) * fib[n]
    assert win[0] == 0


# ---------------------------------------------------------------------------
# invariants


def test_invariants4_symbolic_unit():
    spec = poly_unit_spec(4)
    win = extend(spec, 1, 8)
    inv = invariants4(spec, win, at=1)
    assert inv.T == 2 * AL + BE + ONE
    assert inv.I == (AL + BE) * (AL + BE) + BE


def test_invariants5_symbolic_unit():
    spec = poly_unit_spec(5)
    win = extend(spec, 1, 9)
    inv = invariants5(spec, win, at=1)
    assert inv.S == 2 * AL + BE + 2 * ONE
    assert inv.J == (2 * AL + BE) * (AL + ONE)


def test_invariants_constant_along_numeric_window():
    import random
    rng = random.Random(4)
    for _ in range(5):
        a, b = rng.randint(1, 50), rng.randint(1, 50)
        spec = SomosSpec(k=4, alpha=Fraction(a), beta=Fraction(b),
                         initials=(Fraction(1),) * 4, ring="rat")
        win = extend(spec, 1, 40)
        first = invariants4(spec, win, at=1)
        for at in range(2, 35, 7):
            inv = invariants4(spec, win, at=at)
            assert inv.T == first.T and inv.I == first.I


# ---------------------------------------------------------------------------
# symmetry and periods


def test_symmetry_numeric():
    spec = unit_spec(4)
    rep = symmetry_check(spec, extend(spec, -10, 15))
    assert rep.ok and rep.checked > 5


def test_symmetry_symbolic(poly4_window, poly5_window):
    assert symmetry_check(poly_unit_spec(4), poly4_window).ok
    assert symmetry_check(poly_unit_spec(5), poly5_window).ok


def test_period_mod():
    spec = unit_spec(4)
    win = extend(spec, 1, 80)
    assert period_mod(spec, 4, win) == 10
    assert period_mod(spec, 2, win) == 5
    assert period_mod(spec, 1, win) == 1


def test_period_mod_no_zero_residue_mod4():
    spec = unit_spec(4)
    win = extend(spec, 1, 80)
    assert all(win[n] % 4 != 0 for n in range(1, 81))


# ---------------------------------------------------------------------------
# degenerate exponent recurrences


def test_degenerate_exponents_alpha_zero():
    exps = degenerate_exponents("alpha_zero", 14).exponents
    assert exps[:4] == (0, 0, 0, 0)
    # k_{n+2} = 2 k_n - k_{n-2} + 1
    for i in range(4, 14):
        assert exps[i] == 2 * exps[i - 2] - exps[i - 4] + 1
    # tau_7 = beta^3 under alpha = 0
    assert exps[6] == 3


def test_degenerate_exponents_beta_zero():
    exps = degenerate_exponents("beta_zero", 14).exponents
    assert exps[:4] == (0, 0, 0, 0)
    # l_{n+2} = l_{n+1} + l_{n-1} - l_{n-2} + 1
    for i in range(4, 14):
        assert exps[i] == exps[i - 1] + exps[i - 3] - exps[i - 4] + 1


def test_degenerate_exponents_match_symbolic_runs():
    zero, one = SparsePoly.zero(), SparsePoly.const(1)
    wa = extend(SomosSpec(k=4, alpha=zero, beta=BE, initials=(one,) * 4,
                          ring="poly"), 1, 14)
    wb = extend(SomosSpec(k=4, alpha=AL, beta=zero, initials=(one,) * 4,
                          ring="poly"), 1, 14)
    ka = degenerate_exponents("alpha_zero", 14).exponents
    kb = degenerate_exponents("beta_zero", 14).exponents
    for n in range(1, 15):
        assert wa[n] == BE ** ka[n - 1]
        assert wb[n] == AL ** kb[n - 1]


# ---------------------------------------------------------------------------
# Laurent windows


def test_laurent_tau5():
    win = extend(laurent_spec(4), 1, 8)
    t5 = win[5]
    assert t5.den[5] == 1 and sum(t5.den) == 1  # denominator exactly x1
    pt = {"alpha": 1, "beta": 1, "x1": 1, "x2": 1, "x3": 1, "x4": 1}
    assert t5.eval(pt) == 2


def test_laurent_specializes_to_integers(laurent4_window):
    pt = {"alpha": 1, "beta": 1, "x1": 1, "x2": 1, "x3": 1, "x4": 1}
    ints = extend(unit_spec(4), 1, 20)
    for n in range(1, 21):
        assert laurent4_window[n].eval(pt) == ints[n]


# ---------------------------------------------------------------------------
# equivalent-sequence transformations


@pytest.mark.parametrize("kind", ["mg", "mgs", "somos5_abcba", "sign_twist"])
def test_transforms(kind):
    rep = verify_transform(kind, 12)
    assert rep.ok, rep.per_n


def test_sign_twist_matches_direct_run():
    # initials (1,-1,-1,1) vs (-1)^(n//2) tau_n(-alpha, beta) numerically
    one = SparsePoly.const(1)
    spec = SomosSpec(k=4, alpha=AL, beta=BE,
                     initials=(one, -one, -one, one), ring="poly")
    win = extend(spec, 1, 10)
    ref = extend(poly_unit_spec(4), 1, 10)
    for n in range(1, 11):
        twisted = ref[n].subst({"alpha": -AL})
        sign = (-1) ** (n // 2)
        assert win[n] == (twisted if sign == 1 else -twisted)
