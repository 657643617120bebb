"""Tests for elliptic divisibility sequences and companion constructions."""

import math
import random
from fractions import Fraction

import pytest

from somoseds.eds import (
    CompanionPair,
    EdsSpec,
    companion4,
    companion5,
    eds_extend,
    h_coefficients,
    is_proper,
    verify_companion,
    verify_family_for,
    verify_family_fora2,
)
from somoseds.exactring import QuadElem, SparsePoly

AL = SparsePoly.variable("alpha")
BE = SparsePoly.variable("beta")


def oracle_eds(a1, a2, a3, a4, hi):
    """Independent oracle from the special EDS recurrence, plain Fractions."""
    a = {1: Fraction(a1), 2: Fraction(a2), 3: Fraction(a3), 4: Fraction(a4)}
    for m in range(3, hi - 1):
        a[m + 2] = (a[2] ** 2 * a[m + 1] * a[m - 1]
                    - a[1] * a[3] * a[m] ** 2) / a[m - 2]
    return a


# ---------------------------------------------------------------------------
# extension and basic structure


def test_reference_window_matches_oracle():
    win = eds_extend(EdsSpec(1, 1, -1, 1), -10, 20)
    oracle = oracle_eds(1, 1, -1, 1, 20)
    for n in range(1, 21):
        assert win[n] == oracle[n]
    assert [win[i] for i in range(1, 11)] == [1, 1, -1, 1, 2, -1, -3, -5, 7, -4]


def test_antisymmetry():
    win = eds_extend(EdsSpec(1, 1, -1, 1), -20, 20)
    assert win[0] == 0
    for n in range(1, 21):
        assert win[-n] == -win[n]


def test_is_proper():
    assert is_proper(EdsSpec(1, 1, -1, 1))
    assert is_proper(EdsSpec(1, 2, 3, 8))
    assert not is_proper(EdsSpec(2, 1, 1, 1))      # a1 != 1
    assert not is_proper(EdsSpec(1, 0, 0, 0))      # a2^2 + a3^2 = 0
    assert not is_proper(EdsSpec(1, 2, 3, 7))      # a2 does not divide a4


def test_divisibility_n_divides_m():
    win = eds_extend(EdsSpec(1, 1, -1, 1), 0, 60)
    for n in range(2, 9):
        for m in range(n, 61, n):
            assert win[m] % win[n] == 0


def test_consecutive_coprime():
    win = eds_extend(EdsSpec(1, 1, -1, 1), 0, 60)
    for n in range(2, 60):
        assert math.gcd(win[n], win[n + 1]) == 1


# ---------------------------------------------------------------------------
# recurrence families


def test_family_for_full_grid():
    win = eds_extend(EdsSpec(1, 1, -1, 1), -2, 40)
    rep = verify_family_for(win, range(1, 21), range(1, 21))
    assert rep.ok and rep.checked > 100


def test_family_fora2_full_grid():
    win = eds_extend(EdsSpec(1, 1, -1, 1), -2, 40)
    rep = verify_family_fora2(win, range(1, 19), range(1, 19))
    assert rep.ok and rep.checked > 100


def test_families_on_second_eds():
    win = eds_extend(EdsSpec(1, 2, 3, 8), -2, 25)
    assert verify_family_for(win, range(1, 12), range(1, 12)).ok
    assert verify_family_fora2(win, range(1, 11), range(1, 11)).ok


# ---------------------------------------------------------------------------
# Somos-4 companion


def test_companion4_symbolic_initials():
    pair = companion4(AL, BE, 8)
    a = pair.a
    zero = SparsePoly.zero()
    inv = (AL + BE) * (AL + BE) + BE
    assert a[2] == QuadElem(zero, -SparsePoly.const(1), AL)
    assert a[3] == QuadElem(-BE, zero, AL)
    assert a[4] == QuadElem(zero, inv, AL)


def test_companion4_numeric_perfect_square():
    # alpha = 4, beta = 1: I = (4+1)^2 + 1 = 26, a4 = 2*26 = 52
    pair = companion4(4, 1, 8)
    assert pair.a[2] == -2
    assert pair.a[3] == -1
    assert pair.a[4] == 52


def test_companion4_parity_structure():
    pair = companion4(AL, BE, 12)
    for n in range(0, 13):
        term = pair.a[n]
        if n % 2 == 0:
            assert term.a.is_zero()   # even index: pure sqrt(alpha) part
        else:
            assert term.b.is_zero()   # odd index: base ring


def test_companion4_identities_symbolic():
    pair = companion4(AL, BE, 12)
    r1, r2 = verify_companion(pair, range(1, 11), range(1, 11))
    assert r1.ok and r1.checked > 20
    assert r2.ok and r2.checked > 20


def test_companion4_identities_numeric_random():
    rng = random.Random(11)
    for _ in range(8):
        a, b = rng.randint(1, 30), rng.randint(1, 30)
        pair = companion4(a, b, 14)
        r1, r2 = verify_companion(pair, range(1, 12), range(1, 12))
        assert r1.ok and r2.ok, (a, b)


def test_companion4_specific_instance():
    # (m, n) = (6, 2) for alpha = beta = 1: LHS tau_8 * tau_4 = 23
    pair = companion4(1, 1, 10)
    tau, a = pair.tau, pair.a
    lhs = tau[8] * tau[4]
    assert lhs == 23
    rhs = a[2] * a[2] * tau[5] * tau[7] - a[1] * a[3] * tau[6] * tau[6]
    assert lhs == rhs


# ---------------------------------------------------------------------------
# Somos-5 companion


def test_h_coefficients():
    h0, h1 = h_coefficients(AL, BE)
    assert h0 == 2 * AL + BE
    assert h1 == AL + SparsePoly.const(1)
    # product equals the Somos-5 invariant J at unit initials
    assert h0 * h1 == (2 * AL + BE) * (AL + SparsePoly.const(1))


def test_companion5_perfect_square_h():
    # alpha = 1, beta = 2: h0 = 4, parity 0 companion has a2 = 2 exactly
    pair = companion5(1, 2, 0, 8)
    assert pair.a[2] == 2
    assert not isinstance(pair.a[2], QuadElem)


def test_companion5_identities_numeric_random():
    rng = random.Random(23)
    for _ in range(8):
        a, b = rng.randint(1, 30), rng.randint(1, 30)
        p0 = companion5(a, b, 0, 14)
        p1 = companion5(a, b, 1, 14)
        r1, r2 = verify_companion(p0, range(1, 12), range(1, 11),
                                  pair_other=p1)
        assert r1.ok and r2.ok, (a, b)


def test_companion5_identities_symbolic():
    p0 = companion5(AL, BE, 0, 10)
    p1 = companion5(AL, BE, 1, 10)
    r1, r2 = verify_companion(p0, range(1, 9), range(1, 8), pair_other=p1)
    assert r1.ok and r1.checked > 10
    assert r2.ok and r2.checked > 10


def _square_base(x):
    if isinstance(x, QuadElem):
        s = x * x
        assert not s.b
        return s.a
    return x * x


def test_companion5_ratio_across_parities():
    """a_k(0)^2 * h1 = a_k(1)^2 * h0 for even k; odd terms coincide.

    The stated ratio a_k(i)^2 / a_k(j)^2 = h_i / h_j concerns the indices
    where the sqrt(h) factor is present (even k); odd-index terms carry no
    sqrt factor and are literally equal between the two parities.
    """
    h0, h1 = h_coefficients(AL, BE)
    p0 = companion5(AL, BE, 0, 9)
    p1 = companion5(AL, BE, 1, 9)
    for k in range(1, 9):
        x, y = p0.a[k], p1.a[k]
        if k % 2 == 0:
            assert _square_base(x) * h1 == _square_base(y) * h0, k
        else:
            xa = x.a if isinstance(x, QuadElem) else x
            ya = y.a if isinstance(y, QuadElem) else y
            assert xa == ya, k
