"""Exact arithmetic kernel: polynomials, rational functions, residue rings."""

import json
import random
from fractions import Fraction

import pytest

from qmzv.algebra import (
    CycModElement,
    Poly,
    PrimeSlice,
    RatFun,
    cyclotomic,
    eval_at_one_mod,
    inv_qint_closed_form,
    kronecker_mul,
    q_binom,
    q_int,
    reduce_mod,
)
from qmzv.errors import ExcludedPrimeError, NonInvertibleError

Q = Fraction


def test_q_int_examples():
    assert q_int(1) == Poly([1])
    assert q_int(2) == Poly([1, 1])
    assert q_int(5).eval(1) == 5
    with pytest.raises(ValueError):
        q_int(0)


def test_q_binom_examples():
    assert q_binom(7, 0) == Poly([1])
    assert q_binom(2, 1) == q_int(2)
    expanded = Poly([1, 0, 1]) * Poly([1, 1, 1])  # (1+q^2)(1+q+q^2)
    assert q_binom(4, 2) == expanded
    with pytest.raises(ValueError):
        q_binom(2, 3)


def test_q_binom_counts_at_one():
    from math import comb

    for n in range(8):
        for m in range(n + 1):
            assert q_binom(n, m).eval(1) == comb(n, m)


def test_poly_zero_canonical_form():
    z = Poly([0, 0, 0])
    assert z.is_zero()
    assert z.coeffs == ()
    assert z.degree == float("-inf")
    assert Poly([1, 2, 0]).degree == 1


def test_poly_divmod_and_gcd():
    a = q_int(6) * Poly([2, 0, 1])
    quo, rem = a.divmod(q_int(6))
    assert quo == Poly([2, 0, 1]) and rem.is_zero()
    g = (q_int(4) * q_int(3)).gcd(q_int(6) * q_int(4))
    assert (q_int(4) * q_int(3)) % g == Poly.zero()
    assert g.coeffs[-1] == 1  # monic


def test_kronecker_matches_schoolbook():
    rng = random.Random(7)
    for _ in range(200):
        a = [rng.randint(-10**9, 10**9) for _ in range(rng.randint(1, 40))]
        b = [rng.randint(-10**9, 10**9) for _ in range(rng.randint(1, 40))]
        ref = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                ref[i + j] += x * y
        while ref and ref[-1] == 0:
            ref.pop()
        got = kronecker_mul(a, b)
        while got and got[-1] == 0:
            got.pop()
        assert got == ref


def test_qp_identity_all_p_up_to_50():
    # q^p = 1 - (1-q)[p] identically in Q[q]
    from qmzv.miner import primes_upto

    for p in primes_upto(50):
        assert Poly.q_power(p) == Poly.one() - Poly([1, -1]) * q_int(p)


def test_reduce_examples():
    assert reduce_mod(Poly.q_power(5), 5, 1) == reduce_mod(Poly.one(), 5, 1)
    assert reduce_mod(q_int(5) ** 2, 5, 2).is_zero()
    assert reduce_mod(q_int(2), 5, 1).residue == Poly([1, 1])


def test_reduce_rejects_p_divisible_denominator():
    with pytest.raises(ExcludedPrimeError):
        reduce_mod(Poly([Q(1, 5)]), 5, 1)
    with pytest.raises(ExcludedPrimeError):
        CycModElement(3, 2, Poly([Q(2, 9)]))


def test_inv_examples():
    one = reduce_mod(Poly.one(), 5, 1)
    assert one.inv() == one
    x = reduce_mod(q_int(2), 5, 1)
    assert x.inv() * x == one
    # same class as 1 + q^2 + q^4
    assert x.inv() == reduce_mod(Poly([1, 0, 1, 0, 1]), 5, 1)
    with pytest.raises(NonInvertibleError):
        reduce_mod(q_int(5), 5, 2).inv()


def test_inv_qint_closed_form_examples():
    for p, n in [(5, 1), (7, 2), (11, 3)]:
        assert inv_qint_closed_form(1, p, n) == reduce_mod(Poly.one(), p, n)
    assert inv_qint_closed_form(2, 5, 1) == reduce_mod(Poly([1, 0, 1, 0, 1]), 5, 1)
    with pytest.raises(ValueError):
        inv_qint_closed_form(5, 5, 1)
    with pytest.raises(ValueError):
        inv_qint_closed_form(0, 5, 1)


def test_inverse_consistency_grid():
    # closed form vs extended-Euclid inverse, all 1 <= m < p <= 13, n <= 3
    for p in (2, 3, 5, 7, 11, 13):
        for n in (1, 2, 3):
            for m in range(1, p):
                closed = inv_qint_closed_form(m, p, n)
                euclid = reduce_mod(q_int(m), p, n).inv()
                assert closed == euclid, (m, p, n)


def _random_element(rng, p, n):
    deg = rng.randrange(0, n * (p - 1))
    coeffs = []
    for _ in range(deg + 1):
        num = rng.randint(-30, 30)
        den = rng.choice([1, 2, 3, 7, 11])
        if den % p == 0:
            den = 1
        coeffs.append(Q(num, den))
    return CycModElement(p, n, Poly(coeffs))


def test_ring_laws_random():
    rng = random.Random(11)
    for p, n in [(5, 1), (5, 2), (7, 3), (13, 2)]:
        for _ in range(8):
            a, b, c = (_random_element(rng, p, n) for _ in range(3))
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c


def test_projection_commutes_with_operations():
    rng = random.Random(13)
    for p in (3, 5, 7):
        for _ in range(6):
            a, b = _random_element(rng, p, 3), _random_element(rng, p, 3)
            for n in (1, 2):
                assert (a + b).project(n) == a.project(n) + b.project(n)
                assert (a * b).project(n) == a.project(n) * b.project(n)


def test_eval_at_one_examples_and_homomorphism():
    for p, n in [(5, 1), (7, 2)]:
        assert eval_at_one_mod(reduce_mod(q_int(2), p, n)) == 2 % p**n
        assert eval_at_one_mod(reduce_mod(Poly.q_power(1), p, n)) == 1
    rng = random.Random(17)
    for p, n in [(5, 2), (7, 1), (11, 2)]:
        mod = p**n
        for _ in range(10):
            a, b = _random_element(rng, p, n), _random_element(rng, p, n)
            assert eval_at_one_mod(a + b) == (eval_at_one_mod(a) + eval_at_one_mod(b)) % mod
            assert eval_at_one_mod(a * b) == (eval_at_one_mod(a) * eval_at_one_mod(b)) % mod


def test_eval_at_one_is_onto():
    p, n = 5, 2
    images = {eval_at_one_mod(reduce_mod(Poly.const(c), p, n)) for c in range(p**n)}
    assert images == set(range(p**n))


def test_scalar_multiplication_excluded_prime():
    x = reduce_mod(q_int(2), 5, 1)
    with pytest.raises(ExcludedPrimeError):
        x * Q(1, 5)
    assert (x * Q(1, 2)) * 2 == x


def test_serialization_round_trip():
    x = CycModElement(7, 2, Poly([Q(1, 2), -3, Q(5, 4)]))
    blob = x.to_json()
    data = json.loads(blob)
    assert set(data) == {"p", "n", "coeffs"}
    assert data["coeffs"][0] == "1/2"
    assert CycModElement.from_json(blob) == x


def test_cyclotomic_factorization_of_q_int():
    # [m] = prod_{d | m, d > 1} Phi_d
    for m in range(2, 13):
        prod = Poly.one()
        for d in range(2, m + 1):
            if m % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == q_int(m)


def test_ratfun_normalization_and_arithmetic():
    f = RatFun(q_int(2) * Poly([0, 2]), q_int(2) * q_int(3))
    assert f.num == Poly([0, 2]) * Q(1, 1) and f.den == q_int(3)
    assert f.den.coeffs[-1] == 1
    g = RatFun(Poly.one(), q_int(2))
    assert f + g == RatFun(Poly([0, 2]) * q_int(2) + q_int(3), q_int(3) * q_int(2))
    assert (f - f).is_zero()
    assert f * g / g == f
    # (2+q)/(1+q) style example
    h = RatFun(Poly([2, 1]), Poly([1, 1]))
    assert h == RatFun(Poly([2, 1]) * q_int(4), Poly([1, 1]) * q_int(4))


def test_ratfun_theta():
    # theta(q^k) = k q^k
    f = RatFun(Poly.q_power(3))
    assert f.theta() == RatFun(Poly.q_power(3) * 3)
    # theta(1/(1-q)) = q/(1-q)^2
    g = RatFun(Poly.one(), Poly([1, -1]))
    assert g.theta() == RatFun(Poly([0, 1]), Poly([1, -1]) ** 2)


def test_ratfun_from_qint_factored():
    num = q_int(4) * Poly([3, 1])
    f = RatFun.from_qint_factored(num, {4: 1, 2: 1})
    assert f == RatFun(num, q_int(4) * q_int(2))
    z = RatFun.from_qint_factored(Poly.zero(), {3: 2})
    assert z.is_zero() and z.den == Poly.one()


def test_prime_slice():
    sl, excluded = PrimeSlice.from_poly(Poly([Q(1, 5), 1]), [3, 5, 7], 1)
    assert excluded == [5]
    assert sl.primes() == [3, 7]
    tw, _ = PrimeSlice.from_poly(Poly([2]), [3, 7], 1)
    assert (sl * tw).primes() == [3, 7]
    assert (sl + sl) == sl * 2
    with pytest.raises(ValueError):
        PrimeSlice(2, {3: reduce_mod(Poly.one(), 3, 1)})
