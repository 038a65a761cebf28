"""Identity checkers: known instances, mutation sensitivity, cross-path
agreements."""

import pytest

from qmzv.algebra import eval_at_one_mod
from qmzv.harmonic import hsum_mod
from qmzv.indexes import Index, compositions, hoffman_dual, orbits
from qmzv.verify import (
    verify_bradley,
    verify_cyclic,
    verify_hat_duality,
    verify_q2_suite,
    verify_reversal,
    verify_theta_lemma,
    verify_weight_one,
)


def test_reversal_instances():
    assert verify_reversal(7, 2, Index((2, 1)), "plain").passed
    assert verify_reversal(5, 1, Index((1,)), "star").passed
    assert verify_reversal(2, 2, Index((2,)), "plain").passed  # p = 2 allowed here
    rep = verify_reversal(7, 2, Index((2, 1)), "plain", mutation=1)
    assert not rep.passed and not rep.residual.is_zero()


def test_duality_instances():
    assert verify_hat_duality(5, 2, Index((2, 1))).passed
    assert verify_hat_duality(7, 1, Index((3, 1))).passed
    assert not verify_hat_duality(5, 1, Index((2, 1)), mutation="self_dual").passed
    # (1) is self-dual, so that mutation is a fixed point; a coefficient bump
    # still breaks it
    assert verify_hat_duality(5, 1, Index((1,)), mutation="self_dual").passed
    assert not verify_hat_duality(5, 1, Index((1,)), mutation=0).passed
    with pytest.raises(ValueError):
        verify_hat_duality(2, 1, Index((1,)))


def test_duality_at_n1_is_mod_p_star_duality():
    # q^{p(p+1)/2} = 1 mod [p], so at n = 1 the checker is the star duality
    for p in (5, 7):
        for comp in [(2, 1), (1, 2), (3,)]:
            k = Index(comp)
            kd = hoffman_dual(k)
            direct = hsum_mod("star", p, 1, k) + hsum_mod("bar_star", p, 1, kd)
            assert direct.is_zero()
            assert verify_hat_duality(p, 1, k).passed


def test_hoffman_duality_at_slice():
    # composite: mod-[p] star duality + reversal reproduce the classical
    # duality Hstar(k) + Hstar(dual k) = 0 mod p under q -> 1
    for p in (5, 7, 11):
        for w in range(1, 5):
            for comp in compositions(w):
                k = Index(comp)
                lhs = eval_at_one_mod(hsum_mod("star", p, 1, k))
                rhs = eval_at_one_mod(hsum_mod("star", p, 1, hoffman_dual(k)))
                assert (lhs + rhs) % p == 0, (p, comp)


def test_cyclic_instances():
    assert verify_cyclic(7, 2, Index((2, 1)), False).passed
    assert verify_cyclic(5, 1, Index((1, 1)), True).passed  # degenerate k1 = 1
    assert verify_cyclic(5, 3, Index((2, 1)), True).passed
    rep = verify_cyclic(7, 2, Index((2, 1)), False, mutation="drop_one_minus_q_line")
    assert not rep.passed
    assert not verify_cyclic(7, 2, Index((2, 1)), True, mutation=0).passed


def test_cyclic_weight2_relation():
    # the k = d = 1 plain case is the relation 2 zeta(2) + zeta(1,1) + (1-q) zeta(1) = 0
    rep = verify_cyclic(11, 1, Index((1,)), False)
    assert rep.passed


def test_weight_one_instances():
    rep5 = verify_weight_one(5, 1)
    assert rep5.passed
    assert verify_weight_one(11, 3).passed
    assert not verify_weight_one(5, 2, mutation="half_to_third").passed
    assert not verify_weight_one(5, 1, mutation=0).passed
    with pytest.raises(ValueError):
        verify_weight_one(2, 1)


def test_weight_one_is_andrews_at_n1():
    # H_{p-1}(1;q) = (p-1)/2 (1-q) mod [p]
    from qmzv.algebra import Poly, reduce_mod
    from fractions import Fraction

    for p in (5, 7, 13):
        got = hsum_mod("plain", p, 1, Index((1,)))
        assert got == reduce_mod(Poly([Fraction(p - 1, 2), -Fraction(p - 1, 2)]), p, 1)


def test_q2_suite_instances_and_agreement():
    for p, comp in [(7, (2, 1)), (5, (1,)), (11, (3, 1)), (5, (2, 2))]:
        k = Index(comp)
        rep = verify_q2_suite(p, k)
        assert rep.passed, (p, comp)
        # two code paths: the suite's hand expansions agree with the generic
        # checkers at n = 2 (reversal up to the sign (-1)^wt)
        sign = (-1) ** k.weight
        generic_rev = verify_reversal(p, 2, k, "plain").residual
        assert rep.components[1].residual == generic_rev * sign
        generic_dual = verify_hat_duality(p, 2, k).residual
        assert rep.components[2].residual == generic_dual
    assert not verify_q2_suite(7, Index((2, 1)), mutation=0).passed


def test_q2_suite_agreement_under_matching_mutation():
    # bump the same coefficient (the [p] Hbarstar(1, dual k) term) through
    # both code paths; the nonzero residuals must coincide exactly
    for p, comp in [(5, (2, 1)), (7, (3,))]:
        k = Index(comp)
        generic = verify_hat_duality(p, 2, k, mutation=3)
        suite = verify_q2_suite(p, k, mutation=None)
        offset = suite.components[0].n_terms + suite.components[1].n_terms
        mutated = verify_q2_suite(p, k, mutation=offset + 4)
        assert not generic.passed and not mutated.passed
        assert mutated.components[2].residual == generic.residual


def test_bradley_instances():
    assert verify_bradley(3, Index((2,))).passed
    assert verify_bradley(1, Index((1,))).passed
    rep = verify_bradley(4, Index((2, 1)), mutation="self_dual")
    assert not rep.passed and not rep.residual.is_zero()
    for n in range(1, 7):
        for w in range(1, 4):
            for comp in compositions(w):
                assert verify_bradley(n, Index(comp)).passed, (n, comp)


def test_theta_lemma_instances():
    assert verify_theta_lemma(0, 3, 4).passed  # both sides identical at l = 0
    assert verify_theta_lemma(1, 2, 2).passed
    assert verify_theta_lemma(2, 1, 3).passed
    for l in range(4):
        for k in range(1, 4):
            for m in range(1, 5):
                assert verify_theta_lemma(l, k, m).passed, (l, k, m)
    assert not verify_theta_lemma(2, 2, 2, mutation=1).passed


def test_mutation_sensitivity_sampled():
    # at least 3 distinct single-coefficient mutations fail per checker
    cases = {
        "reversal": [verify_reversal(5, 2, Index((2, 1)), "plain", mutation=i) for i in range(3)],
        "duality": [verify_hat_duality(5, 2, Index((2, 1)), mutation=i) for i in range(3)],
        "cyclic": [verify_cyclic(5, 2, Index((2, 1)), True, mutation=i) for i in range(3)],
        "weight_one": [verify_weight_one(7, 3, mutation=i) for i in range(3)],
        "q2": [verify_q2_suite(7, Index((2, 1)), mutation=i) for i in (0, 3, 7)],
        "theta": [verify_theta_lemma(2, 2, 2, mutation=i) for i in range(3)],
    }
    for name, reports in cases.items():
        for rep in reports:
            assert not rep.passed, name
            res = rep.residual
            assert not res.is_zero(), name


def test_report_serialization():
    rep = verify_weight_one(5, 1)
    d = rep.to_json_dict()
    assert d["pass"] is True and d["identity"] == "weight_one"
    rep2 = verify_bradley(2, Index((1,)))
    assert "num" in rep2.to_json_dict()["residual"]


def test_orbit_argument_forms():
    orb = orbits(3, 2)[0]
    assert verify_cyclic(5, 1, orb, False).passed
    assert verify_cyclic(5, 1, Index((1, 2)), False).passed
