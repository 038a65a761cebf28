"""Exact workbench for multiple harmonic q-sums: cyclotomic residue
arithmetic, identity verification, Q-linear relation mining over prime sets,
and arbitrary-precision root-of-unity limits."""

from .algebra import (
    CycModElement,
    Poly,
    PrimeSlice,
    RatFun,
    Rational,
    cyclotomic,
    eval_at_one_mod,
    inv_qint_closed_form,
    q_binom,
    q_int,
    reduce_mod,
)
from .errors import ExcludedPrimeError, NonInvertibleError, PrecisionError, QmzvError
from .harmonic import hsum_exact, hsum_exact_factored, hsum_mod, rational_hsum
from .indexes import ExpVector, Index, b_binom, hoffman_dual, orbits, star_decompose
from .limits import TruncatedSeries, alpha_direct, alpha_via_formula, convergence_report, qm_series, zsum
from .miner import (
    DimReport,
    GeneratorDescriptor,
    RelationCandidate,
    VectorCache,
    default_prime_set,
    dim_tilde,
    find_relations,
    gens,
    membership,
    vectorize,
)
from .verify import (
    VerifyReport,
    verify_bradley,
    verify_cyclic,
    verify_hat_duality,
    verify_q2_suite,
    verify_reversal,
    verify_theta_lemma,
    verify_weight_one,
)
from .words import PolySum, dim_word_quotient, q_stuffle, relation_space, stuffle, stuffle_star

__version__ = "0.1.0"
