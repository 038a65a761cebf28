"""Mechanized checkers for the identity families of multiple harmonic
q-sums modulo [p]^n, plus two exact rational-function lemmas.

Every checker assembles its identity as a finite list of terms
(rational coefficient) x (ring element), so that

* the report's residual is the exact defect (zero iff the identity holds),
* single-coefficient mutations are uniform: ``mutation=i`` bumps the i-th
  coefficient by 1, which must break the identity.

Infinite geometric layers sum_{l>=0} (...)^l are truncated at l < n since
[p]^n = 0; each checker documents its truncation inline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .algebra import CycModElement, Poly, RatFun
from .engine import get_engine
from .errors import ExcludedPrimeError
from .harmonic import FactoredRatio, hsum_exact_prefixes, hsum_residue
from .indexes import ExpVector, Index, hoffman_dual, b_binom, nonneg_vectors, orbits, stirling2

Term = tuple[Fraction, list[int]]


@dataclass
class VerifyReport:
    identity: str
    params: dict
    passed: bool
    residual: object  # CycModElement or RatFun, exactly zero iff passed
    n_terms: int = 0
    components: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        res = self.residual
        if isinstance(res, CycModElement):
            residual = {"p": res.p, "n": res.n, "coeffs": res.residue.to_coeff_strings()}
        elif isinstance(res, RatFun):
            residual = {"num": res.num.to_coeff_strings(), "den": res.den.to_coeff_strings()}
        else:
            residual = str(res)
        return {
            "identity": self.identity,
            "params": {k: str(v) for k, v in self.params.items()},
            "pass": self.passed,
            "n_terms": self.n_terms,
            "residual": residual,
        }


def _combine(p: int, n: int, terms: Sequence[Term], mutation) -> CycModElement:
    coeffs = [c for c, _ in terms]
    if mutation is not None:
        i = int(mutation)
        if not 0 <= i < len(terms):
            raise ValueError("mutation index out of range")
        coeffs[i] = coeffs[i] + 1
    eng = get_engine(p, n)
    acc = [Fraction(0)] * eng.cap
    for c, elem in zip(coeffs, terms):
        if c == 0:
            continue
        if c.denominator % p == 0:
            raise ExcludedPrimeError(p)
        for i, x in enumerate(elem[1]):
            if x:
                acc[i] += c * x
    return CycModElement(p, n, Poly(acc), _reduced=True)


def _report(identity: str, params: dict, p: int, n: int, terms: list[Term], mutation=None) -> VerifyReport:
    residual = _combine(p, n, terms, mutation)
    return VerifyReport(identity, params, residual.is_zero(), residual, n_terms=len(terms))


def _hres(variant: str, p: int, n: int, k: Index, s: ExpVector | None = None) -> list[int]:
    return hsum_residue(variant, p, n, k, s)


def _ones_prefix(l: int, k: Index) -> Index:
    return Index((1,) * l + k.parts)


# ---------------------------------------------------------------------------
# reversal:  Hbar(k) = (-q^{-p})^{wt} (q^p)^{dep}
#                      sum_{wt(l) < n} (q^{-p}[p])^{wt(l)} b(k;l) H(rev(k+l))
# ---------------------------------------------------------------------------
def verify_reversal(p: int, n: int, k: Index, variant: str = "plain", mutation=None) -> VerifyReport:
    if k.depth == 0:
        raise ValueError("nonempty index required")
    if variant not in ("plain", "star"):
        raise ValueError("variant must be plain or star")
    eng = get_engine(p, n)
    bar = "bar_star" if variant == "star" else "bar"
    wt, dep = k.weight, k.depth
    pref = eng.mul(eng.pow(eng.q_inv_p(), wt), eng.pow(eng.q_p(), dep))
    sign = (-1) ** wt
    base = eng.mul(eng.q_inv_p(), eng.qint_p())  # q^{-p}[p]

    terms: list[Term] = [(Fraction(1), _hres(bar, p, n, k))]
    for total in range(n):
        layer = eng.pow(base, total)
        for l in nonneg_vectors(dep, total):
            rev = Index(tuple(a + b for a, b in zip(k.parts, l))[::-1])
            elem = eng.mul(eng.mul(pref, layer), _hres(variant, p, n, rev))
            terms.append((Fraction(-sign * b_binom(k, l)), elem))
    return _report(
        "reversal", {"p": p, "n": n, "index": k, "variant": variant}, p, n, terms, mutation
    )


# ---------------------------------------------------------------------------
# duality:  q^{p(p+1)/2} sum_{l<n} [p]^l Hstar({1}^l, k)
#           + sum_{l<n} (q^{-p}[p])^l Hbarstar({1}^l, dual k)  =  0   (odd p)
# ---------------------------------------------------------------------------
def verify_hat_duality(p: int, n: int, k: Index, mutation=None) -> VerifyReport:
    if p == 2:
        raise ValueError("duality checker is restricted to odd primes")
    if k.depth == 0:
        raise ValueError("nonempty index required")
    eng = get_engine(p, n)
    qpp = eng.q_p_binomial_power((p + 1) // 2)  # q^{p(p+1)/2} truncated
    base = eng.mul(eng.q_inv_p(), eng.qint_p())
    kdual = hoffman_dual(k)
    if isinstance(mutation, str):
        if mutation != "self_dual":
            raise ValueError(f"unknown mutation {mutation!r}")
        kdual, mutation = k, None

    terms: list[Term] = []
    for l in range(n):
        elem = eng.mul(eng.mul(qpp, eng.pow(eng.qint_p(), l)), _hres("star", p, n, _ones_prefix(l, k)))
        terms.append((Fraction(1), elem))
    for l in range(n):
        elem = eng.mul(eng.pow(base, l), _hres("bar_star", p, n, _ones_prefix(l, kdual)))
        terms.append((Fraction(1), elem))
    return _report("duality", {"p": p, "n": n, "index": k}, p, n, terms, mutation)


# ---------------------------------------------------------------------------
# cyclic sums over an orbit of rotations
# ---------------------------------------------------------------------------
def _orbit_of(k: Index) -> list[Index]:
    for orbit in orbits(k.weight, k.depth):
        if k in orbit:
            return orbit
    raise AssertionError("unreachable")


def verify_cyclic(p: int, n: int, orbit: Sequence[Index] | Index, starred: bool, mutation=None) -> VerifyReport:
    """Cyclic sum identity over one rotation orbit.

    The non-star form carries a (1-q)-weighted line.  The star form carries
    depth-1 corrections |orbit| C(d,j) (k-j)/d (1-q)^j Hstar(k+1-j) for
    j = 1..d: that coefficient follows from expanding the telescoping sums
    q^{(k-d)m}/[m]^k and q^{(k-d)m}/[m]^{k+1} in the binomial basis
    ((1-q^m) + q^m)^{d-1 or d} and regrouping; the alternative (k/j - 1)
    normalization agrees only at j = d and fails the residual check.
    """
    orbit = _orbit_of(orbit) if isinstance(orbit, Index) else list(orbit)
    k = orbit[0].weight
    d = orbit[0].depth
    if any(x.weight != k or x.depth != d for x in orbit):
        raise ValueError("orbit members must share weight and depth")
    eng = get_engine(p, n)
    base = eng.mul(eng.q_inv_p(), eng.qint_p())
    variant = "star" if starred else "plain"
    drop_line = False
    if isinstance(mutation, str):
        if mutation != "drop_one_minus_q_line":
            raise ValueError(f"unknown mutation {mutation!r}")
        drop_line, mutation = True, None

    terms: list[Term] = []
    for kk in orbit:
        k1, rest = kk.parts[0], kk.parts[1:]
        for s in range(k1 - 1):
            terms.append((Fraction(1), _hres(variant, p, n, Index((k1 - s,) + rest + (s + 1,)))))
    if starred:
        size = len(orbit)
        terms.append((Fraction(-k * size, d), _hres("star", p, n, Index((k + 1,)))))
        for j in range(1, d + 1):
            if k + 1 - j < 1:
                continue
            coeff = Fraction(-size * comb(d, j) * (k - j), d)
            elem = eng.mul(eng.pow(eng.one_minus_q(), j), _hres("star", p, n, Index((k + 1 - j,))))
            terms.append((coeff, elem))
        for kk in orbit:
            k1, rest = kk.parts[0], kk.parts[1:]
            for l in range(n):
                elem = eng.mul(eng.pow(base, l), _hres("star", p, n, Index(rest + (k1, l + 1))))
                terms.append((Fraction(-1), elem))
    else:
        for kk in orbit:
            k1, rest = kk.parts[0], kk.parts[1:]
            terms.append((Fraction(-1), _hres("plain", p, n, Index((k1 + 1,) + rest))))
            for l in range(n):
                layer = eng.pow(base, l)
                terms.append((Fraction(-1), eng.mul(layer, _hres("plain", p, n, Index(rest + (k1, l + 1))))))
                terms.append((Fraction(-1), eng.mul(layer, _hres("plain", p, n, Index(rest + (k1 + l + 1,))))))
                if not drop_line:
                    elem = eng.mul(eng.mul(layer, eng.one_minus_q()), _hres("plain", p, n, Index(rest + (k1 + l,))))
                    terms.append((Fraction(-1), elem))
    return _report(
        "cyclic",
        {"p": p, "n": n, "orbit": [str(x) for x in orbit], "starred": starred},
        p,
        n,
        terms,
        mutation,
    )


# ---------------------------------------------------------------------------
# weight one:  H(1) - (p-1)/2 (1-q) + 1/2 sum_{1<=l<n} [p]^l Hbar(1+l) = 0
# ---------------------------------------------------------------------------
def verify_weight_one(p: int, n: int, mutation=None) -> VerifyReport:
    if p < 3:
        raise ValueError("p >= 3 required (the coefficient (p-1)/2 needs 1/2)")
    eng = get_engine(p, n)
    half = Fraction(1, 2)
    if isinstance(mutation, str):
        if mutation != "half_to_third":
            raise ValueError(f"unknown mutation {mutation!r}")
        half, mutation = Fraction(1, 3), None
    terms: list[Term] = [
        (Fraction(1), _hres("plain", p, n, Index((1,)))),
        (Fraction(-(p - 1), 2), eng.one_minus_q()),
    ]
    for l in range(1, n):
        terms.append((half, eng.mul(eng.pow(eng.qint_p(), l), _hres("bar", p, n, Index((1 + l,))))))
    return _report("weight_one", {"p": p, "n": n}, p, n, terms, mutation)


# ---------------------------------------------------------------------------
# mod-[p]^2 suite: hand-expanded n = 2 truncations
# ---------------------------------------------------------------------------
def verify_q2_suite(p: int, k: Index, mutation=None) -> VerifyReport:
    """Three mod-[p]^2 identities, written out explicitly at n = 2:

    (i)   H(1) - (p-1)/2 (1-q) + 1/2 [p] Hbar(2) = 0
    (ii)  (-1)^wt Hbar(k) - (1 + (wt-dep)(1-q)[p]) H(rev k)
          - [p] sum_{wt(l)=1} b(k;l) H(rev(k+l)) = 0
    (iii) (1 - (p+1)/2 (1-q)[p]) (Hstar(k) + [p] Hstar(1,k))
          + Hbarstar(dual k) + [p] Hbarstar(1, dual k) = 0

    These must agree with the generic reversal/duality checkers at n = 2;
    the agreement is itself a test.  A mutation index applies to the
    concatenated term list (i) + (ii) + (iii).
    """
    if p == 2:
        raise ValueError("odd primes only")
    if k.depth == 0:
        raise ValueError("nonempty index required")
    n = 2
    eng = get_engine(p, n)
    u = eng.mul(eng.one_minus_q(), eng.qint_p())  # (1-q)[p]
    wt, dep = k.weight, k.depth
    sign = (-1) ** wt
    rev = k.reversed_()

    terms1: list[Term] = [
        (Fraction(1), _hres("plain", p, n, Index((1,)))),
        (Fraction(-(p - 1), 2), eng.one_minus_q()),
        (Fraction(1, 2), eng.mul(eng.qint_p(), _hres("bar", p, n, Index((2,))))),
    ]
    terms2: list[Term] = [
        (Fraction(sign), _hres("bar", p, n, k)),
        (Fraction(-1), _hres("plain", p, n, rev)),
        (Fraction(-(wt - dep)), eng.mul(u, _hres("plain", p, n, rev))),
    ]
    for l in nonneg_vectors(dep, 1):
        revl = Index(tuple(a + b for a, b in zip(k.parts, l))[::-1])
        terms2.append((Fraction(-b_binom(k, l)), eng.mul(eng.qint_p(), _hres("plain", p, n, revl))))
    kdual = hoffman_dual(k)
    terms3: list[Term] = [
        (Fraction(1), _hres("star", p, n, k)),
        (Fraction(1), eng.mul(eng.qint_p(), _hres("star", p, n, _ones_prefix(1, k)))),
        (Fraction(-(p + 1), 2), eng.mul(u, _hres("star", p, n, k))),
        (Fraction(1), _hres("bar_star", p, n, kdual)),
        (Fraction(1), eng.mul(eng.qint_p(), _hres("bar_star", p, n, _ones_prefix(1, kdual)))),
    ]

    blocks = [("q2_weight_one", terms1), ("q2_reversal", terms2), ("q2_duality", terms3)]
    components = []
    offset = 0
    for name, terms in blocks:
        local = None
        if mutation is not None:
            i = int(mutation)
            if offset <= i < offset + len(terms):
                local = i - offset
        components.append(_report(name, {"p": p, "index": k}, p, n, terms, local))
        offset += len(terms)
    passed = all(c.passed for c in components)
    residual = next((c.residual for c in components if not c.passed), components[0].residual)
    return VerifyReport(
        "q2_suite", {"p": p, "index": k}, passed, residual,
        n_terms=offset, components=components,
    )


# ---------------------------------------------------------------------------
# finite-m duality identity (exact rational functions, q-binomial weights)
# ---------------------------------------------------------------------------
def verify_bradley(n_upper: int, k: Index, mutation=None) -> VerifyReport:
    """Exact finite-m duality:

    sum_{n >= m1 >= ... >= md > 0} (-1)^{m1-1} q^{m1(m1-1)/2}
        qbinom(n-1, m1-1) prod q^{(k_a-1) m_a}/[m_a]^{k_a}
      = 1/[n]^{k'_1} * sum_{n >= m2 >= ... >= ms > 0} prod q^{m_a}/[m_a]^{k'_a}

    with k' the Hoffman dual of k and m1 = n fixed on the right.
    """
    from .algebra import q_binom

    if k.depth == 0:
        raise ValueError("nonempty index required")
    if n_upper < 1:
        raise ValueError("n_upper >= 1 required")
    kdual = hoffman_dual(k)
    if isinstance(mutation, str):
        if mutation != "self_dual":
            raise ValueError(f"unknown mutation {mutation!r}")
        kdual, mutation = k, None
    k1, rest = k.parts[0], Index(k.parts[1:])
    suffix = hsum_exact_prefixes("star", n_upper, rest) if rest.depth else None
    lhs = FactoredRatio.zero()
    for m1 in range(1, n_upper + 1):
        pref = Poly.q_power(m1 * (m1 - 1) // 2) * q_binom(n_upper - 1, m1 - 1) * ((-1) ** (m1 - 1))
        head = FactoredRatio(pref * Poly.q_power((k1 - 1) * m1), {m1: k1})
        inner = suffix[m1] if suffix is not None else FactoredRatio.one()
        lhs = lhs + head * inner
    d1, drest = kdual.parts[0], Index(kdual.parts[1:])
    inner = (
        hsum_exact_prefixes("bar_star", n_upper, drest)[n_upper]
        if drest.depth
        else FactoredRatio.one()
    )
    rhs = FactoredRatio(Poly.one(), {n_upper: d1}) * inner
    residual = lhs - rhs
    if mutation is not None:
        # bump the m1 = mutation+1 prefactor of the left side by +1
        m1 = int(mutation) + 1
        if not 1 <= m1 <= n_upper:
            raise ValueError("mutation index out of range")
        head = FactoredRatio(Poly.q_power((k1 - 1) * m1), {m1: k1})
        inner = suffix[m1] if suffix is not None else FactoredRatio.one()
        residual = residual + head * inner
    rf = residual.to_ratfun()
    return VerifyReport(
        "bradley", {"n_upper": n_upper, "index": k}, rf.is_zero(), rf, n_terms=n_upper
    )


# ---------------------------------------------------------------------------
# theta-derivative lemma (exact rational functions)
# ---------------------------------------------------------------------------
def theta_coefficient(s: int, l: int, k: int) -> Fraction:
    """T_{s,l}(k) = (s!/l!) sum_{a=s}^{l} C(l,a) S2(a,s) (k-1)^{l-a}."""
    from math import factorial

    total = 0
    for a in range(s, l + 1):
        base = 1 if l == a else (k - 1) ** (l - a)
        total += comb(l, a) * stirling2(a, s) * base
    return Fraction(factorial(s), factorial(l)) * total


def verify_theta_lemma(l: int, k: int, m: int, mutation=None) -> VerifyReport:
    """(1/l!) theta^l [ q^{(k-1)m} / (1-q^m)^k ]
       = m^l sum_{s=0}^{l} T_{s,l}(k) C(s+k-1, s) q^{(k+s-1)m} / (1-q^m)^{k+s}
    with theta = q d/dq applied symbolically."""
    from math import factorial

    if l < 0 or k < 1 or m < 1:
        raise ValueError("need l >= 0, k >= 1, m >= 1")
    one_minus_qm = Poly.one() - Poly.q_power(m)
    lhs = RatFun(Poly.q_power((k - 1) * m), one_minus_qm**k)
    for _ in range(l):
        lhs = lhs.theta()
    lhs = lhs * Fraction(1, factorial(l))
    coeffs = [theta_coefficient(s, l, k) * comb(s + k - 1, s) * m**l for s in range(l + 1)]
    if mutation is not None:
        i = int(mutation)
        if not 0 <= i < len(coeffs):
            raise ValueError("mutation index out of range")
        coeffs[i] = coeffs[i] + 1
    rhs = RatFun(Poly.zero())
    for s, c in enumerate(coeffs):
        rhs = rhs + RatFun(Poly.q_power((k + s - 1) * m), one_minus_qm ** (k + s)) * c
    residual = lhs - rhs
    return VerifyReport(
        "theta_lemma", {"l": l, "k": k, "m": m}, residual.is_zero(), residual, n_terms=l + 1
    )


# ---------------------------------------------------------------------------
# grid sweep
# ---------------------------------------------------------------------------
def indices_of_weight_up_to(max_weight: int) -> list[Index]:
    from .indexes import compositions

    out = []
    for w in range(1, max_weight + 1):
        out.extend(Index(c) for c in compositions(w))
    return out


def run_grid(
    primes: Sequence[int] = (3, 5, 7, 11, 13),
    ns: Sequence[int] = (1, 2, 3),
    max_weight: int = 5,
) -> tuple[list[VerifyReport], list[dict]]:
    """All mod-[p]^n checkers over the grid.  Excluded primes (a checker
    coefficient with p in its denominator) are reported as skips rather than
    silently dropped."""
    reports: list[VerifyReport] = []
    skipped: list[dict] = []
    idxs = indices_of_weight_up_to(max_weight)
    for p in primes:
        for n in ns:
            for k in idxs:
                jobs = [("reversal", lambda: verify_reversal(p, n, k, "plain")),
                        ("reversal_star", lambda: verify_reversal(p, n, k, "star"))]
                if p != 2:
                    jobs.append(("duality", lambda: verify_hat_duality(p, n, k)))
                for name, job in jobs:
                    try:
                        reports.append(job())
                    except ExcludedPrimeError as exc:
                        skipped.append({"identity": name, "p": p, "n": n, "index": str(k), "reason": str(exc)})
            if p != 2:
                try:
                    reports.append(verify_weight_one(p, n))
                except ExcludedPrimeError as exc:
                    skipped.append({"identity": "weight_one", "p": p, "n": n, "reason": str(exc)})
            for kw in range(1, max_weight + 1):
                for d in range(1, kw + 1):
                    for orbit in orbits(kw, d):
                        for starred in (False, True):
                            try:
                                reports.append(verify_cyclic(p, n, orbit, starred))
                            except ExcludedPrimeError as exc:
                                skipped.append({
                                    "identity": "cyclic", "p": p, "n": n,
                                    "orbit": str(orbit[0]), "starred": starred,
                                    "reason": str(exc),
                                })
        if p != 2:
            for k in idxs:
                try:
                    reports.append(verify_q2_suite(p, k))
                except ExcludedPrimeError as exc:
                    skipped.append({"identity": "q2_suite", "p": p, "index": str(k), "reason": str(exc)})
    return reports, skipped
