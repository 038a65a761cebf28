"""Multiple harmonic q-sums.

Two computation paths:

* ``hsum_mod`` -- the sum truncated at m = p-1 and reduced in
  Z_(p)[q]/([p]^n), computed by one sweep m = 1..p-1 that keeps a partial
  accumulator per index suffix (cost O(p d) ring operations).  The strict
  and non-strict variants share the sweep and differ only in whether the
  deeper accumulator is read before or after its update at the current m.

* ``hsum_exact`` -- the exact rational function in q for small m, kept over
  a factored denominator (a product of q-integers) so no polynomial gcd is
  ever taken inside the recursion.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import CycModElement, Poly, RatFun, q_int
from .engine import get_engine
from .indexes import ExpVector, Index, variant_exponents, variant_is_star

DEFAULT_EXACT_BOUND = 60

_MOD_CACHE: dict[tuple, tuple[int, ...]] = {}


def hsum_residue(variant: str, p: int, n: int, k: Index, s: ExpVector | None = None) -> list[int]:
    """Integer residue coefficients of the variant sum modulo [p]^n.

    Shared cache; values are deterministic, so concurrent insert-or-read is
    harmless.
    """
    es = variant_exponents(variant, k, s)
    star = variant_is_star(variant)
    key = (p, n, k.parts, es, star)
    got = _MOD_CACHE.get(key)
    if got is None:
        eng = get_engine(p, n)
        got = tuple(eng.hsum(k.parts, es, star))
        _MOD_CACHE[key] = got
    return list(got)


def hsum_mod(variant: str, p: int, n: int, k: Index, s: ExpVector | None = None) -> CycModElement:
    """H_{p-1} of the given variant, reduced modulo [p]^n."""
    coeffs = hsum_residue(variant, p, n, k, s)
    return CycModElement(p, n, Poly(coeffs), _reduced=True)


def rational_hsum(m: int, k: Index, star: bool = False) -> Fraction:
    """The classical rational multiple harmonic sum (the q -> 1 value),
    computed independently of the q-machinery; test oracle."""
    d = k.depth
    if d == 0:
        return Fraction(1)
    acc = [Fraction(0)] * d + [Fraction(1)]
    for mu in range(1, m + 1):
        terms = [Fraction(1, mu**ka) for ka in k.parts]
        if star:
            for a in range(d - 1, -1, -1):
                acc[a] += terms[a] * acc[a + 1]
        else:
            acc = [acc[a] + terms[a] * acc[a + 1] for a in range(d)] + [Fraction(1)]
    return acc[0]


class FactoredRatio:
    """num / prod_m [m]^{e_m} without gcd normalization.

    Addition aligns the factored denominators by exponent maxima; the zero
    test is exact (numerator zero), so identity checking never needs a gcd.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping[int, int] | None = None):
        den = {m: e for m, e in (den or {}).items() if e}
        if any(e < 0 or m < 1 for m, e in den.items()):
            raise ValueError("bad denominator factor")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den if not num.is_zero() else {})

    def __setattr__(self, *a):
        raise AttributeError("FactoredRatio is immutable")

    @staticmethod
    def zero() -> "FactoredRatio":
        return FactoredRatio(Poly.zero())

    @staticmethod
    def one() -> "FactoredRatio":
        return FactoredRatio(Poly.one())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _adjusted(self, target: Mapping[int, int]) -> Poly:
        # assemble the whole adjustment factor first: one large multiply
        # instead of one per q-integer
        factor = None
        for m, e in target.items():
            diff = e - self.den.get(m, 0)
            if diff < 0:
                raise ValueError("target denominator too small")
            if diff:
                piece = q_int(m) ** diff
                factor = piece if factor is None else factor * piece
        return self.num if factor is None else self.num * factor

    def __add__(self, other: "FactoredRatio") -> "FactoredRatio":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        target = dict(self.den)
        for m, e in other.den.items():
            target[m] = max(target.get(m, 0), e)
        return FactoredRatio(self._adjusted(target) + other._adjusted(target), target)

    def __sub__(self, other: "FactoredRatio") -> "FactoredRatio":
        return self + FactoredRatio(-other.num, other.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return FactoredRatio(self.num * other, self.den)
        den = dict(self.den)
        for m, e in other.den.items():
            den[m] = den.get(m, 0) + e
        return FactoredRatio(self.num * other.num, den)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FactoredRatio):
            return NotImplemented
        return (self - other).is_zero()

    def to_ratfun(self) -> RatFun:
        return RatFun.from_qint_factored(self.num, self.den)

    def __repr__(self):
        return f"FactoredRatio({self.num!r}, den={self.den})"


def _exact_sweep(
    m: int,
    ks: Sequence[int],
    es: Sequence[int],
    star: bool,
    collect: Sequence[int] | None = None,
) -> dict[int, FactoredRatio]:
    """Exact sum values H_mu for every mu in `collect` (default: just m).

    Accumulators hold numerators over explicit q-integer product
    denominators, so additions never form a gcd.  For strict sums the
    shared denominator exponent is max k_a (a chain visits each mu at most
    once); for star sums level a carries the suffix weight (a chain may sit
    at mu through several consecutive positions).
    """
    wanted = sorted(set(collect if collect is not None else [m]))
    if wanted and wanted[-1] > m:
        raise ValueError("collect points beyond m")
    d = len(ks)
    if d == 0:
        return {mu: FactoredRatio.one() for mu in wanted}
    out: dict[int, FactoredRatio] = {}
    if 0 in wanted:
        out[0] = FactoredRatio.zero()
    S: list[Poly] = [Poly.zero()] * d
    if star:
        K = [sum(ks[a:]) for a in range(d + 1)]  # suffix weights, K[d] = 0
        R = [Poly.one()] * d  # R[a] = prod_{nu<mu} [nu]^{k_a}
        for mu in range(1, m + 1):
            for a in range(d - 1, -1, -1):
                deeper = S[a + 1] if a + 1 < d else Poly.one()
                S[a] = S[a] * (q_int(mu) ** K[a]) + (Poly.q_power(es[a] * mu) * deeper) * R[a]
            R = [R[a] * (q_int(mu) ** ks[a]) for a in range(d)]
            if mu in wanted:
                out[mu] = FactoredRatio(S[0], {nu: K[0] for nu in range(1, mu + 1)})
    else:
        M = max(ks)
        P = Poly.one()  # numerator of the constant 1 over prod_{nu<mu} [nu]^M
        for mu in range(1, m + 1):
            qm = q_int(mu) ** M
            newS = []
            for a in range(d):
                term = Poly.q_power(es[a] * mu) * (q_int(mu) ** (M - ks[a]))
                deeper = S[a + 1] if a + 1 < d else P
                newS.append(S[a] * qm + term * deeper)
            S = newS
            P = P * qm
            if mu in wanted:
                out[mu] = FactoredRatio(S[0], {nu: M for nu in range(1, mu + 1)})
    return out


def hsum_exact_factored(
    variant: str,
    m: int,
    k: Index,
    s: ExpVector | None = None,
    max_m: int = DEFAULT_EXACT_BOUND,
) -> FactoredRatio:
    """Exact variant sum as a factored rational function."""
    if m < 1:
        raise ValueError("m >= 1 required")
    if m > max_m:
        raise ValueError(f"m = {m} exceeds the configured bound {max_m}")
    es = variant_exponents(variant, k, s)
    return _exact_sweep(m, k.parts, es, variant_is_star(variant))[m]


def hsum_exact(
    variant: str,
    m: int,
    k: Index,
    s: ExpVector | None = None,
    max_m: int = DEFAULT_EXACT_BOUND,
) -> RatFun:
    """Exact variant sum as a normalized rational function in q."""
    return hsum_exact_factored(variant, m, k, s, max_m).to_ratfun()


def hsum_exact_prefixes(
    variant: str,
    m: int,
    k: Index,
    s: ExpVector | None = None,
    max_m: int = DEFAULT_EXACT_BOUND,
) -> dict[int, FactoredRatio]:
    """Exact values H_mu for all mu <= m from a single sweep."""
    if m > max_m:
        raise ValueError(f"m = {m} exceeds the configured bound {max_m}")
    es = variant_exponents(variant, k, s)
    return _exact_sweep(m, k.parts, es, variant_is_star(variant), collect=range(m + 1))


def hsum_exact_sum(m: int, terms: Mapping[tuple[int, ...], Poly], variant: str = "plain",
                   max_m: int = DEFAULT_EXACT_BOUND) -> FactoredRatio:
    """Evaluate a Q[q]-linear combination of words: sum_w c_w(q) H_m(w).

    This extends the exact sum linearly; it is the carrier of the product
    evaluation identities.
    """
    total = FactoredRatio.zero()
    for word, coeff in terms.items():
        if coeff.is_zero():
            continue
        total = total + hsum_exact_factored(variant, m, Index(word), max_m=max_m) * coeff
    return total
