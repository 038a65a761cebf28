"""Integer-arithmetic engine for Z_(p)[q]/([p]^n).

Residues produced by harmonic-sum recursions have integer coefficients (the
closed-form q-integer inverses are integer polynomials), so the hot paths
run on plain int lists.  Reduction modulo [p]^n uses the closed-form power
series of 1/[p]^n, which turns remaindering into two Kronecker products.

Public wrappers in :mod:`qmzv.harmonic` convert results into
:class:`qmzv.algebra.CycModElement`; this module is internal.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

from .algebra import int_poly_mul

IntPoly = list[int]

# letter of a harmonic pattern: (denominator power k, numerator exponent e)
Letter = tuple[int, int]
Pattern = tuple[Letter, ...]


def _strip(a: IntPoly) -> IntPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


class Engine:
    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.cap = n * (p - 1)  # residues live in degree < cap
        mod = [1]
        for _ in range(n):
            mod = int_poly_mul(mod, [1] * p)
        self.modulus = mod
        # power series of 1/[p]^n = (1-q)^n * sum_j C(j+n-1, n-1) q^{pj}
        K = self.cap + 2
        inv = [0] * K
        binom_1mq = [(-1) ** i * comb(n, i) for i in range(n + 1)]
        for j in range(K // p + 1):
            c = comb(j + n - 1, n - 1)
            for i, b in enumerate(binom_1mq):
                if p * j + i < K:
                    inv[p * j + i] += c * b
        self._inv_series = inv
        self._inv_series_len = K
        self._qpow_cache: dict[int, IntPoly] = {}
        self._invpow_cache: dict[tuple[int, int], IntPoly] = {}
        self.inv_qint = [None] + [self._inv_qint_closed(m) for m in range(1, p)]

    # -- ring operations on int lists -----------------------------------
    def red(self, a: Sequence[int]) -> IntPoly:
        a = _strip(list(a))
        if len(a) <= self.cap:
            return a
        if self.n == 1:
            p = self.p
            folded = [0] * p
            for e, c in enumerate(a):
                if c:
                    folded[e % p] += c
            top = folded[p - 1]
            if top:
                folded = [x - top for x in folded]
            folded.pop()
            return _strip(folded)
        k = len(a) - self.cap  # number of quotient coefficients
        inv = self._inv_series_upto(k)
        ra = a[::-1][:k]
        quo = int_poly_mul(ra, inv[:k])[:k]
        quo += [0] * (k - len(quo))
        quo.reverse()
        qm = int_poly_mul(quo, self.modulus)
        out = [a[i] - (qm[i] if i < len(qm) else 0) for i in range(self.cap)]
        return _strip(out)

    def _inv_series_upto(self, K: int) -> IntPoly:
        if self._inv_series_len < K:
            p, n = self.p, self.n
            inv = [0] * K
            binom_1mq = [(-1) ** i * comb(n, i) for i in range(n + 1)]
            for j in range(K // p + 1):
                c = comb(j + n - 1, n - 1)
                for i, b in enumerate(binom_1mq):
                    if p * j + i < K:
                        inv[p * j + i] += c * b
            self._inv_series = inv
            self._inv_series_len = K
        return self._inv_series

    def mul(self, a: Sequence[int], b: Sequence[int]) -> IntPoly:
        if not a or not b:
            return []
        return self.red(int_poly_mul(a, b))

    @staticmethod
    def add(a: Sequence[int], b: Sequence[int]) -> IntPoly:
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] += y
        return _strip(out)

    @staticmethod
    def sub(a: Sequence[int], b: Sequence[int]) -> IntPoly:
        out = list(a) + [0] * max(0, len(b) - len(a))
        for i, y in enumerate(b):
            out[i] -= y
        return _strip(out)

    @staticmethod
    def scale(a: Sequence[int], c: int) -> IntPoly:
        return [x * c for x in a] if c else []

    def pow(self, a: Sequence[int], e: int) -> IntPoly:
        out, base = [1], list(a)
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    # -- distinguished elements ------------------------------------------
    def qpow(self, e: int) -> IntPoly:
        """q^e reduced, via q^p = 1 - (1-q)[p]."""
        if e < 0:
            x = e % self.p  # 0 <= x < p and e = x - t*p with t >= 0
            t = (x - e) // self.p
            return self.mul(self.qpow(x), self.pow(self.q_inv_p(), t))
        got = self._qpow_cache.get(e)
        if got is None:
            r, s = e % self.p, e // self.p
            base = self.red([0] * r + [1])
            if s:
                u = self.u()
                acc, term = [1], [1]
                for j in range(1, self.n):
                    term = self.mul(term, u)
                    acc = self.add(acc, self.scale(term, (-1) ** j * comb(s, j)))
                base = self.mul(base, acc)
            got = self._qpow_cache[e] = base
        return got

    def u(self) -> IntPoly:
        """(1-q)[p] reduced; q^p = 1 - u and u^n = 0."""
        if not hasattr(self, "_u"):
            self._u = self.red(int_poly_mul([1, -1], [1] * self.p))
        return self._u

    def q_p(self) -> IntPoly:
        return self.sub([1], self.u())

    def q_inv_p(self) -> IntPoly:
        """q^{-p} = sum_{l<n} u^l."""
        if not hasattr(self, "_qinvp"):
            acc, term = [1], [1]
            for _ in range(1, self.n):
                term = self.mul(term, self.u())
                acc = self.add(acc, term)
            self._qinvp = acc
        return self._qinvp

    def qint_p(self) -> IntPoly:
        if not hasattr(self, "_qintp"):
            self._qintp = self.red([1] * self.p)
        return self._qintp

    def one_minus_q(self) -> IntPoly:
        return self.red([1, -1])

    def q_p_binomial_power(self, s: int) -> IntPoly:
        """q^{ps} = (1-u)^s truncated at u^n; s may be any nonnegative integer."""
        acc, term = [1], [1]
        for j in range(1, self.n):
            term = self.mul(term, self.u())
            acc = self.add(acc, self.scale(term, (-1) ** j * comb(s, j)))
        return acc

    def _inv_qint_closed(self, m: int) -> IntPoly:
        if m == 1:
            return [1]
        p, n = self.p, self.n
        l = pow(m, -1, p)
        a = (m * l - 1) // p
        # [l]_{q^m} = sum_{i<l} q^{mi}, assembled from reduced q-powers
        lqm: IntPoly = []
        for i in range(l):
            lqm = self.add(lqm, self.qpow(m * i))
        out = lqm
        if n > 1 and a > 0:
            # [a]_{q^p} = sum_{i<a} q^{pi} = sum_i (1-u)^i, truncated at u^n
            aqp: IntPoly = []
            for i in range(a):
                aqp = self.add(aqp, self.q_p_binomial_power(i))
            base = self.mul(self.qpow(1), self.mul(aqp, self.qint_p()))
            acc, term = [1], [1]
            for j in range(1, n):
                term = self.mul(term, base)
                acc = self.add(acc, self.scale(term, (-1) ** j))
            out = self.mul(out, acc)
        return out

    def _inv_power(self, m: int, k: int) -> IntPoly:
        got = self._invpow_cache.get((m, k))
        if got is None:
            got = self._invpow_cache[(m, k)] = self.pow(self.inv_qint[m], k)
        return got

    def _term(self, m: int, letter: Letter) -> IntPoly:
        k, e = letter
        return self.mul(self.qpow(e * m), self._inv_power(m, k))

    # -- harmonic sums ----------------------------------------------------
    def hsum(self, ks: Sequence[int], es: Sequence[int], star: bool = False) -> IntPoly:
        pattern = tuple(zip(ks, es))
        return self.hsum_batch([pattern], star)[pattern]

    def hsum_batch(self, patterns: Iterable[Pattern], star: bool = False) -> dict[Pattern, IntPoly]:
        """Nested sums over p-1 >= m_1 > ... > m_d > 0 (or >= for star) of
        prod q^{e_a m_a} / [m_a]^{k_a}, for every pattern at once.

        One sweep over m updates an accumulator per distinct pattern suffix,
        so shared tails across patterns are computed once.
        """
        targets = list(dict.fromkeys(patterns))
        suffixes: set[Pattern] = set()
        for pat in targets:
            for i in range(len(pat)):
                suffixes.add(pat[i:])
        order = sorted(suffixes, key=len)  # update shortest first (star case)
        acc: dict[Pattern, IntPoly] = {suf: [] for suf in order}
        acc[()] = [1]
        for m in range(1, self.p):
            terms = {letter: self._term(m, letter) for letter in {suf[0] for suf in order}}
            if star:
                for suf in order:
                    deeper = acc[suf[1:]]
                    if deeper:
                        acc[suf] = self.add(acc[suf], self.mul(terms[suf[0]], deeper))
            else:
                new = {}
                for suf in order:
                    deeper = acc[suf[1:]]
                    new[suf] = self.add(acc[suf], self.mul(terms[suf[0]], deeper)) if deeper else acc[suf]
                new[()] = [1]
                acc = new
        return {pat: acc.get(pat, [1] if not pat else []) for pat in targets}


_ENGINES: dict[tuple[int, int], Engine] = {}


def get_engine(p: int, n: int) -> Engine:
    """Shared per-(p, n) engine; values it returns are never mutated, so
    concurrent readers are safe."""
    key = (p, n)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = _ENGINES[key] = Engine(p, n)
    return eng
