"""Arbitrary-precision limit experiments at roots of unity.

The series q_m(t) is the inverse function of t = [m]_q around q = e^{2pi i/m};
composing harmonic sums with it and reading Taylor coefficients gives the
analytic-side limits.  Coefficients are computed by two independent routes
(series composition vs. the residue/theta-derivative formula) which the test
suite compares.

Precision is an explicit parameter everywhere: each public function works at
`digits` + GUARD_DIGITS decimal digits and never relies on ambient state
beyond its own scoped context.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import mpmath as mp

from .algebra import Poly
from .errors import PrecisionError
from .indexes import Index, stirling2

GUARD_DIGITS = 10


def _workdps(digits: int):
    if digits < 1:
        raise ValueError("digits >= 1 required")
    return mp.workdps(digits + GUARD_DIGITS)


def root_of_unity(m: int, digits: int):
    with _workdps(digits):
        return mp.e ** (2j * mp.pi / m)


class TruncatedSeries:
    """Power series c0 + c1 t + ... + c_{order-1} t^{order-1}; arithmetic
    truncates at the common order."""

    __slots__ = ("coeffs", "order", "digits")

    def __init__(self, coeffs: Sequence, order: int, digits: int):
        coeffs = [mp.mpc(c) for c in coeffs][:order]
        coeffs += [mp.mpc(0)] * (order - len(coeffs))
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "digits", digits)

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    @staticmethod
    def const(value, order: int, digits: int) -> "TruncatedSeries":
        return TruncatedSeries([value], order, digits)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order, self.digits
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries(
            [a - b for a, b in zip(self.coeffs, other.coeffs)], self.order, self.digits
        )

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.order, self.digits)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            n = self.order
            out = [mp.mpc(0)] * n
            for i, x in enumerate(self.coeffs):
                if x:
                    for j in range(n - i):
                        y = other.coeffs[j]
                        if y:
                            out[i + j] += x * y
            return TruncatedSeries(out, n, self.digits)
        return TruncatedSeries([c * other for c in self.coeffs], self.order, self.digits)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with vanishing constant term")
        n = self.order
        out = [mp.mpc(0)] * n
        out[0] = 1 / c0
        for i in range(1, n):
            s = mp.mpc(0)
            for j in range(1, i + 1):
                s += self.coeffs[j] * out[i - j]
            out[i] = -s / c0
        return TruncatedSeries(out, n, self.digits)

    def pow_int(self, e: int) -> "TruncatedSeries":
        out = TruncatedSeries.const(1, self.order, self.digits)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs!r})"


@dataclass(frozen=True)
class ReferenceConstants:
    """pi and small zeta values at working precision (+ guard digits)."""

    digits: int
    pi: object
    zeta2: object
    zeta3: object
    zeta4: object

    @staticmethod
    def compute(digits: int) -> "ReferenceConstants":
        with _workdps(digits):
            return ReferenceConstants(digits, +mp.pi, mp.zeta(2), mp.zeta(3), mp.zeta(4))


# ---------------------------------------------------------------------------
# the series q_m(t)
# ---------------------------------------------------------------------------
def qm_series(m: int, order: int, digits: int) -> TruncatedSeries:
    """Taylor coefficients of the inverse function of t = [m]_q at
    q(0) = e^{2pi i/m}:

        q_m(t) = z sum_l t^l sum_{j=0}^{l} (-z)^j / ((j+1)! (l-j)!) *
                 rising(-(j+1)/m, l),   z = e^{2pi i/m}.

    The defining-equation residual [m]_{q_m(t)} - t must vanish to
    10^-(digits-10) coefficient-wise, else PrecisionError is raised.
    """
    if m < 2 or order < 1:
        raise ValueError("need m >= 2 and order >= 1")
    with _workdps(digits):
        z = mp.e ** (2j * mp.pi / m)
        coeffs = []
        for l in range(order):
            s = mp.mpc(0)
            for j in range(l + 1):
                a = mp.mpf(-(j + 1)) / m
                poch = mp.mpc(1)
                for i in range(l):
                    poch *= a + i
                s += (-z) ** j / (mp.factorial(j + 1) * mp.factorial(l - j)) * poch
            coeffs.append(z * s)
        series = TruncatedSeries(coeffs, order, digits)
        residual = qint_of_series(m, series)
        tol = mp.mpf(10) ** (-(digits - 10))
        defect = [residual.coeffs[i] - (1 if i == 1 else 0) for i in range(order)]
        if max(abs(x) for x in defect) > tol:
            raise PrecisionError(f"[{m}]_(q_m(t)) - t residual exceeds {tol}")
        return series


def qint_of_series(mu: int, Q: TruncatedSeries) -> TruncatedSeries:
    """[mu] evaluated on a series: (1 - Q^mu) / (1 - Q)."""
    one = TruncatedSeries.const(1, Q.order, Q.digits)
    return (one - Q.pow_int(mu)) * (one - Q).inverse()


# ---------------------------------------------------------------------------
# route one: series composition
# ---------------------------------------------------------------------------
class SeriesSums:
    """Shared per-(m, order, digits) state for composing harmonic sums with
    q_m(t): the powers of q_m(t) and the q-integer inverses are built once
    across indices."""

    def __init__(self, m: int, order: int, digits: int):
        self.m = m
        self.order = order
        self.digits = digits
        with _workdps(digits):
            self.q = qm_series(m, order, digits)
            one = TruncatedSeries.const(1, order, digits)
            inv_one_minus_q = (one - self.q).inverse()
            self._qpow: list[TruncatedSeries] = [one]
            self._qint_inv: list[TruncatedSeries | None] = [None]
            power = one
            for mu in range(1, m):
                power = power * self.q
                self._qpow.append(power)
                qint = (one - power) * inv_one_minus_q
                assert abs(qint.coeffs[0]) > 0, "q-integer series must be invertible"
                self._qint_inv.append(qint.inverse())

    def qpow(self, e: int) -> TruncatedSeries:
        out = TruncatedSeries.const(1, self.order, self.digits)
        q, m = self._qpow[1], self.m
        while e >= m:
            out = out * self._qpow[m - 1] * q
            e -= m
        return out * self._qpow[e]

    def hsum(self, k: Index) -> TruncatedSeries:
        """H_{m-1}(k; q_m(t)) as a truncated series."""
        d = k.depth
        if d == 0:
            return TruncatedSeries.const(1, self.order, self.digits)
        if d > self.m - 1:
            return TruncatedSeries.const(0, self.order, self.digits)
        with _workdps(self.digits):
            zero = TruncatedSeries.const(0, self.order, self.digits)
            one = TruncatedSeries.const(1, self.order, self.digits)
            acc = [zero] * d + [one]
            for mu in range(1, self.m):
                terms = []
                for ka in k.parts:
                    t = self._qint_inv[mu].pow_int(ka) * self.qpow((ka - 1) * mu)
                    terms.append(t)
                acc = [acc[a] + terms[a] * acc[a + 1] for a in range(d)] + [one]
            return acc[0]


def alpha_direct(k: Index, m: int, order: int, digits: int) -> TruncatedSeries:
    """Coefficients alpha_l(k; m) of H_{m-1}(k; q_m(t)), l < order."""
    return SeriesSums(m, order, digits).hsum(k)


# ---------------------------------------------------------------------------
# route two: residue formula with theta derivatives
# ---------------------------------------------------------------------------
_BLJ_CACHE: dict[tuple[int, int], Fraction] = {}


def b_lj(l: int, j: int) -> Fraction:
    """(1/j!) d^j/dy^j (y/(e^y - 1))^l at y = 0, exactly."""
    if (l, j) not in _BLJ_CACHE:
        # base series y/(e^y-1) = inverse of sum_{i>=0} y^i/(i+1)!
        n = j + 1
        base = [Fraction(1, factorial(i + 1)) for i in range(n)]
        inv = [Fraction(0)] * n
        inv[0] = Fraction(1)
        for i in range(1, n):
            inv[i] = -sum(base[t] * inv[i - t] for t in range(1, i + 1))
        out = [Fraction(0)] * n
        out[0] = Fraction(1)
        for _ in range(l):
            out = [sum(out[t] * inv[i - t] for t in range(i + 1)) for i in range(n)]
        _BLJ_CACHE[(l, j)] = out[j]
    return _BLJ_CACHE[(l, j)]


def s_lj(l: int, j: int, m: int, digits: int):
    """(1/j!) d^j/dy^j (z e^{y/m} - 1)^l at y = 0 with z = e^{2pi i/m}:
    equals (1/(j! m^j)) sum_nu nu! S2(j,nu) C(l,nu) z^nu (z-1)^{l-nu}."""
    with _workdps(digits):
        z = mp.e ** (2j * mp.pi / m)
        if j == 0:
            return (z - 1) ** l
        total = mp.mpc(0)
        for nu in range(1, j + 1):
            total += factorial(nu) * stirling2(j, nu) * comb(l, nu) * z**nu * (z - 1) ** (l - nu)
        return total / (factorial(j) * mp.mpf(m) ** j)


def _theta_g_over_factorial(rho: int, k: int, mu: int, zpow, one_minus_zpow_inv, m: int):
    """(theta^rho g / rho!)(z) for g = q^{(k-1)mu} / (1 - q^mu)^k, expanded by
    the theta-derivative lemma."""
    from .verify import theta_coefficient

    total = mp.mpc(0)
    for s in range(rho + 1):
        c = theta_coefficient(s, rho, k) * comb(s + k - 1, s)
        total += (
            mp.mpf(c.numerator) / c.denominator
            * zpow((k + s - 1) * mu)
            * one_minus_zpow_inv(mu) ** (k + s)
        )
    return total * mp.mpf(mu) ** rho


def _theta_evals(k: Index, m: int, max_order: int, digits: int):
    """[(theta^r f)(z) for r = 0..max_order] with f = H_{m-1}(k; q).

    f factors as (1-q)^w G with G a sum of products of simple pole terms;
    theta powers of G come from a sweep carrying a derivative budget, and the
    (1-q)^w factor enters through the Leibniz rule.
    """
    w = k.weight
    d = k.depth
    with _workdps(digits):
        z = mp.e ** (2j * mp.pi / m)
        zp = [mp.mpc(1)]
        for _ in range(max(1, (max(k.parts, default=1) + max_order + 1) * m + 1)):
            zp.append(zp[-1] * z)

        def zpow(e: int):
            return zp[e] if e < len(zp) else z**e

        inv_cache: dict[int, object] = {}

        def one_minus_zpow_inv(mu: int):
            if mu not in inv_cache:
                inv_cache[mu] = 1 / (1 - zpow(mu))
            return inv_cache[mu]

        # S[a][r] for suffix starting at a, derivative budget r (divided by r!)
        if d == 0:
            G = [mp.mpc(1)] + [mp.mpc(0)] * max_order
        else:
            S = [[mp.mpc(0)] * (max_order + 1) for _ in range(d + 1)]
            S[d][0] = mp.mpc(1)
            for mu in range(1, m):
                theta_terms = [
                    [_theta_g_over_factorial(r, ka, mu, zpow, one_minus_zpow_inv, m) for r in range(max_order + 1)]
                    for ka in k.parts
                ]
                newS = [row[:] for row in S]
                for a in range(d - 1, -1, -1):
                    for r in range(max_order + 1):
                        s = mp.mpc(0)
                        for rho in range(r + 1):
                            deeper = S[a + 1][r - rho]
                            if deeper:
                                s += theta_terms[a][rho] * deeper
                        newS[a][r] = S[a][r] + s
                S = newS
            G = [factorial(r) * S[0][r] for r in range(max_order + 1)]
        # theta^i of (1-q)^w, evaluated at z
        pre = Poly([1, -1]) ** w
        pre_evals = []
        cur = pre
        for _ in range(max_order + 1):
            pre_evals.append(complex_eval(cur, z))
            cur = cur.theta()
        out = []
        for r in range(max_order + 1):
            total = mp.mpc(0)
            for i in range(r + 1):
                total += comb(r, i) * pre_evals[i] * G[r - i]
            out.append(total)
        return out


def complex_eval(poly: Poly, z):
    acc = mp.mpc(0)
    for c in reversed(poly.coeffs):
        acc = acc * z + mp.mpf(c.numerator) / c.denominator
    return acc


def alpha_via_formula(l: int, k: Index, m: int, digits: int):
    """Coefficient a_l of H_{m-1}(k; q_m(t)) from the residue formula:

        a_0 = f(z),
        a_l = (1/l) sum_{j1+j2+j3=l-1} B_{l,j1} S_{l,j2}(m)
              (theta^{j3+1} f)(z) / (j3! m^{j3+1})     (l >= 1).
    """
    if l < 0:
        raise ValueError("l >= 0 required")
    with _workdps(digits):
        evals = _theta_evals(k, m, l, digits)
        if l == 0:
            return evals[0]
        total = mp.mpc(0)
        for j1 in range(l):
            for j2 in range(l - j1):
                j3 = l - 1 - j1 - j2
                b = b_lj(l, j1)
                total += (
                    (mp.mpf(b.numerator) / b.denominator)
                    * s_lj(l, j2, m, digits)
                    * evals[j3 + 1]
                    / (factorial(j3) * mp.mpf(m) ** (j3 + 1))
                )
        return total / l


# ---------------------------------------------------------------------------
# the bounded auxiliary sums
# ---------------------------------------------------------------------------
def zsum(lvec: Sequence[int], kvec: Index, m: int, digits: int):
    """sum over m-1 >= m_1 > ... > m_d > 0 of
    prod (m_a/m)^{l_a} (-2 pi i/m)^{k_a} z^{(k_a-1) m_a} / (1 - z^{m_a})^{k_a}."""
    kparts = kvec.parts if isinstance(kvec, Index) else tuple(kvec)
    lvec = tuple(lvec)
    if len(lvec) != len(kparts):
        raise ValueError("length mismatch")
    d = len(kparts)
    if d == 0:
        return mp.mpc(1)
    with _workdps(digits):
        z = mp.e ** (2j * mp.pi / m)
        factor = -2j * mp.pi / m
        acc = [mp.mpc(0)] * d + [mp.mpc(1)]
        for mu in range(1, m):
            zmu = z**mu
            terms = [
                (mp.mpf(mu) / m) ** la * factor**ka * zmu ** (ka - 1) / (1 - zmu) ** ka
                for la, ka in zip(lvec, kparts)
            ]
            acc = [acc[a] + terms[a] * acc[a + 1] for a in range(d)] + [mp.mpc(1)]
        return acc[0]


# ---------------------------------------------------------------------------
# convergence trajectories
# ---------------------------------------------------------------------------
@dataclass
class ConvergenceRow:
    m: int
    l: int
    value: object  # mpc
    reference: object | None
    delta: object | None


def reference_value(k: Index, l: int, digits: int):
    """Closed-form depth-1 targets (derived by hand from the depth-1
    regularized values): l=0 of (1) -> -pi i, of (2) -> pi^2/3, of (3) -> 0;
    l=1 of (2) -> 2 zeta(3).  None when no reference exists."""
    with _workdps(digits):
        table = {
            ((1,), 0): -1j * mp.pi,
            ((2,), 0): mp.pi**2 / 3,
            ((3,), 0): mp.mpc(0),
            ((2,), 1): 2 * mp.zeta(3),
        }
        return table.get((k.parts, l))


def convergence_report(
    k: Index, m_list: Sequence[int], order: int, digits: int
) -> list[ConvergenceRow]:
    """Trajectories alpha_l(k; m) over increasing m with reference deltas
    where a closed-form target is known."""
    if list(m_list) != sorted(m_list):
        raise ValueError("m_list must be increasing")
    rows = []
    for m in m_list:
        series = alpha_direct(k, m, order, digits)
        for l in range(order):
            ref = reference_value(k, l, digits)
            val = series.coeffs[l]
            rows.append(
                ConvergenceRow(m, l, val, ref, abs(val - ref) if ref is not None else None)
            )
    return rows
