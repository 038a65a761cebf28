"""Exact arithmetic kernel.

Dense univariate polynomials over Q, rational functions, and the residue
rings Z_(p)[q]/([p]^n) built on the q-integer [p] = 1 + q + ... + q^(p-1).
All values are immutable after construction; every operation returns a new
object, so sharing across threads or processes is safe.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Sequence

from .errors import ExcludedPrimeError, NonInvertibleError

Rational = Fraction

_KRONECKER_MIN_LEN = 24


def _format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _parse_fraction(s: str) -> Fraction:
    return Fraction(s)


try:  # gmpy2 provides C-speed digit packing and GMP multiplication
    import gmpy2 as _gmpy2
except ImportError:  # pragma: no cover
    _gmpy2 = None


def _kronecker_mul_py(a: Sequence[int], b: Sequence[int], B: int, n: int) -> list[int]:
    acc = 0
    for c in reversed(a):
        acc = (acc << B) + c
    bcc = 0
    for c in reversed(b):
        bcc = (bcc << B) + c
    prod = acc * bcc
    out = [0] * n
    mask = (1 << B) - 1
    half = 1 << (B - 1)
    for i in range(n):
        d = prod & mask
        if d >= half:
            d -= 1 << B
            prod += 1 << B
        prod >>= B
        out[i] = d
    return out


def _kronecker_mul_gmp(a: Sequence[int], b: Sequence[int], B: int, n: int) -> list[int]:
    # signed packing: pack positive and negative parts separately, subtract
    A = _gmpy2.pack([c if c > 0 else 0 for c in a], B) - _gmpy2.pack(
        [-c if c < 0 else 0 for c in a], B
    )
    Bv = _gmpy2.pack([c if c > 0 else 0 for c in b], B) - _gmpy2.pack(
        [-c if c < 0 else 0 for c in b], B
    )
    prod = A * Bv
    # shift every base-2^B digit into [0, 2^B) by adding 2^(B-1) per slot,
    # then a single C-level unpack recovers the balanced digits
    half = 1 << (B - 1)
    offset = ((_gmpy2.mpz(1) << (B * n)) - 1) // ((_gmpy2.mpz(1) << B) - 1) * half
    digits = _gmpy2.unpack(prod + offset, B)[:n]
    return [int(d) - half for d in digits]


def kronecker_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Multiply integer coefficient lists by packing into one big integer.

    Coefficients are encoded in base 2**B with balanced digits, so a single
    big-integer multiplication performs the whole convolution.
    """
    if not a or not b:
        return []
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return []
    bound = ma * mb * min(len(a), len(b))
    B = bound.bit_length() + 2
    n = len(a) + len(b) - 1
    if _gmpy2 is not None:
        return _kronecker_mul_gmp(a, b, B, n)
    return _kronecker_mul_py(a, b, B, n)  # pragma: no cover


def _school_mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return r


def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Integer polynomial product; Kronecker packing above a small cutoff."""
    if not a or not b:
        return []
    if len(a) >= _KRONECKER_MIN_LEN and len(b) >= _KRONECKER_MIN_LEN:
        return kronecker_mul(a, b)
    return _school_mul_int(a, b)


class Poly:
    """Dense univariate polynomial over Q in the variable q.

    Coefficient i is the coefficient of q^i.  The zero polynomial stores an
    empty coefficient tuple and reports degree -infinity.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "Poly":
        return _ZERO

    @staticmethod
    def one() -> "Poly":
        return _ONE

    @staticmethod
    def q_power(e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        return Poly([0] * e + [1])

    @staticmethod
    def const(c) -> "Poly":
        return Poly([Fraction(c)])

    # -- basic structure ----------------------------------------------
    @property
    def degree(self):
        """Degree of the polynomial; -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] += y
        return Poly(out)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return _ZERO
            return Poly([x * c for x in self.coeffs])
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _ZERO
        if (
            max(len(a), len(b)) >= _KRONECKER_MIN_LEN
            and min(len(a), len(b)) >= 2
            and all(x.denominator == 1 for x in a)
            and all(x.denominator == 1 for x in b)
        ):
            return Poly(kronecker_mul([x.numerator for x in a], [y.numerator for y in b]))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result, base = _ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "Poly":
        """Multiply by q^k."""
        if not self.coeffs:
            return _ZERO
        return Poly((Fraction(0),) * k + self.coeffs)

    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = len(divisor.coeffs) - 1
        lead = divisor.coeffs[-1]
        quo = [Fraction(0)] * max(0, len(rem) - dd)
        for top in range(len(rem) - 1, dd - 1, -1):
            c = rem[top]
            if c:
                c /= lead
                quo[top - dd] = c
                for i, y in enumerate(divisor.coeffs):
                    rem[top - dd + i] -= c * y
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return self.divmod(_coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(_coerce(other))[1]

    def divexact(self, divisor: "Poly") -> "Poly":
        quo, rem = self.divmod(divisor)
        if not rem.is_zero():
            raise ValueError("division is not exact")
        return quo

    # -- extras ----------------------------------------------------------
    def eval(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def theta(self) -> "Poly":
        """The operator q d/dq."""
        return Poly([i * c for i, c in enumerate(self.coeffs)])

    def content(self) -> Fraction:
        """Positive rational c with self/c integer and primitive (0 for zero)."""
        if not self.coeffs:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = int_gcd(num, c.numerator)
            den = den * c.denominator // int_gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        c = self.content()
        return self if c == 0 else self * (1 / c)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * (1 / self.coeffs[-1])

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd via the primitive Euclidean remainder sequence."""
        a, b = self.primitive(), _coerce(other).primitive()
        while not b.is_zero():
            a, b = b, a.divmod(b)[1].primitive()
        return a.monic()

    # -- serialization -----------------------------------------------------
    def to_coeff_strings(self) -> list[str]:
        return [_format_fraction(c) for c in self.coeffs]

    @staticmethod
    def from_coeff_strings(strings: Sequence[str]) -> "Poly":
        return Poly([_parse_fraction(s) for s in strings])

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(_format_fraction(c))
            else:
                coef = "" if c == 1 else ("-" if c == -1 else _format_fraction(c) + "*")
                parts.append(f"{coef}q^{i}" if i > 1 else f"{coef}q")
        return "Poly(" + " + ".join(parts) + ")"


def _coerce(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    raise TypeError(f"cannot coerce {type(x)!r} to Poly")


_ZERO = Poly()
_ONE = Poly([1])
ONE_MINUS_Q = Poly([1, -1])


def q_int(n: int) -> Poly:
    """The q-integer [n] = 1 + q + ... + q^(n-1)."""
    if n < 1:
        raise ValueError("q_int requires n >= 1")
    return Poly([1] * n)


def q_binom(n: int, m: int) -> Poly:
    """Gaussian binomial coefficient, prod_{j=1..m} [n-j+1]/[j]; division is exact."""
    if m < 0 or n < 0:
        raise ValueError("q_binom requires nonnegative arguments")
    if m > n:
        raise ValueError("q_binom requires m <= n")
    out = _ONE
    for j in range(1, m + 1):
        out = (out * q_int(n - j + 1)).divexact(q_int(j))
    return out


_CYCLOTOMIC_CACHE: dict[int, Poly] = {}


def cyclotomic(d: int) -> Poly:
    """The d-th cyclotomic polynomial (irreducible factor of q^d - 1)."""
    if d < 1:
        raise ValueError("d >= 1 required")
    if d not in _CYCLOTOMIC_CACHE:
        num = Poly.q_power(d) - _ONE
        for e in range(1, d):
            if d % e == 0:
                num = num.divexact(cyclotomic(e))
        _CYCLOTOMIC_CACHE[d] = num
    return _CYCLOTOMIC_CACHE[d]


class RatFun:
    """Rational function num/den over Q(q), kept with gcd(num, den) = 1 and
    a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _ONE, *, _normalized: bool = False):
        num, den = _coerce(num), _coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if num.is_zero():
                den = _ONE
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num.divexact(g), den.divexact(g)
            lead = den.coeffs[-1]
            if lead != 1:
                num, den = num * (1 / lead), den * (1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFun is immutable")

    @staticmethod
    def from_qint_factored(num: Poly, den_factors: dict[int, int]) -> "RatFun":
        """Normalize num / prod [m]^e using the known cyclotomic factorization
        of q-integers; avoids a generic gcd on large inputs."""
        mult: dict[int, int] = {}
        for m, e in den_factors.items():
            if e < 0:
                raise ValueError("negative denominator exponent")
            for d in range(2, m + 1):
                if m % d == 0:
                    mult[d] = mult.get(d, 0) + e
        for d in sorted(mult):
            while mult[d] > 0 and not num.is_zero():
                quo, rem = num.divmod(cyclotomic(d))
                if not rem.is_zero():
                    break
                num = quo
                mult[d] -= 1
        den = _ONE
        for d, e in mult.items():
            if e:
                den = den * cyclotomic(d) ** e
        return RatFun(num, den, _normalized=True) if not num.is_zero() else RatFun(_ZERO, _ONE, _normalized=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFun(_coerce(other))
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce_rf(other)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._coerce_rf(other))

    def __rsub__(self, other):
        return self._coerce_rf(other) - self

    def __mul__(self, other):
        other = self._coerce_rf(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce_rf(other)
        if other.is_zero():
            raise ZeroDivisionError
        return RatFun(self.num * other.den, self.den * other.num)

    def theta(self) -> "RatFun":
        """q d/dq of the rational function."""
        num = (self.num.derivative() * self.den - self.num * self.den.derivative()).shift(1)
        return RatFun(num, self.den * self.den)

    def eval(self, x):
        return self.num.eval(x) / self.den.eval(x)

    @staticmethod
    def _coerce_rf(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        return RatFun(_coerce(x))

    def __repr__(self):
        return f"RatFun({self.num!r} / {self.den!r})"


def _check_p_integral(poly: Poly, p: int):
    for c in poly.coeffs:
        if c.denominator % p == 0:
            raise ExcludedPrimeError(p)


class CycModElement:
    """A residue in Z_(p)[q]/([p]^n): polynomial of degree < n(p-1) whose
    coefficients have denominators coprime to p."""

    __slots__ = ("p", "n", "residue")

    def __init__(self, p: int, n: int, residue: Poly, *, _reduced: bool = False):
        if n < 1:
            raise ValueError("n >= 1 required")
        residue = _coerce(residue)
        if not _reduced:
            residue = residue % (q_int(p) ** n)
        _check_p_integral(residue, p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "residue", residue)

    def __setattr__(self, *a):
        raise AttributeError("CycModElement is immutable")

    def _same_ring(self, other: "CycModElement"):
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("mixed (p, n) rings")

    def __eq__(self, other):
        if isinstance(other, CycModElement):
            return (self.p, self.n, self.residue) == (other.p, other.n, other.residue)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.n, self.residue))

    def is_zero(self) -> bool:
        return self.residue.is_zero()

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = reduce_mod(_coerce(other), self.p, self.n)
        self._same_ring(other)
        return CycModElement(self.p, self.n, self.residue + other.residue, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycModElement(self.p, self.n, -self.residue, _reduced=True)

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycModElement) else -_coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if isinstance(other, Fraction) and other.denominator % self.p == 0:
                raise ExcludedPrimeError(self.p)
            return CycModElement(self.p, self.n, self.residue * other, _reduced=True)
        if isinstance(other, Poly):
            other = reduce_mod(other, self.p, self.n)
        self._same_ring(other)
        return CycModElement(self.p, self.n, self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = reduce_mod(_ONE, self.p, self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def inv(self) -> "CycModElement":
        """Inverse via the extended Euclidean algorithm over Q[q]; raises if
        the residue is a zero divisor or the inverse leaves Z_(p)."""
        modulus = q_int(self.p) ** self.n
        r0, r1 = modulus, self.residue
        s0, s1 = _ZERO, _ONE
        while not r1.is_zero():
            quo, rem = r0.divmod(r1)
            r0, r1 = r1, rem
            s0, s1 = s1, s0 - quo * s1
        if r0.degree != 0:
            raise NonInvertibleError(f"residue shares the factor {r0!r} with [p]^n")
        inv_poly = (s0 * (1 / r0.coeffs[0])) % modulus
        _check_p_integral(inv_poly, self.p)
        return CycModElement(self.p, self.n, inv_poly, _reduced=True)

    def project(self, n: int) -> "CycModElement":
        """Image under Z_{p,self.n} -> Z_{p,n} for n <= self.n."""
        if n > self.n:
            raise ValueError("can only project to a smaller power")
        return CycModElement(self.p, n, self.residue)

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "n": self.n, "coeffs": self.residue.to_coeff_strings()})

    @staticmethod
    def from_json(s: str) -> "CycModElement":
        d = json.loads(s)
        return CycModElement(int(d["p"]), int(d["n"]), Poly.from_coeff_strings(d["coeffs"]))

    def __repr__(self):
        return f"CycModElement(p={self.p}, n={self.n}, {self.residue!r})"


def reduce_mod(f: Poly | int | Fraction, p: int, n: int) -> CycModElement:
    """Reduce a polynomial into Z_(p)[q]/([p]^n) by long division by [p]^n."""
    f = _coerce(f)
    _check_p_integral(f, p)
    return CycModElement(p, n, f)


def inv_qint_closed_form(m: int, p: int, n: int) -> CycModElement:
    """Inverse of [m] in Z_{p,n} by the closed form
    [l]_{q^m} * sum_{j<n} (-q [a]_{q^p} [p])^j  with  m*l - p*a = 1, p > l >= 1.

    Valid for 1 <= m < p; the result has integer coefficients, so it stays in
    Z_(p) by construction.
    """
    if not (1 <= m < p):
        raise ValueError("inv_qint_closed_form requires 1 <= m < p")
    l = pow(m, -1, p)
    a = (m * l - 1) // p
    lqm = Poly([Fraction(1) if i % m == 0 else Fraction(0) for i in range((l - 1) * m + 1)])
    out = reduce_mod(lqm, p, n)
    if n > 1 and a > 0:
        aqp = Poly([Fraction(1) if i % p == 0 else Fraction(0) for i in range((a - 1) * p + 1)])
        base = reduce_mod((Poly.q_power(1) * aqp * q_int(p)), p, n)
        acc = reduce_mod(_ONE, p, n)
        term = reduce_mod(_ONE, p, n)
        for j in range(1, n):
            term = term * base
            acc = acc + term * ((-1) ** j)
        out = out * acc
    return out


def eval_at_one_mod(x: CycModElement) -> int:
    """The slice q -> 1: sum of residue coefficients reduced mod p^n."""
    total = sum(x.residue.coeffs, Fraction(0))
    mod = x.p ** x.n
    den = total.denominator % mod
    return (total.numerator % mod) * pow(den, -1, mod) % mod


class PrimeSlice:
    """Finite-prime-set projection: one Z_{p,n} residue per prime, all with
    the same n.  Excluded primes are simply absent from the map."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: dict[int, CycModElement]):
        for p, e in entries.items():
            if e.p != p or e.n != n:
                raise ValueError("entry does not match its prime or n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", dict(entries))

    def __setattr__(self, *a):
        raise AttributeError("PrimeSlice is immutable")

    @staticmethod
    def from_poly(f: Poly, primes: Sequence[int], n: int) -> tuple["PrimeSlice", list[int]]:
        """Reduce f at each prime; returns the slice and the excluded primes."""
        entries, excluded = {}, []
        for p in primes:
            try:
                entries[p] = reduce_mod(f, p, n)
            except ExcludedPrimeError:
                excluded.append(p)
        return PrimeSlice(n, entries), excluded

    def primes(self) -> list[int]:
        return sorted(self.entries)

    def _zip(self, other: "PrimeSlice"):
        if self.n != other.n:
            raise ValueError("mixed n")
        common = sorted(set(self.entries) & set(other.entries))
        return ((p, self.entries[p], other.entries[p]) for p in common)

    def __add__(self, other: "PrimeSlice") -> "PrimeSlice":
        return PrimeSlice(self.n, {p: a + b for p, a, b in self._zip(other)})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            entries = {}
            for p, e in self.entries.items():
                try:
                    entries[p] = e * other
                except ExcludedPrimeError:
                    continue
            return PrimeSlice(self.n, entries)
        return PrimeSlice(self.n, {p: a * b for p, a, b in self._zip(other)})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PrimeSlice):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __repr__(self):
        return f"PrimeSlice(n={self.n}, primes={self.primes()})"
