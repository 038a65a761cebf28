"""Free algebra on letters y_k (k >= 1) with Q[q] coefficients.

Carries the three quasi-shuffle products used here:

* stuffle        y_k w * y_l w' = y_k(w * y_l w') + y_l(y_k w * w') + y_{k+l}(w * w')
* q-stuffle      stuffle plus the extra merge term (1-q) y_{k+l-1}(w o w')
* stuffle-star   the merge term enters with a minus sign

and the relation space whose quotient dimensions reproduce the duality /
weight-one counting table.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import ONE_MINUS_Q, Poly
from .indexes import Index, compositions, hoffman_dual
from . import linalg

Word = tuple[int, ...]


class PolySum:
    """Formal Q[q]-linear combination of words; zero coefficients are not
    stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Poly] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            if not isinstance(c, Poly):
                c = Poly.const(c)
            if not c.is_zero():
                clean[tuple(w)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("PolySum is immutable")

    @staticmethod
    def from_word(w: Iterable[int], coeff=1) -> "PolySum":
        return PolySum({tuple(w): Poly.const(coeff)})

    @staticmethod
    def zero() -> "PolySum":
        return PolySum()

    def __add__(self, other: "PolySum") -> "PolySum":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Poly.zero()) + c
        return PolySum(out)

    def __mul__(self, scalar) -> "PolySum":
        return PolySum({w: c * scalar for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __sub__(self, other: "PolySum") -> "PolySum":
        return self + other * -1

    def __eq__(self, other):
        if not isinstance(other, PolySum):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def at_q_one(self) -> dict[Word, Fraction]:
        out = {}
        for w, c in self.terms.items():
            v = c.eval(Fraction(1))
            if v:
                out[w] = v
        return out

    def __repr__(self):
        return f"PolySum({self.terms!r})"


# merge coefficient tables: letter -> Poly coefficient contributed when the
# leading letters k and l fuse.
def _merge_stuffle(k: int, l: int):
    return ((k + l, Poly.one()),)


def _merge_q_stuffle(k: int, l: int):
    return ((k + l, Poly.one()), (k + l - 1, ONE_MINUS_Q))


def _merge_stuffle_star(k: int, l: int):
    return ((k + l, -Poly.one()),)


_MEMOS: dict[str, dict[tuple[Word, Word], dict[Word, Poly]]] = {
    "stuffle": {},
    "q_stuffle": {},
    "stuffle_star": {},
}
_MERGES = {
    "stuffle": _merge_stuffle,
    "q_stuffle": _merge_q_stuffle,
    "stuffle_star": _merge_stuffle_star,
}


def _product(name: str, w1: Word, w2: Word) -> dict[Word, Poly]:
    if not w1:
        return {w2: Poly.one()}
    if not w2:
        return {w1: Poly.one()}
    if w2 < w1:  # all three products are commutative; normalize the key
        w1, w2 = w2, w1
    memo = _MEMOS[name]
    got = memo.get((w1, w2))
    if got is not None:
        return got
    merge = _MERGES[name]
    k, l = w1[0], w2[0]
    out: dict[Word, Poly] = {}

    def accumulate(prefix: Word, sub: dict[Word, Poly], coeff: Poly | None = None):
        for w, c in sub.items():
            key = prefix + w
            val = c if coeff is None else c * coeff
            cur = out.get(key)
            out[key] = val if cur is None else cur + val

    accumulate((k,), _product(name, w1[1:], w2))
    accumulate((l,), _product(name, w1, w2[1:]))
    inner = _product(name, w1[1:], w2[1:])
    for letter, coeff in merge(k, l):
        if letter >= 1:
            accumulate((letter,), inner, coeff)
    out = {w: c for w, c in out.items() if not c.is_zero()}
    memo[(w1, w2)] = out
    return out


def _as_word(w) -> Word:
    if isinstance(w, Index):
        return w.parts
    return tuple(w)


def stuffle(w1, w2) -> PolySum:
    """Stuffle product of two basis words."""
    return PolySum(_product("stuffle", _as_word(w1), _as_word(w2)))


def q_stuffle(w1, w2) -> PolySum:
    """Stuffle product with the (1-q)-weighted merge term; evaluating
    harmonic sums on it is multiplicative."""
    return PolySum(_product("q_stuffle", _as_word(w1), _as_word(w2)))


def stuffle_star(w1, w2) -> PolySum:
    """Stuffle recursion with a negative merge sign (the product adapted to
    star sums)."""
    return PolySum(_product("stuffle_star", _as_word(w1), _as_word(w2)))


def product_on_sums(name: str, a: PolySum, b: PolySum) -> PolySum:
    """Bilinear extension of one of the three products to PolySums."""
    out = PolySum.zero()
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            out = out + PolySum(_product(name, w1, w2)) * (c1 * c2)
    return out


def weight_k_words(k: int) -> list[Word]:
    """Column order for weight-k matrices: compositions of k, lexicographic."""
    return compositions(k)


def _dual_reversed(w: Word) -> Word:
    return hoffman_dual(Index(w)).parts[::-1]


def relation_space(k: int) -> tuple[list[list[Fraction]], list[Word]]:
    """Generators of the weight-k relation subspace, as matrix rows over the
    lexicographic composition basis.

    Row families: (i) y_k * y_l - (-1)^k y_{rev dual k} * y_{rev dual l}
    over all splits into nonempty halves (star product), (ii) y_1 * y_k over
    weight k-1, (iii) y_k + (-1)^k y_{rev dual k}.  Rows are deduplicated
    syntactically; rank handles the remaining dependence.
    """
    if k < 1:
        raise ValueError("k >= 1 required")
    words = weight_k_words(k)
    col = {w: i for i, w in enumerate(words)}
    sign = (-1) ** k

    rows: list[tuple] = []
    seen = set()

    def add(sum_: dict[Word, Poly]):
        row = [Fraction(0)] * len(words)
        for w, c in sum_.items():
            val = c.eval(Fraction(1))  # constant coefficients here
            if val:
                row[col[w]] += val
        key = tuple(row)
        if any(row) and key not in seen:
            seen.add(key)
            rows.append(key)

    for split in range(1, k):
        for a in compositions(split):
            for b in compositions(k - split):
                lhs = _product("stuffle_star", a, b)
                rhs = _product("stuffle_star", _dual_reversed(a), _dual_reversed(b))
                combined: dict[Word, Poly] = dict(lhs)
                for w, c in rhs.items():
                    combined[w] = combined.get(w, Poly.zero()) - c * sign
                add(combined)
    for a in compositions(k - 1):
        add(_product("stuffle_star", (1,), a))
    for a in compositions(k):
        combined = {a: Poly.one()}
        da = _dual_reversed(a)
        combined[da] = combined.get(da, Poly.zero()) + Poly.const(sign)
        add(combined)
    return [list(r) for r in rows], words


def dim_word_quotient(k: int) -> int:
    """dim of weight-k words modulo the relation space: 2^(k-1) - rank."""
    rows, _ = relation_space(k)
    return 2 ** (k - 1) - linalg.rank(rows)


def export_matrix(rows: list[list[Fraction]], words: list[Word]) -> str:
    """Plain text export: header of composition strings, then one row per
    line with exact fraction entries."""
    header = "\t".join(",".join(map(str, w)) for w in words)
    lines = [header]
    for row in rows:
        lines.append("\t".join(str(Fraction(x)) for x in row))
    return "\n".join(lines) + "\n"
