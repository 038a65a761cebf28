"""Indices (compositions of positive integers) and their combinatorics:
Hoffman dual, star contractions, reversal, cyclic orbits."""

from __future__ import annotations

from math import comb
from typing import Iterator, Sequence


class Index:
    """A finite ordered list of positive integers.  The empty index is
    allowed and has weight = depth = 0."""

    __slots__ = ("parts",)

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x < 1 for x in parts):
            raise ValueError("index parts must be positive integers")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, *a):
        raise AttributeError("Index is immutable")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    def is_admissible(self) -> bool:
        return bool(self.parts) and self.parts[0] >= 2

    def reversed_(self) -> "Index":
        return Index(self.parts[::-1])

    def prefix(self, a: int) -> "Index":
        """The first a parts; a = 0 gives the empty index."""
        if not 0 <= a <= self.depth:
            raise ValueError("prefix length out of range")
        return Index(self.parts[:a])

    def suffix(self, a: int) -> "Index":
        """Parts a+1 .. d; a = depth gives the empty index."""
        if not 0 <= a <= self.depth:
            raise ValueError("suffix start out of range")
        return Index(self.parts[a:])

    def __add__(self, other: "Index | Sequence[int]") -> "Index":
        other = other.parts if isinstance(other, Index) else tuple(other)
        if len(other) != self.depth:
            raise ValueError("componentwise sum needs equal depths")
        if any(x < 0 for x in other):
            raise ValueError("summand entries must be nonnegative")
        return Index(tuple(a + b for a, b in zip(self.parts, other)))

    def rotate(self) -> "Index":
        """(k1, k2, ..., kd) -> (k2, ..., kd, k1)."""
        if not self.parts:
            return self
        return Index(self.parts[1:] + self.parts[:1])

    def __eq__(self, other):
        if isinstance(other, Index):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __lt__(self, other: "Index"):
        return self.parts < other.parts

    def __repr__(self):
        return f"Index{self.parts}"

    def __str__(self):
        return ",".join(str(x) for x in self.parts)

    @staticmethod
    def parse(text: str) -> "Index":
        """Parse the CLI literal form, e.g. '2,1,1'; empty string is the
        empty index."""
        text = text.strip()
        if not text:
            return Index()
        return Index([int(t) for t in text.split(",")])


class ExpVector:
    """Numerator exponent vector paired with an index of the same depth."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[int] = ()):
        entries = tuple(int(x) for x in entries)
        if any(x < 0 for x in entries):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("ExpVector is immutable")

    def __eq__(self, other):
        if isinstance(other, ExpVector):
            return self.entries == other.entries
        if isinstance(other, tuple):
            return self.entries == other
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"ExpVector{self.entries}"

    @staticmethod
    def parse(text: str) -> "ExpVector":
        text = text.strip()
        if text.startswith("s="):
            text = text[2:]
        if not text:
            return ExpVector()
        return ExpVector([int(t) for t in text.split(",")])


# Summation variants.  plain/star use numerators q^{(k_a-1) m_a}; bar
# variants use q^{m_a}; generalized takes an explicit exponent vector.
VARIANTS = ("plain", "star", "bar", "bar_star", "generalized")

_STAR_VARIANTS = {"star", "bar_star"}


def variant_exponents(variant: str, k: Index, s: ExpVector | None = None) -> tuple[int, ...]:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "generalized":
        if s is None:
            raise ValueError("generalized variant needs an exponent vector")
        if len(s) != k.depth:
            raise ValueError("exponent vector length must equal index depth")
        return s.entries
    if s is not None:
        raise ValueError(f"variant {variant!r} does not take an exponent vector")
    if variant in ("bar", "bar_star"):
        return (1,) * k.depth
    return tuple(x - 1 for x in k.parts)


def variant_is_star(variant: str) -> bool:
    return variant in _STAR_VARIANTS


def compositions(weight: int, depth: int | None = None) -> list[tuple[int, ...]]:
    """All compositions of `weight` (optionally of fixed depth), in
    lexicographic order."""
    if weight < 0:
        raise ValueError("negative weight")
    out: list[tuple[int, ...]] = []

    def rec(rem: int, acc: tuple[int, ...]):
        if rem == 0:
            if depth is None or len(acc) == depth:
                out.append(acc)
            return
        if depth is not None and len(acc) >= depth:
            return
        for first in range(1, rem + 1):
            rec(rem - first, acc + (first,))

    rec(weight, ())
    return sorted(out)


def nonneg_vectors(depth: int, total: int) -> Iterator[tuple[int, ...]]:
    """All vectors in Z_{>=0}^depth with entry sum exactly `total`."""
    if depth == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in nonneg_vectors(depth - 1, total - first):
            yield (first,) + rest


def hoffman_dual(k: Index) -> Index:
    """Write each part as 1+...+1 and swap commas with plus signs.

    Under the bijection between compositions of w and subsets of {1..w-1}
    (cut positions), this is complementation; it is an involution that
    preserves weight.
    """
    if k.depth == 0:
        raise ValueError("the empty index has no Hoffman dual")
    w = k.weight
    cuts = set()
    s = 0
    for part in k.parts[:-1]:
        s += part
        cuts.add(s)
    out, prev = [], 0
    for c in [i for i in range(1, w) if i not in cuts] + [w]:
        out.append(c - prev)
        prev = c
    return Index(out)


def star_decompose(k: Index) -> list[Index]:
    """All 2^(d-1) indices k1 [] k2 [] ... [] kd with [] a comma or a plus.

    The classical (q -> 1) star sum of k is the sum of plain sums over this
    list.  For q-sums the exact decomposition needs the merged-part counts
    of `star_contractions`: a merged block of c parts summing to K carries
    numerator exponent K - c rather than the plain K - 1.
    """
    if k.depth == 0:
        raise ValueError("empty index")
    return [idx for idx, _ in star_contractions(k)]


def star_contractions(k: Index) -> list[tuple[Index, tuple[int, ...]]]:
    """Contractions together with how many original parts merged into each
    resulting part."""
    if k.depth == 0:
        raise ValueError("empty index")
    out = [((k.parts[0],), (1,))]
    for part in k.parts[1:]:
        nxt = []
        for idx, cnt in out:
            nxt.append((idx + (part,), cnt + (1,)))
            nxt.append((idx[:-1] + (idx[-1] + part,), cnt[:-1] + (cnt[-1] + 1,)))
        out = nxt
    return [(Index(t), c) for t, c in out]


def star_decompose_signed(k: Index) -> list[tuple[int, Index]]:
    """Inclusion-exclusion companion: (-1)^{#plus} signs for expressing the
    plain sum through star sums."""
    if k.depth == 0:
        raise ValueError("empty index")
    out = [(0, (k.parts[0],))]
    for part in k.parts[1:]:
        nxt = []
        for plus_count, partial in out:
            nxt.append((plus_count, partial + (part,)))
            nxt.append((plus_count + 1, partial[:-1] + (partial[-1] + part,)))
        out = nxt
    return [((-1) ** c, Index(t)) for c, t in out]


def b_binom(k: Index | Sequence[int], l: ExpVector | Sequence[int]) -> int:
    """prod_j C(k_j + l_j - 1, l_j)."""
    kp = k.parts if isinstance(k, Index) else tuple(k)
    lp = l.entries if isinstance(l, ExpVector) else tuple(l)
    if len(kp) != len(lp):
        raise ValueError("length mismatch")
    out = 1
    for kj, lj in zip(kp, lp):
        out *= comb(kj + lj - 1, lj)
    return out


_STIRLING2: dict[tuple[int, int], int] = {(0, 0): 1}


def stirling2(j: int, n: int) -> int:
    """Stirling number of the second kind; S(0,0) = 1, S(j+1,n) = S(j,n-1) + n S(j,n)."""
    if j < 0 or n < 0:
        raise ValueError("nonnegative arguments required")
    if n > j:
        return 0
    if (j, n) not in _STIRLING2:
        if j == 0 or n == 0:
            _STIRLING2[(j, n)] = 1 if j == n else 0
        else:
            _STIRLING2[(j, n)] = stirling2(j - 1, n - 1) + n * stirling2(j - 1, n)
    return _STIRLING2[(j, n)]


def orbits(k: int, d: int) -> list[list[Index]]:
    """Orbits of weight-k, depth-d indices under cyclic rotation.

    Each orbit lists its distinct rotations starting from the
    lexicographically smallest; orbits are sorted by that representative.
    The orbit size always divides d.
    """
    if d < 1 or k < d:
        raise ValueError("need 1 <= d <= k")
    seen: set[tuple[int, ...]] = set()
    out: list[list[Index]] = []
    for comp in compositions(k, d):
        if comp in seen:
            continue
        rots: list[tuple[int, ...]] = []
        cur = comp
        for _ in range(d):
            if cur not in rots:
                rots.append(cur)
            cur = cur[1:] + cur[:1]
        seen.update(rots)
        rep = min(rots)
        i = rots.index(rep)
        out.append([Index(t) for t in rots[i:] + rots[:i]])
    out.sort(key=lambda orbit: orbit[0].parts)
    return out
