"""Spanning families of weighted harmonic q-sum values, their exact
vectorization over a finite prime set, and Q-linear relation mining.

A generator p^h (1-q)^j zeta(k; s) is vectorized, prime by prime, into the
integer coefficient sequence of its residue modulo [p]^n; ranks and
nullspaces over Q of the stacked vectors give "numerical dimensions" and
candidate relations, certified only on the prime set used.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .engine import get_engine
from .indexes import ExpVector, Index, compositions, variant_exponents
from .linalg import Echelon, in_row_span, nullspace, rank, rank_naive  # re-exported

__all__ = [
    "FAMILIES", "GeneratorDescriptor", "DimReport", "RelationCandidate",
    "gens", "family_depth", "default_prime_set", "vectorize", "vectorize_many",
    "dim_tilde", "find_relations", "membership", "MembershipResult",
    "rank", "nullspace", "rank_naive", "VectorCache",
]

FAMILIES = ("O", "Q", "O2")

CACHE_VERSION = "qmzv-vec-1"


def family_depth(family: str) -> int:
    """Power of [p] used by the family's vectorization."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    return 2 if family == "O2" else 1


@dataclass(frozen=True)
class GeneratorDescriptor:
    """One spanning element p^h (1-q)^j zeta(index; s), optionally carrying
    an extra [p] factor (the bracket set of the mod-[p]^2 family)."""

    h: int
    j: int
    index: Index
    s: ExpVector | None = None
    pbracket: bool = False

    def key(self) -> tuple:
        s = None if self.s is None else self.s.entries
        return (self.pbracket, self.j, self.h, self.index.parts, s)

    def label(self) -> str:
        body = f"zeta({self.index}" + (f";{','.join(map(str, self.s))}" if self.s is not None else "") + ")"
        parts = []
        if self.pbracket:
            parts.append("[p]")
        if self.h:
            parts.append(f"p^{self.h}" if self.h > 1 else "p")
        if self.j:
            parts.append(f"(1-q)^{self.j}" if self.j > 1 else "(1-q)")
        parts.append(body)
        return "*".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "h": self.h,
            "j": self.j,
            "index": list(self.index.parts),
            "s": None if self.s is None else list(self.s.entries),
            "pbracket": self.pbracket,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "GeneratorDescriptor":
        return GeneratorDescriptor(
            h=int(d.get("h", 0)),
            j=int(d.get("j", 0)),
            index=Index(d["index"]),
            s=None if d.get("s") is None else ExpVector(d["s"]),
            pbracket=bool(d.get("pbracket", False)),
        )


def _exp_vectors_bounded(k: Index) -> list[ExpVector]:
    out = [()]
    for part in k.parts:
        out = [tup + (s,) for tup in out for s in range(part + 1)]
    return [ExpVector(t) for t in sorted(out)]


def gens(family: str, k: int) -> list[GeneratorDescriptor]:
    """Deterministic generator list.

    Ordering: for O/Q, (j ascending, h ascending, index lexicographic,
    s lexicographic); for O2 the plain block in that order followed by the
    [p]-multiplied block (j up to k+1) in the same order.
    """
    if k < 0:
        raise ValueError("k >= 0 required")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    out: list[GeneratorDescriptor] = []
    for j in range(k + 1):
        for h in range(j + 1):
            for comp in compositions(k - j):
                idx = Index(comp)
                if family == "Q":
                    out.extend(GeneratorDescriptor(h, j, idx, s) for s in _exp_vectors_bounded(idx))
                else:
                    out.append(GeneratorDescriptor(h, j, idx))
    if family == "O2":
        for j in range(k + 2):
            for h in range(j + 1):
                for comp in compositions(k + 1 - j):
                    out.append(GeneratorDescriptor(h, j, Index(comp), pbracket=True))
    return out


def v_space_gens(family: str, k: int) -> list[GeneratorDescriptor]:
    """Generators of (1-q) Z_{k-1} + p (1-q) Z_{k-1} (the quotient's
    denominator space); they are syntactically members of the weight-k
    family."""
    if k < 1:
        raise ValueError("k >= 1 required")
    out = []
    for g in gens(family, k - 1):
        out.append(GeneratorDescriptor(g.h, g.j + 1, g.index, g.s, g.pbracket))
        out.append(GeneratorDescriptor(g.h + 1, g.j + 1, g.index, g.s, g.pbracket))
    return out


# ---------------------------------------------------------------------------
# prime sets
# ---------------------------------------------------------------------------
def primes_upto(bound: int) -> list[int]:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(bound**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i, b in enumerate(sieve) if b]


def next_primes_after(start: int, count: int) -> list[int]:
    out = []
    cand = start + 1
    while len(out) < count:
        if all(cand % p for p in primes_upto(int(cand**0.5) + 1)[0:]):
            if cand > 1:
                out.append(cand)
        cand += 1
    return out


def default_prime_set(k: int, bound: int = 97) -> list[int]:
    """All primes p with k+1 < p <= bound (drops the small excluded primes)."""
    return [p for p in primes_upto(bound) if p > k + 1]


# ---------------------------------------------------------------------------
# vectorization
# ---------------------------------------------------------------------------
class VectorCache:
    """Disk cache of per-prime residue vectors, keyed by descriptor.

    Layout: <dir>/<CACHE_VERSION>/p<p>_n<n>.json mapping descriptor keys to
    integer coefficient lists.  Concurrent readers are fine; the writer
    rewrites whole files atomically.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root) / CACHE_VERSION
        self.root.mkdir(parents=True, exist_ok=True)
        self._loaded: dict[tuple[int, int], dict[str, list[int]]] = {}

    def _path(self, p: int, n: int) -> Path:
        return self.root / f"p{p}_n{n}.json"

    def bucket(self, p: int, n: int) -> dict[str, list[int]]:
        key = (p, n)
        if key not in self._loaded:
            path = self._path(p, n)
            if path.exists():
                with open(path) as fh:
                    self._loaded[key] = {k: [int(x) for x in v] for k, v in json.load(fh).items()}
            else:
                self._loaded[key] = {}
        return self._loaded[key]

    def store(self, p: int, n: int, new_entries: dict[str, list[int]]):
        bucket = self.bucket(p, n)
        bucket.update(new_entries)
        tmp = self._path(p, n).with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump({k: [str(x) for x in v] for k, v in bucket.items()}, fh)
        tmp.replace(self._path(p, n))


def _desc_cache_key(d: GeneratorDescriptor) -> str:
    return repr(d.key())


def _pattern_of(d: GeneratorDescriptor) -> tuple:
    if d.s is None:
        es = variant_exponents("plain", d.index)
    else:
        es = variant_exponents("generalized", d.index, d.s)
    return tuple(zip(d.index.parts, es))


def _finish_residue(eng, p: int, d: GeneratorDescriptor, base: list[int]) -> list[int]:
    v = base
    if d.j:
        v = eng.mul(v, eng.pow(eng.one_minus_q(), d.j))
    if d.pbracket:
        v = eng.mul(v, eng.qint_p())
    if d.h:
        v = eng.scale(v, p**d.h)
    return v


def _residue_for(p: int, n: int, d: GeneratorDescriptor) -> list[int]:
    eng = get_engine(p, n)
    pattern = _pattern_of(d)
    return _finish_residue(eng, p, d, eng.hsum([k for k, _ in pattern], [e for _, e in pattern]))


def _prime_block(args) -> tuple[int, dict[str, list[int]]]:
    """All requested residues at one prime; the underlying sums run in a
    single batched sweep that shares common index suffixes."""
    p, n, desc_dicts = args
    descs = [GeneratorDescriptor.from_json_dict(dd) for dd in desc_dicts]
    eng = get_engine(p, n)
    sums = eng.hsum_batch([_pattern_of(d) for d in descs])
    return p, {
        _desc_cache_key(d): _finish_residue(eng, p, d, sums[_pattern_of(d)]) for d in descs
    }


def vectorize_many(
    descriptors: Sequence[GeneratorDescriptor],
    S: Sequence[int],
    n: int,
    jobs: int | None = None,
    cache: VectorCache | None = None,
) -> dict[GeneratorDescriptor, list[int]]:
    """Residue vectors for all descriptors, concatenated over the primes of
    S in order; each prime contributes n(p-1) integer coordinates.

    Work is split per prime (optionally across processes); results are
    deterministic regardless of scheduling.
    """
    S = list(S)
    if not S:
        raise ValueError("empty prime set")
    descriptors = list(descriptors)
    per_prime: dict[int, dict[str, list[int]]] = {}
    todo: list[tuple[int, int, list[dict]]] = []
    for p in S:
        have = cache.bucket(p, n) if cache is not None else {}
        missing = [d for d in descriptors if _desc_cache_key(d) not in have]
        per_prime[p] = {k: have[k] for k in map(_desc_cache_key, descriptors) if k in have}
        if missing:
            todo.append((p, n, [d.to_json_dict() for d in missing]))
    if todo:
        jobs = jobs if jobs is not None else _default_jobs()
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_prime_block, todo))
        else:
            results = [_prime_block(t) for t in todo]
        for p, block in results:
            per_prime[p].update(block)
            if cache is not None:
                cache.store(p, n, block)
    out = {}
    for d in descriptors:
        key = _desc_cache_key(d)
        vec: list[int] = []
        for p in S:
            coeffs = per_prime[p][key]
            cap = n * (p - 1)
            vec.extend(list(coeffs) + [0] * (cap - len(coeffs)))
        out[d] = vec
    return out


def vectorize(
    g: GeneratorDescriptor,
    S: Sequence[int],
    n: int,
    cache: VectorCache | None = None,
) -> list[int]:
    """Exact vector of one generator over the prime set."""
    return vectorize_many([g], S, n, cache=cache)[g]


def _default_jobs() -> int:
    env = os.environ.get("QMZV_JOBS")
    if env:
        return max(1, int(env))
    return max(1, min(4, os.cpu_count() or 1))


# ---------------------------------------------------------------------------
# dimensions
# ---------------------------------------------------------------------------
@dataclass
class DimReport:
    family: str
    k: int
    primes: list[int]
    rank_full: int
    rank_v: int
    stabilized: bool

    @property
    def dim_tilde(self) -> int:
        return self.rank_full - self.rank_v


def _prefix_ranks(rows: Iterable[Sequence[int]], cuts: Sequence[int]) -> list[int]:
    if not cuts:
        return []
    ech = Echelon(cuts[-1])
    for row in rows:
        ech.insert(row)
    return [ech.rank_of_column_prefix(c) for c in cuts]


def dim_tilde(
    family: str,
    k: int,
    S: Sequence[int] | None = None,
    jobs: int | None = None,
    cache: VectorCache | None = None,
    stabilization_primes: int = 2,
) -> DimReport:
    """Numerical dimension of the weight-k family modulo
    (1-q) Z_{k-1} + p (1-q) Z_{k-1}.

    Both ranks are computed over S and re-checked after appending the next
    `stabilization_primes` primes; `stabilized` records that neither rank
    moved under either extension.
    """
    if k < 1:
        raise ValueError("k >= 1 required")
    n = family_depth(family)
    S = list(S) if S is not None else default_prime_set(k)
    ext = next_primes_after(max(S), stabilization_primes)
    full_S = S + ext
    gens_full = gens(family, k)
    gens_v = v_space_gens(family, k)
    vecs = vectorize_many(gens_full + gens_v, full_S, n, jobs=jobs, cache=cache)
    cuts = []
    acc = 0
    for i, p in enumerate(full_S):
        acc += n * (p - 1)
        if i >= len(S) - 1:
            cuts.append(acc)
    full_ranks = _prefix_ranks((vecs[g] for g in gens_full), cuts)
    v_ranks = _prefix_ranks((vecs[g] for g in gens_v), cuts)
    stabilized = len(set(full_ranks)) == 1 and len(set(v_ranks)) == 1
    return DimReport(family, k, S, full_ranks[0], v_ranks[0], stabilized)


# ---------------------------------------------------------------------------
# relation candidates
# ---------------------------------------------------------------------------
@dataclass
class RelationCandidate:
    basis: list[GeneratorDescriptor]
    coefficients: list[Fraction]

    def normalized(self) -> "RelationCandidate":
        """Primitive integer coefficients with positive first nonzero entry."""
        from math import gcd

        lcm = 1
        for c in self.coefficients:
            lcm = lcm * c.denominator // gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coefficients]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g:
            ints = [x // g for x in ints]
        lead = next((x for x in ints if x), 0)
        if lead < 0:
            ints = [-x for x in ints]
        return RelationCandidate(self.basis, [Fraction(x) for x in ints])

    def nonzero_items(self) -> list[tuple[GeneratorDescriptor, Fraction]]:
        return [(g, c) for g, c in zip(self.basis, self.coefficients) if c]

    def to_json_dict(self) -> dict:
        return {
            "basis": [g.to_json_dict() for g in self.basis],
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coefficients],
        }


def _substitutes_to_zero(items: Sequence[tuple[GeneratorDescriptor, Fraction]], S: Sequence[int], n: int) -> bool:
    """Independent re-check: sum c_g * residue(g) = 0 at every prime,
    recomputed from the residues rather than the elimination."""
    for p in S:
        cap = n * (p - 1)
        acc = [Fraction(0)] * cap
        for g, c in items:
            for i, x in enumerate(_residue_for(p, n, g)):
                if x:
                    acc[i] += c * x
        if any(acc):
            return False
    return True


def find_relations(
    family: str,
    k: int,
    S: Sequence[int] | None = None,
    jobs: int | None = None,
    cache: VectorCache | None = None,
) -> list[RelationCandidate]:
    """Nullspace basis of the stacked generator vectors: each candidate is a
    Q-linear combination of generators vanishing at every prime of S.
    Candidates are re-verified by direct substitution before being returned.
    """
    if k < 1:
        raise ValueError("k >= 1 required")
    n = family_depth(family)
    S = list(S) if S is not None else default_prime_set(k)
    basis = gens(family, k)
    vecs = vectorize_many(basis, S, n, jobs=jobs, cache=cache)
    length = len(next(iter(vecs.values())))
    ech = Echelon(len(basis))
    for i in range(length):
        ech.insert([vecs[g][i] for g in basis])
        if ech.rank == len(basis):
            break
    out = []
    for coeffs in ech.nullspace():
        cand = RelationCandidate(basis, coeffs).normalized()
        if not _substitutes_to_zero(cand.nonzero_items(), S, n):
            raise AssertionError("nullspace candidate failed substitution re-check")
        out.append(cand)
    return out


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------
@dataclass
class MembershipResult:
    member: bool
    primes: list[int]
    coefficients: list[Fraction] | None  # over the span descriptors when member
    separating_functional: list[Fraction] | None

    def note(self) -> str:
        verdict = "inside" if self.member else "outside"
        return f"{verdict} the span over S = {self.primes} (certified on S only)"


def membership(
    target: Sequence[tuple[Fraction, GeneratorDescriptor]],
    span: Sequence[GeneratorDescriptor],
    S: Sequence[int] | None = None,
    n: int = 1,
    jobs: int | None = None,
    cache: VectorCache | None = None,
) -> MembershipResult:
    """Exact linear-system membership of a combination of descriptors in the
    span of others, over the given prime set."""
    span = list(span)
    weight = max(
        [g.index.weight + g.j for g in span]
        + [g.index.weight + g.j for _, g in target]
    )
    S = list(S) if S is not None else default_prime_set(weight)
    everything = span + [g for _, g in target]
    vecs = vectorize_many(everything, S, n, jobs=jobs, cache=cache)
    length = len(next(iter(vecs.values())))
    tvec = [Fraction(0)] * length
    for c, g in target:
        for i, x in enumerate(vecs[g]):
            if x:
                tvec[i] += c * x
    ok, coeffs, functional = in_row_span([vecs[g] for g in span], tvec)
    return MembershipResult(ok, S, coeffs, functional)
