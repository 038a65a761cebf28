"""Exact linear algebra over Q.

Fraction-free (integer-preserving) Gaussian elimination after clearing
denominators: pivoting uses cross-multiplication followed by a gcd strip of
each updated row, so entries stay integral throughout.  Rank, nullspace,
row-span membership with certificates, and prefix-column ranks (used by the
prime-set stabilization check) are all derived from one echelon pass.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Row = list[int]


def clear_denominators(row: Sequence[Fraction | int]) -> Row:
    lcm = 1
    for x in row:
        if isinstance(x, Fraction):
            d = x.denominator
            lcm = lcm * d // gcd(lcm, d)
    return [int(x * lcm) if isinstance(x, Fraction) else x * lcm for x in row]


def _strip_gcd(row: Row) -> Row:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


class Echelon:
    """Incremental integer row echelon form.

    Rows are inserted one at a time and reduced against existing pivots;
    a surviving nonzero row becomes a new pivot row.  `aug` carries an
    optional tracking block (row = combination of inserted rows), which is
    scaled together with the row so certificates stay consistent.
    """

    def __init__(self, ncols: int, track: bool = False):
        self.ncols = ncols
        self.track = track
        self.rows: list[Row] = []
        self.tracks: list[Row] = []
        self.pivot_cols: list[int] = []
        self.n_inserted = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def insert(self, row: Sequence[Fraction | int]) -> bool:
        """Insert a row; returns True if it increased the rank."""
        scale = 1
        if any(isinstance(x, Fraction) for x in row):
            for x in row:
                if isinstance(x, Fraction):
                    scale = scale * x.denominator // gcd(scale, x.denominator)
            r = [int(x * scale) for x in row]
        else:
            r = list(row)
        if len(r) != self.ncols:
            raise ValueError("row length mismatch")
        # tracking identity: echelon row = sum_j track_j * (original row j)
        t = [0] * self.n_inserted + [scale] if self.track else []
        for tr in self.tracks:
            tr.append(0)
        self.n_inserted += 1
        for i, (erow, pc) in enumerate(zip(self.rows, self.pivot_cols)):
            c = r[pc]
            if c:
                pv = erow[pc]
                r = [pv * x - c * y for x, y in zip(r, erow)]
                if self.track:
                    t = [pv * x - c * y for x, y in zip(t, self.tracks[i])]
                g = _row_pair_gcd(r, t)
                if g > 1:
                    r = [x // g for x in r]
                    if self.track:
                        t = [x // g for x in t]
        pc = next((j for j, x in enumerate(r) if x), None)
        if pc is None:
            return False
        pos = 0
        while pos < len(self.pivot_cols) and self.pivot_cols[pos] < pc:
            pos += 1
        self.rows.insert(pos, r)
        self.pivot_cols.insert(pos, pc)
        if self.track:
            self.tracks.insert(pos, t)
        return True

    def rank_of_column_prefix(self, ncols: int) -> int:
        """Rank of the submatrix of the first `ncols` columns (pivots are
        found scanning columns left to right, so prefix ranks read off the
        pivot list)."""
        return sum(1 for c in self.pivot_cols if c < ncols)

    def reduce_vector(self, vec: Sequence[Fraction | int]):
        """Forward-reduce a vector against the echelon rows.

        Returns (residual, combo) with residual = vec - sum combo_i * row_i
        as Fractions; the residual vanishes on all pivot columns.
        """
        r = [Fraction(x) for x in vec]
        combo = [Fraction(0)] * len(self.rows)
        for i, (erow, pc) in enumerate(zip(self.rows, self.pivot_cols)):
            c = r[pc]
            if c:
                f = c / erow[pc]
                combo[i] = f
                for j, y in enumerate(erow):
                    if y:
                        r[j] -= f * y
        return r, combo

    def separating_functional(self, jstar: int) -> list[Fraction]:
        """A covector u vanishing on the row span with u[jstar] = 1.

        Valid whenever jstar is not a pivot column.  Supported on jstar and
        the pivot columns; solved by back-substitution.
        """
        if jstar in self.pivot_cols:
            raise ValueError("jstar must not be a pivot column")
        u = [Fraction(0)] * self.ncols
        u[jstar] = Fraction(1)
        for i in range(len(self.rows) - 1, -1, -1):
            erow, pc = self.rows[i], self.pivot_cols[i]
            s = sum((Fraction(erow[j]) * u[j] for j in range(pc + 1, self.ncols) if u[j] and erow[j]), Fraction(0))
            u[pc] = -s / erow[pc]
        return u

    def nullspace(self) -> list[list[Fraction]]:
        """Canonical nullspace basis: one vector per free column f, with
        coordinate f equal to 1 and other free coordinates 0."""
        pivots = set(self.pivot_cols)
        basis = []
        for f in range(self.ncols):
            if f in pivots:
                continue
            x = [Fraction(0)] * self.ncols
            x[f] = Fraction(1)
            for i in range(len(self.rows) - 1, -1, -1):
                erow, pc = self.rows[i], self.pivot_cols[i]
                s = sum((Fraction(erow[j]) * x[j] for j in range(pc + 1, self.ncols) if x[j] and erow[j]), Fraction(0))
                x[pc] = -s / erow[pc]
            basis.append(x)
        return basis


def _row_pair_gcd(r: Row, t: Row) -> int:
    g = 0
    for x in r:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    for x in t:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g if g else 1


def echelon_of(rows: Sequence[Sequence[Fraction | int]], track: bool = False) -> Echelon:
    rows = list(rows)
    if not rows:
        return Echelon(0, track)
    ech = Echelon(len(rows[0]), track)
    for row in rows:
        ech.insert(row)
    return ech


def rank(rows: Sequence[Sequence[Fraction | int]]) -> int:
    """Exact rank by fraction-free elimination."""
    return echelon_of(rows).rank


def nullspace(rows: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} (unknowns indexed by columns)."""
    return echelon_of(rows).nullspace()


def rank_naive(rows: Sequence[Sequence[Fraction | int]]) -> int:
    """Textbook rational Gaussian elimination; oracle for `rank`."""
    mat = [[Fraction(x) for x in row] for row in rows]
    r = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col] / mat[r][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
    return r


def in_row_span(
    vectors: Sequence[Sequence[Fraction | int]],
    target: Sequence[Fraction | int],
):
    """Decide whether target is a Q-linear combination of the given vectors.

    Returns (True, coefficients, None) with exact coefficients over the
    original vectors, or (False, None, u) where u is a separating
    functional: u . v = 0 for every input vector but u . target != 0.
    """
    vectors = list(vectors)
    ncols = len(target)
    ech = Echelon(ncols, track=True)
    for v in vectors:
        ech.insert(v)
    residual, _ = ech.reduce_vector(target)
    jstar = next((j for j, x in enumerate(residual) if x), None)
    if jstar is None:
        # recompute the combination in terms of the original vectors
        r = [Fraction(x) for x in target]
        coeffs = [Fraction(0)] * len(vectors)
        for i, (erow, pc) in enumerate(zip(ech.rows, ech.pivot_cols)):
            c = r[pc]
            if c:
                f = c / erow[pc]
                for j, y in enumerate(erow):
                    if y:
                        r[j] -= f * y
                for j, t in enumerate(ech.tracks[i]):
                    if t:
                        coeffs[j] += f * t
        return True, coeffs, None
    return False, None, ech.separating_functional(jstar)
