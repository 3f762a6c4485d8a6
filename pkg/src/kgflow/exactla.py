"""Exact sparse linear algebra over the rationals.

Rows are kept as primitive integer vectors (``dict`` column -> int) and
eliminated fraction-free; every row operation divides out the content, so
entries stay small.  The reduced row echelon form is unique, which makes
kernels and solutions independent of the order in which rows are added.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

__all__ = [
    "RatMatrix",
    "Echelon",
    "kernel_basis",
    "rank",
    "solve_affine",
    "AffineSolution",
]


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _integral(row) -> dict:
    """Scale a rational row to a primitive integer row (zeros dropped)."""
    items = [(c, Fraction(v)) for c, v in row.items() if v]
    if not items:
        return {}
    den = 1
    for _, v in items:
        den = lcm(den, v.denominator)
    return _primitive({c: int(v * den) for c, v in items})


@dataclass
class RatMatrix:
    """Sparse rational matrix; ``entries`` maps ``(row, col)`` to a nonzero value."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {rc: Fraction(v) for rc, v in self.entries.items() if v}

    @classmethod
    def from_rows(cls, rows: Iterable, cols: int) -> "RatMatrix":
        entries = {}
        n = 0
        for r, row in enumerate(rows):
            n = r + 1
            for c, v in row.items():
                if v:
                    entries[(r, c)] = v
        return cls(n, cols, entries)

    @classmethod
    def from_dense(cls, data) -> "RatMatrix":
        data = [list(r) for r in data]
        cols = len(data[0]) if data else 0
        return cls(len(data), cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r) if v})

    def row_dicts(self) -> list:
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __matmul__(self, x):
        y = [Fraction(0)] * self.rows
        for (r, c), v in self.entries.items():
            y[r] += v * x[c]
        return y

    def dump(self) -> str:
        """Line format ``row col p/q`` sorted by position."""
        return "".join(f"{r} {c} {v}\n" for (r, c), v in sorted(self.entries.items()))


class Echelon:
    """Incrementally built row echelon form.

    ``add_row`` reduces against existing pivots (leading column first) and
    stores the remainder as a new pivot row; ``reduced()`` back-substitutes to
    the unique RREF.
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        heap = [c for c in row if c in self.pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = row.get(c)
            if not a:
                continue
            p = self.pivots[c]
            b = p[c]
            g = gcd(a, b)
            ma, mb = b // g, a // g
            if ma != 1:
                for col in row:
                    row[col] *= ma
            for col, v in p.items():
                nv = row.get(col, 0) - mb * v
                if nv:
                    if col not in row and col in self.pivots and col != c:
                        heapq.heappush(heap, col)
                    row[col] = nv
                else:
                    row.pop(col, None)
            if row:
                row = _primitive(row)
        return row

    def add_row(self, row) -> bool:
        """Add a rational row; return True if it increased the rank."""
        row = _integral(row)
        if not row:
            return False
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def add_int_row(self, row: dict) -> bool:
        row = {c: v for c, v in row.items() if v}
        if not row:
            return False
        row = self.reduce(_primitive(row))
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def reduced(self) -> dict:
        """Unique RREF as ``{pivot col: {col: Fraction}}`` with pivot entries 1."""
        done: dict = {}
        for c in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[c])
            for col in sorted((x for x in row if x != c and x in done)):
                a = row.get(col)
                if not a:
                    continue
                q = done[col]
                b = q[col]
                g = gcd(a, b)
                ma, mb = b // g, a // g
                if ma != 1:
                    for k in row:
                        row[k] *= ma
                for k, v in q.items():
                    nv = row.get(k, 0) - mb * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                row = _primitive(row)
            done[c] = row
        out = {}
        for c, row in done.items():
            piv = row[c]
            out[c] = {k: Fraction(v, piv) for k, v in row.items()}
        return out


def _echelon_of(M: RatMatrix) -> Echelon:
    ech = Echelon()
    for row in M.row_dicts():
        ech.add_row(row)
    return ech


def rank(M: RatMatrix) -> int:
    return len(_echelon_of(M))


def _kernel_from_rref(rref: dict, cols: int) -> list:
    free = [c for c in range(cols) if c not in rref]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for p, row in rref.items():
            v = row.get(f)
            if v:
                x[p] = -v
        basis.append(x)
    return basis


def kernel_basis(M: RatMatrix) -> list:
    """Basis of ``{x : Mx = 0}``.

    One vector per free column ``f`` of the RREF, with ``x[f] = 1`` and zeros
    on the other free columns; ordered by ``f``.
    """
    return _kernel_from_rref(_echelon_of(M).reduced(), M.cols)


@dataclass
class AffineSolution:
    particular: list
    kernel: list


def solve_affine(M: RatMatrix, b) -> AffineSolution | None:
    """Solve ``Mx = b`` exactly; ``None`` when the system is inconsistent."""
    rows = M.row_dicts()
    aug = M.cols
    ech = Echelon()
    for r, row in enumerate(rows):
        row = dict(row)
        if b[r]:
            row[aug] = b[r]
        ech.add_row(row)
    for r in range(len(rows), len(b)):
        if b[r]:
            return None
    rref = ech.reduced()
    if aug in rref:
        return None
    x = [Fraction(0)] * M.cols
    for p, row in rref.items():
        x[p] = row.get(aug, Fraction(0))
    kernel = _kernel_from_rref({p: {c: v for c, v in row.items() if c != aug} for p, row in rref.items()}, M.cols)
    return AffineSolution(x, kernel)
