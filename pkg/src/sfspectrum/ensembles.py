"""Seeded random instance generators for cross-checking the decision routes.

The binary generator produces linearly parameterized systems satisfying the
binary assumption by construction: every parameter is placed as a 0/1
rectangle inside the block matrix [A B; C 0], with the rectangle confined to
the state rows or the state columns so the zero block stays untouched.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .fixedmodes import NumericSystem
from .polymatrix import ParamMatrix, ParamPoly
from .system import MultiChannelSystem

__all__ = ["random_binary_system", "random_numeric_system"]


def random_binary_system(
    seed: int,
    max_n: int = 4,
    max_k: int = 2,
    max_width: int = 2,
    density: tuple[float, float] = (0.2, 0.8),
) -> MultiChannelSystem:
    """A random binary linearly parameterized multi-channel system."""
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_k)
    channels = tuple((rng.randint(0, max_width), rng.randint(0, max_width)) for _ in range(k))
    m = sum(mi for mi, _ in channels)
    l = sum(li for _, li in channels)
    rows_total = n + l
    cols_total = n + m
    allowed_cells = rows_total * cols_total - l * m
    target = max(1, round(rng.uniform(*density) * allowed_cells))

    incidences: dict[tuple[int, int], list[int]] = {}
    placed = 0
    q = 0
    while placed < target:
        # rectangles in the state rows may span input columns (A/B side);
        # rectangles in the state columns may span output rows (A/C side)
        if rng.random() < 0.5:
            row_pool, col_pool = range(n), range(cols_total)
        else:
            row_pool, col_pool = range(rows_total), range(n)
        wide = rng.random() < 0.25
        size = 2 if wide else 1
        rows = rng.sample(row_pool, min(len(row_pool), size))
        cols = rng.sample(col_pool, min(len(col_pool), size))
        for i in rows:
            for j in cols:
                incidences.setdefault((i, j), []).append(q)
                placed += 1
        q += 1

    def poly_at(i: int, j: int) -> ParamPoly:
        total = ParamPoly.zero()
        for r in set(incidences.get((i, j), ())):
            total = total + ParamPoly.param(r)
        return total

    A = ParamMatrix.from_rows(
        [[poly_at(i, j) for j in range(n)] for i in range(n)], q
    )
    B_blocks = []
    C_blocks = []
    col_at = n
    for m_i, _ in channels:
        B_blocks.append(
            ParamMatrix.from_rows(
                [[poly_at(i, col_at + jj) for jj in range(m_i)] for i in range(n)], q
            )
            if m_i
            else ParamMatrix.zeros(n, 0, q)
        )
        col_at += m_i
    row_at = n
    for _, l_i in channels:
        C_blocks.append(
            ParamMatrix.from_rows(
                [[poly_at(row_at + ii, j) for j in range(n)] for ii in range(l_i)], q
            )
            if l_i
            else ParamMatrix.zeros(0, n, q)
        )
        row_at += l_i
    return MultiChannelSystem(
        n=n,
        channels=channels,
        A=A,
        B_blocks=tuple(B_blocks),
        C_blocks=tuple(C_blocks),
        q=q,
    )


def random_numeric_system(
    seed: int,
    max_n: int = 5,
    max_k: int = 3,
    max_width: int = 2,
) -> NumericSystem:
    """A random numeric system with small integer entries.

    Half the draws get decoupling structure (triangular A, channels touching
    only parts of the state) so fixed spectra actually occur in the ensemble.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_k)
    channels = [(rng.randint(0, max_width), rng.randint(0, max_width)) for _ in range(k)]
    structured = rng.random() < 0.5

    def cell() -> Fraction:
        if rng.random() < 0.45:
            return Fraction(0)
        return Fraction(rng.randint(-3, 3))

    A = [[cell() for _ in range(n)] for _ in range(n)]
    if structured:
        for i in range(n):
            for j in range(i + 1, n):
                A[i][j] = Fraction(0)
        for i in range(n):
            A[i][i] = Fraction(rng.randint(-3, 3))
    B_blocks = []
    C_blocks = []
    for m_i, l_i in channels:
        B = [[cell() for _ in range(m_i)] for _ in range(n)]
        C = [[cell() for _ in range(n)] for _ in range(l_i)]
        if structured and n > 1:
            # confine the channel to a slice of the state
            lo = rng.randint(0, n - 1)
            hi = rng.randint(lo, n - 1)
            for i in range(n):
                if not lo <= i <= hi:
                    for jj in range(m_i):
                        B[i][jj] = Fraction(0)
            lo = rng.randint(0, n - 1)
            hi = rng.randint(lo, n - 1)
            for ii in range(l_i):
                for j in range(n):
                    if not lo <= j <= hi:
                        C[ii][j] = Fraction(0)
        B_blocks.append(B)
        C_blocks.append(C)
    return NumericSystem(
        n=n,
        channels=tuple(channels),
        A=tuple(tuple(row) for row in A),
        B_blocks=tuple(tuple(tuple(row) for row in B) for B in B_blocks),
        C_blocks=tuple(tuple(tuple(row) for row in C) for C in C_blocks),
    )
