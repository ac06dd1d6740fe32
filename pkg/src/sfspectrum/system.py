"""Multi-channel system model: channel bookkeeping and parameterization class.

A k-channel system couples a state matrix A with per-channel input blocks B_i
and output blocks C_i, all parameterized over one shared vector of q
algebraically independent parameters.  This module stacks and splits the
channel blocks, builds the block-diagonal feedback pattern that decentralized
output feedback admits, and classifies the parameterization (polynomial /
linear / binary / unitary) by factoring each parameter's constant derivative
matrix into a rank-one product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .polymatrix import ParamMatrix, ParamPoly

__all__ = [
    "MultiChannelSystem",
    "ChannelSubset",
    "FeedbackPattern",
    "LinearParamDecomposition",
    "RankOneTerm",
    "Classification",
    "NotLinearlyParameterized",
    "all_subsets",
    "stack",
    "split",
    "feedback_pattern",
    "detect_linear_parameterization",
    "is_polynomially_parameterized",
    "classify",
]


class NotLinearlyParameterized(ValueError):
    """Raised when a system fails the linear-parameterization test.

    ``param_index`` names the offending parameter when one is identifiable
    (None for entry-level failures such as a constant term).
    """

    def __init__(self, reason: str, param_index: int | None = None):
        super().__init__(reason)
        self.reason = reason
        self.param_index = param_index


@dataclass(frozen=True)
class ChannelSubset:
    """A subset of channel indices (0-based, strictly increasing)."""

    members: tuple[int, ...]

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("subset members must be strictly increasing")
        if self.members and self.members[0] < 0:
            raise ValueError("channel indices are 0-based and nonnegative")

    @classmethod
    def of(cls, *members: int) -> "ChannelSubset":
        return cls(tuple(sorted(members)))

    def complement(self, k: int) -> "ChannelSubset":
        inside = set(self.members)
        return ChannelSubset(tuple(i for i in range(k) if i not in inside))

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        if not self.members:
            return "{}"
        return "{" + ", ".join(str(i + 1) for i in self.members) + "}"


def all_subsets(k: int) -> list[ChannelSubset]:
    """All 2^k channel subsets, by increasing cardinality then lexicographic."""
    out = []
    for size in range(k + 1):
        for combo in itertools.combinations(range(k), size):
            out.append(ChannelSubset(combo))
    return out


@dataclass(frozen=True)
class MultiChannelSystem:
    """A k-channel parameterized linear system.

    channels lists (input width m_i, output width l_i) per channel; A is
    n x n, each B block n x m_i, each C block l_i x n, all over the same
    q-parameter space.
    """

    n: int
    channels: tuple[tuple[int, int], ...]
    A: ParamMatrix
    B_blocks: tuple[ParamMatrix, ...]
    C_blocks: tuple[ParamMatrix, ...]
    q: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("state dimension must be at least 1")
        if len(self.B_blocks) != len(self.channels) or len(self.C_blocks) != len(self.channels):
            raise ValueError("one B and one C block per channel required")
        if self.A.rows != self.n or self.A.cols != self.n:
            raise ValueError("A must be n x n")
        for i, ((m_i, l_i), B_i, C_i) in enumerate(
            zip(self.channels, self.B_blocks, self.C_blocks)
        ):
            if m_i < 0 or l_i < 0:
                raise ValueError(f"channel {i + 1} has negative width")
            if (B_i.rows, B_i.cols) != (self.n, m_i):
                raise ValueError(f"B block {i + 1} must be {self.n} x {m_i}")
            if (C_i.rows, C_i.cols) != (l_i, self.n):
                raise ValueError(f"C block {i + 1} must be {l_i} x {self.n}")
        for mat in (self.A, *self.B_blocks, *self.C_blocks):
            if mat.param_count != self.q:
                raise ValueError("all blocks must share the same parameter space")

    @property
    def k(self) -> int:
        return len(self.channels)

    @property
    def m(self) -> int:
        return sum(m_i for m_i, _ in self.channels)

    @property
    def l(self) -> int:
        return sum(l_i for _, l_i in self.channels)

    def subsets(self) -> list[ChannelSubset]:
        return all_subsets(self.k)


def stack(sys: MultiChannelSystem) -> tuple[ParamMatrix, ParamMatrix]:
    """Stacked (B, C): B is the n x m row of blocks, C the l x n column."""
    B = ParamMatrix.hstack(sys.B_blocks) if sys.k else ParamMatrix.zeros(sys.n, 0, sys.q)
    C = ParamMatrix.vstack(sys.C_blocks) if sys.k else ParamMatrix.zeros(0, sys.n, sys.q)
    return B, C


def split(sys: MultiChannelSystem, s: ChannelSubset) -> tuple[ParamMatrix, ParamMatrix]:
    """(B_S, C over the complement of S), blocks in increasing channel order.

    S empty yields an n x 0 matrix; S equal to all channels yields a 0 x n
    complement.
    """
    for i in s:
        if i >= sys.k:
            raise ValueError(f"channel index {i} out of range for k={sys.k}")
    b_mats = [sys.B_blocks[i] for i in s]
    c_mats = [sys.C_blocks[j] for j in s.complement(sys.k)]
    B_S = ParamMatrix.hstack(b_mats) if b_mats else ParamMatrix.zeros(sys.n, 0, sys.q)
    C_compl = ParamMatrix.vstack(c_mats) if c_mats else ParamMatrix.zeros(0, sys.n, sys.q)
    return B_S, C_compl


@dataclass(frozen=True)
class FeedbackPattern:
    """The block-diagonal feedback pattern F over its own parameter space.

    F is m x l with one fresh parameter per admissible feedback gain, the
    k diagonal blocks filled row-major in channel order; param_count is the
    number of fresh parameters (sum of m_i * l_i).
    """

    F: ParamMatrix
    channels: tuple[tuple[int, int], ...]
    # entry (row, col) -> fresh parameter index, for graph construction
    entry_params: dict[tuple[int, int], int] = field(compare=False)

    @property
    def param_count(self) -> int:
        return self.F.param_count


def feedback_pattern(sys: MultiChannelSystem) -> FeedbackPattern:
    """Fresh-parameter block-diagonal pattern for decentralized feedback."""
    m, l = sys.m, sys.l
    q_f = sum(m_i * l_i for m_i, l_i in sys.channels)
    entries: dict[tuple[int, int], ParamPoly] = {}
    entry_params: dict[tuple[int, int], int] = {}
    row_off = col_off = 0
    next_param = 0
    for m_i, l_i in sys.channels:
        for r in range(m_i):
            for c in range(l_i):
                entries[(row_off + r, col_off + c)] = ParamPoly.param(next_param)
                entry_params[(row_off + r, col_off + c)] = next_param
                next_param += 1
        row_off += m_i
        col_off += l_i
    return FeedbackPattern(
        F=ParamMatrix(m, l, entries, q_f),
        channels=sys.channels,
        entry_params=entry_params,
    )


@dataclass(frozen=True)
class RankOneTerm:
    """One rank-one term of a linear parameterization: D_r = outer(g, h)."""

    param_index: int
    g: tuple[Fraction, ...]  # length n + l column
    h: tuple[Fraction, ...]  # length n + m row

    def derivative_entry(self, i: int, j: int) -> Fraction:
        return self.g[i] * self.h[j]


@dataclass(frozen=True)
class LinearParamDecomposition:
    """Rank-one decomposition of the block matrix [A B; C 0].

    Parameters whose derivative matrix is zero are dropped; ``is_binary``
    and ``is_unitary`` report whether every g and h is a 0/1 vector,
    respectively a unit vector.
    """

    terms: tuple[RankOneTerm, ...]
    n: int
    m: int
    l: int
    is_binary: bool
    is_unitary: bool

    def param_indices(self) -> frozenset[int]:
        return frozenset(t.param_index for t in self.terms)


def block_matrix(sys: MultiChannelSystem) -> ParamMatrix:
    """The (n+l) x (n+m) block matrix [A B; C 0]."""
    B, C = stack(sys)
    top = ParamMatrix.hstack([sys.A, B])
    bottom = ParamMatrix.hstack([C, ParamMatrix.zeros(sys.l, sys.m, sys.q)])
    return ParamMatrix.vstack([top, bottom])


def _rank_one_factor(
    d_entries: dict[tuple[int, int], Fraction], rows: int, cols: int, r: int
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Factor a rank-one derivative matrix as outer(g, h).

    g is the first nonzero column scaled so its first nonzero entry is 1;
    h is then the row of scalars reproducing the matrix.  Raises when the
    matrix has rank two or more.
    """
    col_star = min(j for (_, j) in d_entries)
    g = [d_entries.get((i, col_star), Fraction(0)) for i in range(rows)]
    i_star = next(i for i, x in enumerate(g) if x != 0)
    g = [x / g[i_star] for x in g]
    # with g[i_star] = 1, the matching row gives h directly
    h = [d_entries.get((i_star, j), Fraction(0)) for j in range(cols)]
    for (i, j), value in d_entries.items():
        if g[i] * h[j] != value:
            raise NotLinearlyParameterized(
                f"derivative matrix of parameter p{r + 1} has rank 2 or more",
                param_index=r,
            )
    for i in range(rows):
        for j in range(cols):
            if (i, j) not in d_entries and g[i] * h[j] != 0:
                raise NotLinearlyParameterized(
                    f"derivative matrix of parameter p{r + 1} has rank 2 or more",
                    param_index=r,
                )
    return tuple(g), tuple(h)


def rank_one_terms(Z: ParamMatrix) -> tuple[tuple[RankOneTerm, ...], bool, bool]:
    """Rank-one terms of a homogeneous-linear block matrix Z.

    Shared helper for the full [A B; C 0] matrix and the [A B] pair form.
    Returns (terms, is_binary, is_unitary).
    """
    derivatives: dict[int, dict[tuple[int, int], Fraction]] = {}
    for (i, j), poly in Z.items():
        coeffs = poly.linear_coefficients()
        if coeffs is None:
            kind = "constant term" if poly.constant_term != 0 else "nonlinear entry"
            raise NotLinearlyParameterized(
                f"{kind} at row {i + 1}, column {j + 1}: {poly!r}",
                param_index=None,
            )
        for r, coeff in coeffs.items():
            derivatives.setdefault(r, {})[(i, j)] = coeff
    terms = []
    is_binary = True
    is_unitary = True
    for r in sorted(derivatives):
        g, h = _rank_one_factor(derivatives[r], Z.rows, Z.cols, r)
        support = derivatives[r]
        if any(value not in (0, 1) for value in support.values()):
            is_binary = False
        if len(support) != 1 or next(iter(support.values())) != 1:
            is_unitary = False
        terms.append(RankOneTerm(param_index=r, g=g, h=h))
    return tuple(terms), is_binary, is_unitary


def detect_linear_parameterization(sys: MultiChannelSystem) -> LinearParamDecomposition:
    """Decompose [A B; C 0] into rank-one parameter terms, or raise.

    Raises NotLinearlyParameterized when an entry is not a homogeneous
    linear form or some parameter's derivative matrix has rank two or more
    (which also catches a parameter appearing in both B and C).
    """
    Z = block_matrix(sys)
    terms, is_binary, is_unitary = rank_one_terms(Z)
    return LinearParamDecomposition(
        terms=terms,
        n=sys.n,
        m=sys.m,
        l=sys.l,
        is_binary=is_binary,
        is_unitary=is_unitary,
    )


def is_polynomially_parameterized(sys: MultiChannelSystem) -> bool:
    """True for every well-formed system; the input format only admits polynomials."""
    return isinstance(sys, MultiChannelSystem)


@dataclass(frozen=True)
class Classification:
    """Parameterization class of a system, with the decomposition when linear."""

    polynomial: bool
    linear: bool
    binary: bool
    unitary: bool
    decomposition: LinearParamDecomposition | None
    linear_failure: str | None

    def as_dict(self) -> dict:
        return {
            "polynomial": self.polynomial,
            "linear": self.linear,
            "binary": self.binary,
            "unitary": self.unitary,
            "linear_failure": self.linear_failure,
        }


def classify(sys: MultiChannelSystem) -> Classification:
    """Classify the parameterization; linear failure reasons are retained."""
    try:
        decomp = detect_linear_parameterization(sys)
    except NotLinearlyParameterized as err:
        return Classification(
            polynomial=True,
            linear=False,
            binary=False,
            unitary=False,
            decomposition=None,
            linear_failure=err.reason,
        )
    return Classification(
        polynomial=True,
        linear=True,
        binary=decomp.is_binary,
        unitary=decomp.is_unitary,
        decomposition=decomp,
        linear_failure=None,
    )
