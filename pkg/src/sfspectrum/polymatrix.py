"""Exact sparse multivariate polynomials, matrices of them, and generic rank.

Coefficients are kept as exact ``Fraction`` values end to end, so algebraic
identities (a product being the zero polynomial, a determinant vanishing) are
decided without floating-point noise.  Rank questions about a parameterized
matrix are answered by evaluating at random points of a large prime field and
taking the best rank observed: by the Schwartz-Zippel lemma a single random
evaluation already certifies the generic rank with failure probability bounded
by (total minor degree) / (field size), and the estimate never exceeds the
true generic rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "FIELD_PRIME",
    "ParamPoly",
    "ParamMatrix",
    "ParamPoint",
    "rank_exact",
    "grank",
    "field_point",
    "rational_point",
]

# First prime above 2**61.  Desk-scale minors have degree far below the field
# size, keeping the per-trial failure probability of randomized rank tests
# under 2**-40.
FIELD_PRIME = 2305843009213693967

Rational = Fraction | int
# Canonical monomial: ((param index, exponent), ...) sorted by index, all
# exponents >= 1.  The empty tuple is the constant monomial.
Monomial = tuple[tuple[int, int], ...]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class ParamPoly:
    """A sparse polynomial in parameters p1, p2, ... with Fraction coefficients.

    Instances are immutable; arithmetic returns new objects.  Zero
    coefficients are never stored and monomial keys are kept canonical.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        canonical: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff == 0:
                    continue
                key = tuple(sorted(mono))
                for idx, exp in key:
                    if idx < 0 or exp < 1:
                        raise ValueError(f"bad monomial factor ({idx}, {exp})")
                canonical[key] = canonical.get(key, Fraction(0)) + coeff
        self._terms = {m: c for m, c in canonical.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "ParamPoly":
        return cls()

    @classmethod
    def constant(cls, value: Rational) -> "ParamPoly":
        return cls({(): _as_fraction(value)})

    @classmethod
    def param(cls, index: int) -> "ParamPoly":
        """The polynomial consisting of the single parameter ``p{index+1}``."""
        if index < 0:
            raise ValueError("parameter index must be nonnegative")
        return cls({((index, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, value) -> "ParamPoly":
        if isinstance(value, ParamPoly):
            return value
        return cls.constant(value)

    # -- views -------------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        """The term map; treat as read-only."""
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def params(self) -> frozenset[int]:
        """Indices of parameters that actually occur."""
        return frozenset(idx for mono in self._terms for idx, _ in mono)

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0."""
        if not self._terms:
            return 0
        return max(sum(e for _, e in mono) for mono in self._terms)

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def linear_coefficients(self) -> dict[int, Fraction] | None:
        """Coefficient per parameter if this is a homogeneous linear form.

        Returns None when any monomial is a constant or has total degree
        above one.
        """
        coeffs: dict[int, Fraction] = {}
        for mono, coeff in self._terms.items():
            if len(mono) != 1 or mono[0][1] != 1:
                return None
            coeffs[mono[0][0]] = coeff
        return coeffs

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "ParamPoly":
        other = ParamPoly.coerce(other)
        merged = dict(self._terms)
        for mono, coeff in other._terms.items():
            merged[mono] = merged.get(mono, Fraction(0)) + coeff
        return ParamPoly(merged)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "ParamPoly":
        return self + (-ParamPoly.coerce(other))

    def __rsub__(self, other) -> "ParamPoly":
        return ParamPoly.coerce(other) + (-self)

    def __mul__(self, other) -> "ParamPoly":
        other = ParamPoly.coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                exps = dict(m1)
                for idx, exp in m2:
                    exps[idx] = exps.get(idx, 0) + exp
                key = tuple(sorted(exps.items()))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ParamPoly(out)

    __rmul__ = __mul__

    def shift_params(self, offset: int) -> "ParamPoly":
        """Reindex every parameter i to i + offset."""
        return ParamPoly(
            {tuple((i + offset, e) for i, e in mono): c for mono, c in self._terms.items()}
        )

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, values: Sequence[Rational]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for idx, exp in mono:
                term *= _as_fraction(values[idx]) ** exp
            total += term
        return total

    def evaluate_mod(self, values: Sequence[int], modulus: int) -> int:
        total = 0
        for mono, coeff in self._terms.items():
            if coeff.denominator == 1:
                term = coeff.numerator % modulus
            else:
                term = coeff.numerator * pow(coeff.denominator, -1, modulus) % modulus
            for idx, exp in mono:
                term = term * pow(values[idx], exp, modulus) % modulus
            total = (total + term) % modulus
        return total

    # -- comparison / display -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.constant(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self._terms.items()):
            factors = "*".join(
                f"p{idx + 1}" if exp == 1 else f"p{idx + 1}^{exp}" for idx, exp in mono
            )
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(factors)
            elif coeff == -1:
                parts.append(f"-{factors}")
            else:
                parts.append(f"{coeff}*{factors}")
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class ParamPoint:
    """A sampled value of the parameter vector.

    ``values`` holds exact rationals when ``modulus`` is None, otherwise
    residues of the prime field GF(modulus).  ``seed`` records how the point
    was drawn so every verdict is reproducible.
    """

    values: tuple
    seed: int
    modulus: int | None = None

    def __len__(self) -> int:
        return len(self.values)


def field_point(param_count: int, seed: int, modulus: int = FIELD_PRIME) -> ParamPoint:
    """Draw a uniform point of GF(modulus)^param_count."""
    rng = random.Random(seed)
    values = tuple(rng.randrange(modulus) for _ in range(param_count))
    return ParamPoint(values=values, seed=seed, modulus=modulus)


def rational_point(param_count: int, seed: int, low: int = -300, high: int = 300) -> ParamPoint:
    """Draw an integer-valued rational point, uniform per coordinate."""
    rng = random.Random(seed)
    values = tuple(Fraction(rng.randint(low, high)) for _ in range(param_count))
    return ParamPoint(values=values, seed=seed, modulus=None)


class ParamMatrix:
    """A sparse rows x cols matrix of ParamPoly entries over q parameters."""

    __slots__ = ("rows", "cols", "param_count", "_entries")

    def __init__(
        self,
        rows: int,
        cols: int,
        entries: Mapping[tuple[int, int], ParamPoly] | None = None,
        param_count: int = 0,
    ):
        if rows < 0 or cols < 0 or param_count < 0:
            raise ValueError("matrix dimensions and parameter count must be nonnegative")
        self.rows = rows
        self.cols = cols
        self.param_count = param_count
        cleaned: dict[tuple[int, int], ParamPoly] = {}
        if entries:
            for (i, j), poly in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i}, {j}) outside {rows}x{cols} matrix")
                poly = ParamPoly.coerce(poly)
                if poly.is_zero:
                    continue
                bad = [idx for idx in poly.params() if idx >= param_count]
                if bad:
                    raise ValueError(
                        f"entry ({i}, {j}) uses parameter index {max(bad)} "
                        f"but param_count is {param_count}"
                    )
                cleaned[(i, j)] = poly
        self._entries = cleaned

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, param_count: int = 0) -> "ParamMatrix":
        return cls(rows, cols, None, param_count)

    @classmethod
    def identity(cls, n: int, param_count: int = 0) -> "ParamMatrix":
        return cls(n, n, {(i, i): ParamPoly.constant(1) for i in range(n)}, param_count)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], param_count: int) -> "ParamMatrix":
        """Build from a dense list of lists of ParamPoly / int / Fraction."""
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, value in enumerate(row):
                poly = ParamPoly.coerce(value)
                if not poly.is_zero:
                    entries[(i, j)] = poly
        return cls(rows, cols, entries, param_count)

    # -- views ---------------------------------------------------------------

    def entry(self, i: int, j: int) -> ParamPoly:
        return self._entries.get((i, j), ParamPoly.zero())

    def items(self) -> list[tuple[tuple[int, int], ParamPoly]]:
        return sorted(self._entries.items())

    @property
    def is_zero(self) -> bool:
        return not self._entries

    def params(self) -> frozenset[int]:
        out: set[int] = set()
        for poly in self._entries.values():
            out |= poly.params()
        return frozenset(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self._entries == other._entries
        )

    def __repr__(self) -> str:
        return f"ParamMatrix({self.rows}x{self.cols}, q={self.param_count}, {len(self._entries)} entries)"

    # -- algebra ---------------------------------------------------------------

    def _require_same_space(self, other: "ParamMatrix"):
        if self.param_count != other.param_count:
            raise ValueError("matrices live over different parameter spaces")

    def __add__(self, other: "ParamMatrix") -> "ParamMatrix":
        self._require_same_space(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        entries = dict(self._entries)
        for key, poly in other._entries.items():
            entries[key] = entries.get(key, ParamPoly.zero()) + poly
        return ParamMatrix(self.rows, self.cols, entries, self.param_count)

    def __matmul__(self, other: "ParamMatrix") -> "ParamMatrix":
        self._require_same_space(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        by_row: dict[int, list[tuple[int, ParamPoly]]] = {}
        for (i, k), poly in self._entries.items():
            by_row.setdefault(i, []).append((k, poly))
        by_col: dict[int, list[tuple[int, ParamPoly]]] = {}
        for (k, j), poly in other._entries.items():
            by_col.setdefault(k, []).append((j, poly))
        acc: dict[tuple[int, int], ParamPoly] = {}
        for i, left in by_row.items():
            for k, lpoly in left:
                for j, rpoly in by_col.get(k, ()):
                    key = (i, j)
                    acc[key] = acc.get(key, ParamPoly.zero()) + lpoly * rpoly
        return ParamMatrix(self.rows, other.cols, acc, self.param_count)

    def transpose(self) -> "ParamMatrix":
        return ParamMatrix(
            self.cols,
            self.rows,
            {(j, i): poly for (i, j), poly in self._entries.items()},
            self.param_count,
        )

    def shift_params(self, offset: int, param_count: int) -> "ParamMatrix":
        """Reindex parameters by offset into a space of param_count parameters."""
        return ParamMatrix(
            self.rows,
            self.cols,
            {key: poly.shift_params(offset) for key, poly in self._entries.items()},
            param_count,
        )

    def with_param_count(self, param_count: int) -> "ParamMatrix":
        """The same matrix viewed over a (larger) parameter space."""
        return ParamMatrix(self.rows, self.cols, self._entries, param_count)

    @staticmethod
    def hstack(mats: Iterable["ParamMatrix"]) -> "ParamMatrix":
        mats = list(mats)
        if not mats:
            raise ValueError("hstack of nothing")
        rows = mats[0].rows
        param_count = mats[0].param_count
        entries: dict[tuple[int, int], ParamPoly] = {}
        offset = 0
        for m in mats:
            if m.rows != rows or m.param_count != param_count:
                raise ValueError("hstack mismatch")
            for (i, j), poly in m._entries.items():
                entries[(i, j + offset)] = poly
            offset += m.cols
        return ParamMatrix(rows, offset, entries, param_count)

    @staticmethod
    def vstack(mats: Iterable["ParamMatrix"]) -> "ParamMatrix":
        mats = list(mats)
        if not mats:
            raise ValueError("vstack of nothing")
        cols = mats[0].cols
        param_count = mats[0].param_count
        entries: dict[tuple[int, int], ParamPoly] = {}
        offset = 0
        for m in mats:
            if m.cols != cols or m.param_count != param_count:
                raise ValueError("vstack mismatch")
            for (i, j), poly in m._entries.items():
                entries[(i + offset, j)] = poly
            offset += m.rows
        return ParamMatrix(offset, cols, entries, param_count)

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, point: ParamPoint) -> list[list]:
        """Entrywise exact evaluation; rational or prime-field per the point."""
        if len(point) != self.param_count:
            raise ValueError(
                f"point has {len(point)} coordinates, matrix expects {self.param_count}"
            )
        return self.evaluate_at(point.values, point.modulus)

    def evaluate_at(self, values: Sequence, modulus: int | None = None) -> list[list]:
        if modulus is None:
            out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
            for (i, j), poly in self._entries.items():
                out[i][j] = poly.evaluate(values)
        else:
            out = [[0] * self.cols for _ in range(self.rows)]
            for (i, j), poly in self._entries.items():
                out[i][j] = poly.evaluate_mod(values, modulus)
        return out


def _residue(x, modulus: int) -> int:
    if isinstance(x, Fraction):
        return x.numerator * pow(x.denominator, -1, modulus) % modulus
    return x % modulus


def rank_exact(matrix: Sequence[Sequence], modulus: int | None = None) -> int:
    """Exact rank by Gaussian elimination, over Q or over GF(modulus)."""
    work = [list(row) for row in matrix]
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    if modulus is not None:
        work = [[_residue(x, modulus) for x in row] for row in work]
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, nrows):
            if work[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        if modulus is None:
            inv = Fraction(1) / _as_fraction(work[row][col])
            work[row] = [x * inv for x in work[row]]
            for r in range(nrows):
                if r != row and work[r][col] != 0:
                    factor = work[r][col]
                    work[r] = [a - factor * b for a, b in zip(work[r], work[row])]
        else:
            inv = pow(work[row][col], -1, modulus)
            work[row] = [x * inv % modulus for x in work[row]]
            for r in range(nrows):
                if r != row and work[r][col] != 0:
                    factor = work[r][col]
                    work[r] = [(a - factor * b) % modulus for a, b in zip(work[r], work[row])]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def grank(m: ParamMatrix, trials: int = 10, seed: int = 0) -> int:
    """Generic rank of a parameterized matrix by randomized evaluation.

    The result never exceeds the true generic rank; a single full-rank sample
    certifies it, so ``trials`` only guards against unlucky rank-deficient
    draws (probability at most (minor degree / field size) per trial).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = 0
    cap = min(m.rows, m.cols)
    rng = random.Random(seed)
    for _ in range(trials):
        values = [rng.randrange(FIELD_PRIME) for _ in range(m.param_count)]
        best = max(best, rank_exact(m.evaluate_at(values, FIELD_PRIME), FIELD_PRIME))
        if best == cap:
            break
    return best
