"""Exact rational linear algebra and exterior algebra over Q.

Coefficients are :class:`fractions.Fraction` throughout. The basis of
Lambda^k Q^n is the set of strictly increasing multi-indices over 1..n,
ordered lexicographically; coordinate vectors of k-vectors use that order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm
from typing import Iterable, Mapping, Sequence

Rational = Fraction
MultiIndex = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


class ExteriorError(ValueError):
    pass


def sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return (sign, sorted indices); sign is 0 when an index repeats."""
    idx = list(indices)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


@lru_cache(maxsize=None)
def basis_indices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Sorted multi-indices of degree k over 1..n in lexicographic order."""
    return tuple(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def basis_position(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {mi: pos for pos, mi in enumerate(basis_indices(n, k))}


@dataclass(frozen=True)
class KVector:
    """An element of Lambda^k Q^n stored as {sorted multi-index: coefficient}."""

    n: int
    k: int
    coeffs: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ExteriorError("negative dimension or degree")
        clean = {}
        for mi, c in self.coeffs.items():
            mi = tuple(mi)
            if len(mi) != self.k:
                raise ExteriorError(f"multi-index {mi} has degree != {self.k}")
            if any(b <= a for a, b in zip(mi, mi[1:])):
                raise ExteriorError(f"multi-index {mi} is not strictly increasing")
            if mi and (mi[0] < 1 or mi[-1] > self.n):
                raise ExteriorError(f"multi-index {mi} out of range 1..{self.n}")
            c = Fraction(c)
            if c:
                clean[mi] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Sequence[int], object]]) -> "KVector":
        """Build from (indices, coefficient) pairs; indices may be unsorted."""
        acc: dict[tuple[int, ...], Fraction] = {}
        k = None
        for indices, c in terms:
            if k is None:
                k = len(indices)
            elif len(indices) != k:
                raise ExteriorError("mixed degrees in terms")
            if any(i < 1 or i > n for i in indices):
                raise ExteriorError(f"index out of range in {tuple(indices)}")
            sign, mi = sort_sign(indices)
            if sign:
                acc[mi] = acc.get(mi, ZERO) + sign * Fraction(c)
        return cls(n, k if k is not None else 0, acc)

    @classmethod
    def monomial(cls, n: int, *indices: int) -> "KVector":
        return cls.from_terms(n, [(indices, 1)])

    @classmethod
    def from_vector(cls, values: Sequence) -> "KVector":
        """A 1-vector in Q^n from its coordinates."""
        return cls(len(values), 1, {(i + 1,): Fraction(v) for i, v in enumerate(values)})

    @classmethod
    def from_coordinates(cls, n: int, k: int, values: Sequence) -> "KVector":
        basis = basis_indices(n, k)
        if len(values) != len(basis):
            raise ExteriorError(f"expected {len(basis)} coordinates, got {len(values)}")
        return cls(n, k, {mi: Fraction(v) for mi, v in zip(basis, values)})

    def coordinates(self) -> tuple[Fraction, ...]:
        return tuple(self.coeffs.get(mi, ZERO) for mi in basis_indices(self.n, self.k))

    def sparse(self) -> dict[int, Fraction]:
        pos = basis_position(self.n, self.k)
        return {pos[mi]: c for mi, c in self.coeffs.items()}

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_same(self, other: "KVector") -> None:
        if (self.n, self.k) != (other.n, other.k):
            raise ExteriorError(
                f"cannot combine Lambda^{self.k} Q^{self.n} with Lambda^{other.k} Q^{other.n}")

    def __add__(self, other: "KVector") -> "KVector":
        self._check_same(other)
        acc = dict(self.coeffs)
        for mi, c in other.coeffs.items():
            acc[mi] = acc.get(mi, ZERO) + c
        return KVector(self.n, self.k, acc)

    def __neg__(self) -> "KVector":
        return KVector(self.n, self.k, {mi: -c for mi, c in self.coeffs.items()})

    def __sub__(self, other: "KVector") -> "KVector":
        return self + (-other)

    def scale(self, c) -> "KVector":
        c = Fraction(c)
        return KVector(self.n, self.k, {mi: c * v for mi, v in self.coeffs.items()})

    def __rmul__(self, c) -> "KVector":
        return self.scale(c)

    def __xor__(self, other: "KVector") -> "KVector":
        return wedge(self, other)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for mi in sorted(self.coeffs):
            c = self.coeffs[mi]
            name = "e" + "".join(str(i) if i < 10 else f"({i})" for i in mi)
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}{name}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def wedge(u: KVector, v: KVector) -> KVector:
    if u.n != v.n:
        raise ExteriorError(f"ambient dimensions differ: {u.n} vs {v.n}")
    if u.k + v.k > u.n:
        raise ExteriorError(f"degree {u.k}+{v.k} exceeds ambient dimension {u.n}")
    acc: dict[tuple[int, ...], Fraction] = {}
    for a, ca in u.coeffs.items():
        sa = set(a)
        for b, cb in v.coeffs.items():
            if sa.intersection(b):
                continue
            sign, mi = sort_sign(a + b)
            acc[mi] = acc.get(mi, ZERO) + sign * ca * cb
    return KVector(u.n, u.k + v.k, acc)


def wedge_all(vectors: Sequence[KVector], n: int | None = None) -> KVector:
    """Wedge of a sequence of k-vectors; the empty wedge is 1 in Lambda^0."""
    if not vectors:
        if n is None:
            raise ExteriorError("ambient dimension needed for an empty wedge")
        return KVector(n, 0, {(): ONE})
    out = vectors[0]
    for v in vectors[1:]:
        out = wedge(out, v)
    return out


def pairing(x: KVector, y_dual: KVector) -> Fraction:
    """<e_I, e^J> = [I == J] on sorted multi-indices, extended bilinearly."""
    x._check_same(y_dual)
    small, big = (x, y_dual) if len(x.coeffs) <= len(y_dual.coeffs) else (y_dual, x)
    return sum((c * big.coeffs[mi] for mi, c in small.coeffs.items() if mi in big.coeffs), ZERO)


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class MatrixQ:
    """Dense rational matrix, row-major."""

    entries: tuple[tuple[Fraction, ...], ...]
    ncols: int = -1

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        ncols = self.ncols
        if ncols < 0:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ExteriorError("ragged matrix")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int = -1) -> "MatrixQ":
        return cls(tuple(tuple(r) for r in rows), ncols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return self.ncols

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "MatrixQ":
        return MatrixQ(tuple(zip(*self.entries)) if self.entries else (), self.rows)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def _as_rows(M) -> list[list[Fraction]]:
    if isinstance(M, MatrixQ):
        return M.tolist()
    return [[Fraction(x) for x in row] for row in M]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in rows]
    if not A:
        return 0
    nrows, ncols = len(A), len(A[0])
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c]), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        prow = A[r]
        for i in range(r + 1, nrows):
            row = A[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def rank_exact(M) -> int:
    """Exact rank of a rational matrix (MatrixQ or nested sequences)."""
    rows = _as_rows(M)
    if not rows or not rows[0]:
        return 0
    ints = []
    for row in rows:
        d = lcm(*(x.denominator for x in row)) if row else 1
        ints.append([int(x * d) for x in row])
    # fewer rows than columns keeps the elimination short
    if len(ints) > len(ints[0]):
        ints = [list(c) for c in zip(*ints)]
    return bareiss_rank(ints)


# --------------------------------------------------------------- subspaces

SparseRow = dict  # column -> Fraction


def _echelon(rows: Iterable[SparseRow]) -> dict[int, SparseRow]:
    """Reduced row echelon form of sparse rows, keyed by pivot column."""
    basis: dict[int, SparseRow] = {}
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        while r:
            c = min(r)
            b = basis.get(c)
            if b is None:
                inv = 1 / r[c]
                basis[c] = {j: v * inv for j, v in r.items()}
                break
            f = r[c]
            for j, v in b.items():
                nv = r.get(j, ZERO) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    for c in sorted(basis, reverse=True):
        b = basis[c]
        for c2, other in basis.items():
            if c2 < c and c in other:
                f = other[c]
                for j, v in b.items():
                    nv = other.get(j, ZERO) - f * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
    return basis


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of Q^ambient_dim held as its unique RREF basis."""

    ambient_dim: int
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]

    @classmethod
    def _from_sparse(cls, ambient_dim: int, rows: Iterable[SparseRow]) -> "Subspace":
        ech = _echelon(rows)
        out = tuple(tuple(sorted(ech[c].items())) for c in sorted(ech))
        return cls(ambient_dim, out)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(((i, ONE),) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(r[0][0] for r in self.rows)

    @property
    def basis(self) -> MatrixQ:
        return MatrixQ(tuple(self._dense(r) for r in self.rows), self.ambient_dim)

    def _dense(self, row) -> tuple[Fraction, ...]:
        v = [ZERO] * self.ambient_dim
        for j, x in row:
            v[j] = x
        return tuple(v)

    def vectors(self) -> list[tuple[Fraction, ...]]:
        return [self._dense(r) for r in self.rows]

    def sparse_rows(self) -> list[SparseRow]:
        return [dict(r) for r in self.rows]

    def contains(self, vector) -> bool:
        v = _to_sparse(vector, self.ambient_dim)
        for row in self.rows:
            c = row[0][0]
            f = v.get(c)
            if f:
                for j, x in row:
                    nv = v.get(j, ZERO) - f * x
                    if nv:
                        v[j] = nv
                    else:
                        v.pop(j, None)
        return not v

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(dict(r)) for r in self.rows)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersection(self, other)


def _to_sparse(vector, ambient_dim: int) -> SparseRow:
    if isinstance(vector, KVector):
        if len(basis_indices(vector.n, vector.k)) != ambient_dim:
            raise ExteriorError("k-vector does not live in this ambient space")
        return vector.sparse()
    if isinstance(vector, dict):
        if any(not 0 <= j < ambient_dim for j in vector):
            raise ExteriorError("sparse vector index out of range")
        return {j: Fraction(x) for j, x in vector.items() if x}
    if len(vector) != ambient_dim:
        raise ExteriorError(f"vector of length {len(vector)} in ambient dimension {ambient_dim}")
    return {j: Fraction(x) for j, x in enumerate(vector) if x}


def subspace_from_vectors(vectors: Iterable, ambient_dim: int) -> Subspace:
    """Span of rational rows, sparse dicts, or k-vectors as an RREF Subspace."""
    rows = [_to_sparse(v, ambient_dim) for v in vectors]
    if ambient_dim == 0 and any(rows):
        raise ExteriorError("nonzero vector in a zero-dimensional space")
    return Subspace._from_sparse(ambient_dim, rows)


def _check_ambient(S1: Subspace, S2: Subspace) -> None:
    if S1.ambient_dim != S2.ambient_dim:
        raise ExteriorError(f"ambient dimensions differ: {S1.ambient_dim} vs {S2.ambient_dim}")


def subspace_sum(S1: Subspace, S2: Subspace) -> Subspace:
    _check_ambient(S1, S2)
    return Subspace._from_sparse(S1.ambient_dim, S1.sparse_rows() + S2.sparse_rows())


def subspace_intersection(S1: Subspace, S2: Subspace) -> Subspace:
    """Zassenhaus: reduce [S1 | S1] over [S2 | 0]; rows with zero left half span S1 & S2."""
    _check_ambient(S1, S2)
    N = S1.ambient_dim
    if S1.dim == 0 or S2.dim == 0:
        return Subspace.zero(N)
    stacked = []
    for r in S1.rows:
        row = dict(r)
        row.update({j + N: x for j, x in r})
        stacked.append(row)
    stacked.extend(dict(r) for r in S2.rows)
    ech = _echelon(stacked)
    meet = [{j - N: x for j, x in row.items()} for c, row in ech.items() if c >= N]
    return Subspace._from_sparse(N, meet)


def annihilator(S: Subspace) -> Subspace:
    """Perp of S under the standard coordinate pairing (the null space of its basis)."""
    N = S.ambient_dim
    pivots = {row[0][0]: row for row in S.rows}
    free = [j for j in range(N) if j not in pivots]
    vecs = []
    for f in free:
        v = {f: ONE}
        for p, row in pivots.items():
            x = dict(row).get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace._from_sparse(N, vecs)


def span_kvectors(vectors: Iterable[KVector], n: int, k: int) -> Subspace:
    """Span of k-vectors inside Lambda^k Q^n."""
    N = len(basis_indices(n, k))
    rows = []
    for v in vectors:
        if (v.n, v.k) != (n, k):
            raise ExteriorError(f"expected a {k}-vector in dimension {n}")
        rows.append(v.sparse())
    return Subspace._from_sparse(N, rows)


def subspace_kvectors(S: Subspace, n: int, k: int) -> list[KVector]:
    """Basis rows of S read back as k-vectors."""
    basis = basis_indices(n, k)
    if len(basis) != S.ambient_dim:
        raise ExteriorError("subspace is not inside Lambda^k Q^n")
    return [KVector(n, k, {basis[j]: x for j, x in row}) for row in S.rows]
