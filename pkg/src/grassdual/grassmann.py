"""Tangent and second osculating cones of Plücker-embedded Grassmannians."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exterior import (
    KVector,
    Subspace,
    basis_indices,
    rank_exact,
    span_kvectors,
    subspace_intersection,
    subspace_sum,
    wedge,
    wedge_all,
)


class GrassmannError(ValueError):
    pass


@dataclass(frozen=True)
class PlanePoint:
    """A k-plane in Q^n given by k independent basis vectors."""

    n: int
    k: int
    basis_vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        vecs = tuple(tuple(Fraction(x) for x in v) for v in self.basis_vectors)
        if len(vecs) != self.k:
            raise GrassmannError(f"expected {self.k} basis vectors, got {len(vecs)}")
        if any(len(v) != self.n for v in vecs):
            raise GrassmannError(f"basis vectors must have length {self.n}")
        if self.k > self.n:
            raise GrassmannError("plane dimension exceeds ambient dimension")
        if rank_exact(vecs) != self.k:
            raise GrassmannError("basis vectors are linearly dependent")
        object.__setattr__(self, "basis_vectors", vecs)

    @classmethod
    def coordinate(cls, n: int, indices: Sequence[int]) -> "PlanePoint":
        """The plane spanned by e_i for i in indices (1-based)."""
        vecs = [tuple(1 if j == i - 1 else 0 for j in range(n)) for i in indices]
        return cls(n, len(indices), tuple(vecs))

    @classmethod
    def random(cls, n: int, k: int, rng: random.Random, bound: int = 3) -> "PlanePoint":
        while True:
            vecs = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(k)]
            if rank_exact(vecs) == k:
                return cls(n, k, tuple(vecs))

    def one_vectors(self) -> list[KVector]:
        return [KVector.from_vector(v) for v in self.basis_vectors]


def standard_pair(n: int, k: int) -> tuple[PlanePoint, PlanePoint]:
    """<e_1..e_k> and <e_{k+1}..e_{2k}>, a transverse pair."""
    if 2 * k > n:
        raise GrassmannError(f"no transverse pair of {k}-planes in dimension {n}")
    return (PlanePoint.coordinate(n, range(1, k + 1)),
            PlanePoint.coordinate(n, range(k + 1, 2 * k + 1)))


def plucker(P: PlanePoint) -> KVector:
    return wedge_all(P.one_vectors(), P.n)


def _unit(n: int, i: int) -> KVector:
    return KVector.monomial(n, i)


def _partial_wedges(P: PlanePoint, drop: int) -> list[KVector]:
    """Wedges of all (k - drop)-subsets of the basis of P, in index order."""
    vecs = P.one_vectors()
    return [wedge_all([vecs[i] for i in sub], P.n)
            for sub in combinations(range(P.k), P.k - drop)]


def tangent_cone(P: PlanePoint) -> Subspace:
    """Lambda^{k-1} E ^ Q^n inside Lambda^k Q^n."""
    if P.k == 0:
        return span_kvectors([KVector(P.n, 0, {(): 1})], P.n, 0)
    gens = [wedge(w, _unit(P.n, j))
            for w in _partial_wedges(P, 1) for j in range(1, P.n + 1)]
    return span_kvectors(gens, P.n, P.k)


def osculating2_cone(P: PlanePoint) -> Subspace:
    """Lambda^{k-2} E ^ Lambda^2 Q^n inside Lambda^k Q^n."""
    if P.k < 2:
        raise GrassmannError("second osculating cone needs k >= 2")
    pairs = [KVector.monomial(P.n, a, b) for a, b in combinations(range(1, P.n + 1), 2)]
    gens = [wedge(w, p) for w in _partial_wedges(P, 2) for p in pairs]
    return span_kvectors(gens, P.n, P.k)


def is_transverse(P: PlanePoint, Q: PlanePoint) -> bool:
    return rank_exact(P.basis_vectors + Q.basis_vectors) == P.k + Q.k


def _check_pair(P: PlanePoint, Q: PlanePoint) -> None:
    if (P.n, P.k) != (Q.n, Q.k):
        raise GrassmannError("planes live in different Grassmannians")
    if not is_transverse(P, Q):
        raise GrassmannError("planes are not transverse (E meets E')")


def osculating_intersection(P: PlanePoint, Q: PlanePoint) -> Subspace:
    """Second osculating cone at P intersected with the tangent cone at Q."""
    _check_pair(P, Q)
    return subspace_intersection(osculating2_cone(P), tangent_cone(Q))


def terracini_secant_dim(P: PlanePoint, Q: PlanePoint) -> int:
    """Projective dimension of the secant variety from the span of two tangent cones."""
    _check_pair(P, Q)
    return subspace_sum(tangent_cone(P), tangent_cone(Q)).dim - 1


def expected_secant_dim(k: int, n: int) -> int:
    """min(2 dim G(k,n) + 1, C(n,k) - 1)."""
    return min(2 * (k * (n - k) + 1), len(basis_indices(n, k))) - 1

