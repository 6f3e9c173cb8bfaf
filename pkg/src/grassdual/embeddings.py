"""Tangent and second osculating cones of Veronese and Segre embeddings of
projective spaces.

Degree-d forms in n+1 variables are coordinatized by exponent tuples in
lexicographic order of :func:`monomials`; Segre products Q^{a} (x) Q^{b} (x) ...
by index tuples in row-major order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb, prod
from typing import Sequence

from .exterior import Subspace, subspace_from_vectors, subspace_intersection

Poly = dict  # exponent tuple -> Fraction


class EmbeddingError(ValueError):
    pass


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of degree d in nvars variables, x_0^d first."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_position(nvars: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(nvars, d))}


@dataclass(frozen=True)
class MonomialSpace:
    """Coordinate space of a Veronese (degree d) or Segre (d = 0) embedding."""

    factor_dims: tuple[int, ...]
    degree: int = 0

    @property
    def size(self) -> int:
        if self.degree:
            (m,) = self.factor_dims
            return comb(m - 1 + self.degree, self.degree)
        return prod(self.factor_dims)

    def basis(self) -> tuple[tuple[int, ...], ...]:
        if self.degree:
            return monomials(self.factor_dims[0], self.degree)
        return tuple(product(*(range(m) for m in self.factor_dims)))


def _mul(f: Poly, g: Poly) -> Poly:
    out: Poly = {}
    for a, x in f.items():
        for b, y in g.items():
            e = tuple(i + j for i, j in zip(a, b))
            out[e] = out.get(e, 0) + x * y
    return {e: c for e, c in out.items() if c}


def _power(f: Poly, d: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: Fraction(1)}
    for _ in range(d):
        out = _mul(out, f)
    return out


def linear_form(x: Sequence) -> Poly:
    nvars = len(x)
    out = {}
    for i, c in enumerate(x):
        if c:
            e = [0] * nvars
            e[i] = 1
            out[tuple(e)] = Fraction(c)
    return out


def _coords(f: Poly, nvars: int, d: int) -> dict[int, Fraction]:
    pos = _monomial_position(nvars, d)
    return {pos[e]: c for e, c in f.items()}


def _check_point(x: Sequence) -> None:
    if not any(x):
        raise EmbeddingError("the zero vector is not a point of projective space")


def veronese_tangent_cone(d: int, n: int, x: Sequence) -> Subspace:
    """x^{d-1} . Q^{n+1} inside degree-d forms."""
    if d < 1:
        raise EmbeddingError("degree must be >= 1")
    if len(x) != n + 1:
        raise EmbeddingError(f"point must have {n + 1} coordinates")
    _check_point(x)
    nvars = n + 1
    base = _power(linear_form(x), d - 1, nvars)
    gens = [_mul(base, {m: Fraction(1)}) for m in monomials(nvars, 1)]
    return subspace_from_vectors([_coords(g, nvars, d) for g in gens], comb(n + d, d))


def veronese_osculating2_cone(d: int, n: int, x: Sequence) -> Subspace:
    """x^{d-2} . S^2 Q^{n+1} inside degree-d forms."""
    if d < 2:
        raise EmbeddingError("second osculating cone needs d >= 2")
    if len(x) != n + 1:
        raise EmbeddingError(f"point must have {n + 1} coordinates")
    _check_point(x)
    nvars = n + 1
    base = _power(linear_form(x), d - 2, nvars)
    gens = [_mul(base, {m: Fraction(1)}) for m in monomials(nvars, 2)]
    return subspace_from_vectors([_coords(g, nvars, d) for g in gens], comb(n + d, d))


def veronese_intersection(d: int, n: int, x: Sequence, y: Sequence) -> Subspace:
    return subspace_intersection(veronese_osculating2_cone(d, n, x),
                                 veronese_tangent_cone(d, n, y))


def _independent(x: Sequence, y: Sequence) -> bool:
    return any(x[i] * y[j] != x[j] * y[i] for i in range(len(x)) for j in range(i + 1, len(x)))


def veronese_check(d: int, n: int, seed: int | None = None) -> bool:
    """True iff the second osculating cone at x meets the tangent cone at y only in 0.

    x = e_0 and y = e_1 by default; a seed draws an independent random pair
    instead.
    """
    if d < 2 or n < 1:
        raise EmbeddingError("need d >= 2 and n >= 1")
    if seed is None:
        x = [1] + [0] * n
        y = [0, 1] + [0] * (n - 1)
    else:
        rng = random.Random(seed)
        while True:
            x = [rng.randint(-3, 3) for _ in range(n + 1)]
            y = [rng.randint(-3, 3) for _ in range(n + 1)]
            if _independent(x, y):
                break
    return veronese_intersection(d, n, x, y).dim == 0


# ------------------------------------------------------------------- Segre


def _kron(vectors: Sequence[Sequence]) -> dict[int, Fraction]:
    dims = [len(v) for v in vectors]
    out = {}
    for idx in product(*(range(m) for m in dims)):
        c = Fraction(1)
        for v, i in zip(vectors, idx):
            c *= Fraction(v[i])
            if not c:
                break
        if c:
            pos = 0
            for m, i in zip(dims, idx):
                pos = pos * m + i
            out[pos] = c
    return out


def _unit(m: int, i: int) -> list[int]:
    return [1 if j == i else 0 for j in range(m)]


def _check_points(points: Sequence[Sequence]) -> None:
    if len(points) not in (2, 3):
        raise EmbeddingError("Segre products of 2 or 3 factors only")
    for p in points:
        _check_point(p)


def segre_tangent_cone(points: Sequence[Sequence]) -> Subspace:
    """Leibniz sum: vary one factor at a time."""
    _check_points(points)
    dims = [len(p) for p in points]
    gens = []
    for i, m in enumerate(dims):
        for a in range(m):
            vecs = list(points)
            vecs[i] = _unit(m, a)
            gens.append(_kron(vecs))
    return subspace_from_vectors(gens, prod(dims))


def segre_osculating2_cone(points: Sequence[Sequence]) -> Subspace:
    """Leibniz sum: vary at most two factors; each factor's own second
    osculating space is the whole factor space."""
    _check_points(points)
    dims = [len(p) for p in points]
    gens = []
    for i in range(len(dims)):
        for j in range(i, len(dims)):
            for a in range(dims[i]):
                for b in range(dims[j]):
                    vecs = list(points)
                    vecs[i] = _unit(dims[i], a)
                    if j != i:
                        vecs[j] = _unit(dims[j], b)
                    gens.append(_kron(vecs))
    return subspace_from_vectors(gens, prod(dims))


def segre_intersection(p: Sequence[Sequence], q: Sequence[Sequence]) -> Subspace:
    return subspace_intersection(segre_osculating2_cone(p), segre_tangent_cone(q))


def segre_check(factor_dims: Sequence[int], seed: int | None = None) -> bool:
    """factor_dims are projective dimensions (P^1 x P^1 is (1, 1)).

    p = e_0 (x) e_0 (x) ..., q = e_1 (x) e_1 (x) ... unless a seed asks for a
    random pair.
    """
    if len(factor_dims) not in (2, 3) or any(m < 1 for m in factor_dims):
        raise EmbeddingError("need 2 or 3 factors of dimension >= 1")
    sizes = [m + 1 for m in factor_dims]
    if seed is None:
        p = [_unit(s, 0) for s in sizes]
        q = [_unit(s, 1) for s in sizes]
    else:
        rng = random.Random(seed)
        p, q = [], []
        for s in sizes:
            while True:
                u = [rng.randint(-3, 3) for _ in range(s)]
                v = [rng.randint(-3, 3) for _ in range(s)]
                if _independent(u, v):
                    break
            p.append(u)
            q.append(v)
    return segre_intersection(p, q).dim == 0
