"""GL_n orbits of trivectors in P(Lambda^3 Q^n) for n = 6, 7, 8.

The tangent space to the orbit cone at x is gl_n . x, so the projective orbit
dimension is rank(action_matrix(x)) - 1.  Dual elements e^{rst} are stored as
ordinary KVectors and read through :func:`grassdual.exterior.pairing`.
"""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import data
from .exterior import (
    KVector,
    MatrixQ,
    Subspace,
    annihilator,
    basis_indices,
    basis_position,
    pairing,
    rank_exact,
    sort_sign,
    span_kvectors,
    subspace_kvectors,
    wedge_all,
)

CATALOG_SIZES = {6: 4, 7: 9, 8: 22}


class OrbitError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitRecord:
    id: str
    n: int
    representative: KVector
    expected_proj_dim: int
    label: str

    def __post_init__(self):
        if self.representative.k != 3 or self.representative.n != self.n:
            raise OrbitError(f"{self.id}: representative is not in Lambda^3 Q^{self.n}")
        if self.representative.is_zero():
            raise OrbitError(f"{self.id}: representative is zero")


@dataclass(frozen=True)
class BasisChange:
    """g acting on Q^n; column j is the image of e_{j+1}."""

    n: int
    matrix: MatrixQ

    def __post_init__(self):
        if self.matrix.shape != (self.n, self.n):
            raise OrbitError(f"basis change must be {self.n}x{self.n}")
        if rank_exact(self.matrix) != self.n:
            raise OrbitError("basis change is singular")

    @property
    def determinant(self) -> Fraction:
        return _det(self.matrix.tolist())

    @classmethod
    def from_images(cls, n: int, images: dict[int, Sequence[tuple[int, object]]]) -> "BasisChange":
        """images[j] lists (i, c) with g(e_j) = sum c e_i; unlisted e_j are fixed."""
        cols = [[Fraction(0)] * n for _ in range(n)]
        for j in range(1, n + 1):
            for i, c in images.get(j, [(j, 1)]):
                cols[j - 1][i - 1] += Fraction(c)
        return cls(n, MatrixQ.from_rows(cols, n).transpose())

    def inverse_transpose(self) -> "BasisChange":
        inv = _inverse(self.matrix.tolist())
        return BasisChange(self.n, MatrixQ.from_rows(inv, self.n).transpose())


def _det(M: list[list[Fraction]]) -> Fraction:
    A = [row[:] for row in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c])
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [a / piv for a in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def parse_terms(n: int, terms: Sequence[tuple[str, object]]) -> KVector:
    """[["846", 1], ...] -> KVector; digits are 1-based indices, unsorted allowed."""
    return KVector.from_terms(n, [([int(ch) for ch in idx], Fraction(c)) for idx, c in terms])


def _check(x: KVector, n: int) -> None:
    if x.k != 3:
        raise OrbitError(f"expected a trivector, got degree {x.k}")
    if x.n != n:
        raise OrbitError(f"trivector lives in dimension {x.n}, not {n}")


def _act(i: int, j: int, x: KVector) -> dict[tuple[int, ...], Fraction]:
    """E_ij . x as a derivation: replace one occurrence of j by i."""
    out: dict[tuple[int, ...], Fraction] = {}
    for mi, c in x.coeffs.items():
        for pos, a in enumerate(mi):
            if a != j:
                continue
            new = mi[:pos] + (i,) + mi[pos + 1:]
            sign, key = sort_sign(new)
            if sign:
                out[key] = out.get(key, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def action_matrix(x: KVector, n: int) -> MatrixQ:
    """C(n,3) x n^2 matrix; column (i-1)*n + (j-1) holds E_ij . x."""
    _check(x, n)
    pos = basis_position(n, 3)
    rows = [[Fraction(0)] * (n * n) for _ in range(comb(n, 3))]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            col = (i - 1) * n + (j - 1)
            for mi, c in _act(i, j, x).items():
                rows[pos[mi]][col] = c
    return MatrixQ.from_rows(rows, n * n)


def _tangent_generators(x: KVector, n: int) -> list[KVector]:
    return [KVector(n, 3, _act(i, j, x)) for i in range(1, n + 1) for j in range(1, n + 1)]


def tangent_cone(x: KVector, n: int) -> Subspace:
    _check(x, n)
    return span_kvectors(_tangent_generators(x, n), n, 3)


def orbit_dim(x: KVector, n: int) -> int:
    _check(x, n)
    if x.is_zero():
        raise OrbitError("the zero trivector has no orbit in projective space")
    return rank_exact(action_matrix(x, n)) - 1


def tangent_annihilator(x: KVector, n: int) -> Subspace:
    if x.is_zero():
        raise OrbitError("the zero trivector has no orbit in projective space")
    return annihilator(tangent_cone(x, n))


def verify_dual_pair(x: KVector, y: KVector, n: int) -> bool:
    """True iff y kills every generator E_ij . x of the tangent cone at x."""
    _check(x, n)
    _check(y, n)
    if x.is_zero() or y.is_zero():
        raise OrbitError("dual pairs need nonzero trivectors")
    return all(pairing(v, y) == 0 for v in _tangent_generators(x, n))


def apply_basis_change(g: BasisChange, x: KVector) -> KVector:
    if g.n != x.n:
        raise OrbitError("basis change and trivector live in different dimensions")
    cols = g.matrix.transpose().tolist()
    images = [KVector.from_vector(col) for col in cols]
    out = KVector(x.n, x.k, {})
    for mi, c in x.coeffs.items():
        out = out + wedge_all([images[a - 1] for a in mi], x.n).scale(c)
    return out


def random_basis_change(n: int, rng: random.Random, bound: int = 2) -> BasisChange:
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if rank_exact(rows) == n:
            return BasisChange(n, MatrixQ.from_rows(rows, n))


# ---------------------------------------------------------------- catalogs


def catalog(n: int, data_dir=None) -> list[OrbitRecord]:
    if n not in CATALOG_SIZES:
        raise OrbitError(f"orbit catalogs exist for n in 6, 7, 8, not {n}")
    doc = data.load("orbit_catalog.json", data_dir)
    return [OrbitRecord(r["id"], n, parse_terms(n, r["representative"]),
                        r["expected_proj_dim"], r["label"])
            for r in doc["catalogs"][str(n)]]


def catalog_discrepancies(data_dir=None) -> list[dict]:
    return data.load("orbit_catalog.json", data_dir)["discrepancies"]


def _record(records: Sequence[OrbitRecord], rid: str) -> OrbitRecord:
    for r in records:
        if r.id == rid:
            return r
    raise OrbitError(f"no orbit {rid!r} in catalog")


def verify_catalog(n: int, data_dir=None) -> dict:
    entries = []
    for rec in catalog(n, data_dir):
        got = orbit_dim(rec.representative, n)
        entries.append({"id": rec.id, "representative": str(rec.representative),
                        "label": rec.label, "expected": rec.expected_proj_dim,
                        "actual": got, "match": got == rec.expected_proj_dim})
    return {"n": n, "entries": entries, "matched": sum(e["match"] for e in entries),
            "total": len(entries)}


def generic_annihilator_element(x: KVector, n: int, seed: int = 0, bound: int = 3,
                                samples: int = 3) -> KVector:
    """Seeded random element of (T_x O)^perp; the best of a few draws by orbit dimension."""
    basis = subspace_kvectors(tangent_annihilator(x, n), n, 3)
    if not basis:
        raise OrbitError("tangent annihilator is zero (dense orbit)")
    best, best_dim = None, -1
    for attempt in range(samples):
        rng = random.Random(f"{seed}:{attempt}")
        y = KVector(n, 3, {})
        for b in basis:
            y = y + b.scale(rng.randint(-bound, bound) or 1)
        if y.is_zero():
            continue
        d = orbit_dim(y, n)
        if d > best_dim:
            best, best_dim = y, d
    return best


def verify_duality_table(n: int = 8, data_dir=None, seed: int = 0) -> dict:
    """Check each stored (x, y, target) row as printed, plus a generic y.

    A row passes when the printed y annihilates T_x and its orbit has the
    target dimension.  The generic column draws y from (T_x O)^perp instead;
    its orbit is the dense orbit of the dual variety.
    """
    if n != 8:
        raise OrbitError("the duality table is stored for n = 8 only")
    doc = data.load("orbit_duality.json", data_dir)
    records = catalog(8, data_dir)

    def check(row: dict, kind: str) -> dict:
        x = parse_terms(n, row["x"])
        target = _record(records, row["target"])
        generic = generic_annihilator_element(x, n, seed)
        gdim = orbit_dim(generic, n)
        y = parse_terms(n, row["y"]) if row.get("y") else generic
        paired = verify_dual_pair(x, y, n)
        ydim = orbit_dim(y, n)
        return {"kind": kind, "orbit": row["orbit"], "x": str(x), "y": str(y),
                "y_printed": bool(row.get("y")), "target": target.id,
                "target_dim": target.expected_proj_dim, "paired": paired, "y_dim": ydim,
                "generic_dim": gdim, "generic_match": gdim == target.expected_proj_dim,
                "pass": paired and ydim == target.expected_proj_dim}

    rows = [check(r, "table") for r in doc["rows"]]
    rows += [check(r, "prose") for r in doc["prose_pairs"]]
    return {"n": n, "rows": rows, "all_pass": all(r["pass"] for r in rows)}


def remark_basis_change(data_dir=None) -> tuple[BasisChange, KVector, KVector]:
    """The stored change of basis with its source and expected image."""
    bc = data.load("orbit_duality.json", data_dir)["basis_change"]
    images = {int(j): [tuple(v)] for j, v in bc["images"].items()}
    g = BasisChange.from_images(8, images)
    return g, parse_terms(8, bc["source"]), parse_terms(8, bc["target"])


# ------------------------------------------------------------------- Hasse


def hasse_edges(n: int, data_dir=None) -> list[tuple[str, str]]:
    if n not in CATALOG_SIZES:
        raise OrbitError(f"orbit catalogs exist for n in 6, 7, 8, not {n}")
    doc = data.load("orbit_hasse.json", data_dir)
    return [tuple(e) for e in doc["edges"][str(n)]]


def hasse_graph(n: int, data_dir=None) -> dict:
    records = catalog(n, data_dir)
    ids = {r.id for r in records}
    dims = {r.id: r.expected_proj_dim for r in records}
    edges = []
    for a, b in hasse_edges(n, data_dir):
        if a not in ids or b not in ids:
            raise OrbitError(f"edge {a} -> {b} names an unknown orbit")
        if dims[a] <= dims[b]:
            raise OrbitError(f"edge {a} -> {b} does not decrease dimension "
                             f"({dims[a]} -> {dims[b]})")
        edges.append([a, b])
    nodes = [{"id": r.id, "dim": r.expected_proj_dim, "label": r.label} for r in records]
    return {"n": n, "nodes": nodes, "edges": edges}


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def graph_to_dot(graph: dict) -> str:
    lines = [f'digraph "orbits_{graph["n"]}" {{']
    for node in graph["nodes"]:
        lines.append(f'  "{node["id"]}" [dim={node["dim"]}, label="{_dot_escape(node["label"])}"];')
    for a, b in graph["edges"]:
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE = re.compile(r'^\s*"([^"]+)"\s*\[dim=(\d+),\s*label="((?:[^"\\]|\\.)*)"\];\s*$')
_EDGE = re.compile(r'^\s*"([^"]+)"\s*->\s*"([^"]+)";\s*$')
_HEAD = re.compile(r'^digraph "orbits_(\d+)" \{$')


def dot_to_graph(text: str) -> dict:
    """Parse the DOT subset written by :func:`graph_to_dot`."""
    lines = text.strip().splitlines()
    head = _HEAD.match(lines[0]) if lines else None
    if not head or lines[-1].strip() != "}":
        raise OrbitError("not a graph written by graph_to_dot")
    graph = {"n": int(head.group(1)), "nodes": [], "edges": []}
    for line in lines[1:-1]:
        if m := _NODE.match(line):
            label = re.sub(r"\\(.)", r"\1", m.group(3))
            graph["nodes"].append({"id": m.group(1), "dim": int(m.group(2)), "label": label})
        elif m := _EDGE.match(line):
            graph["edges"].append([m.group(1), m.group(2)])
        else:
            raise OrbitError(f"unrecognized DOT line: {line!r}")
    return graph


def hasse_export(n: int, fmt: str = "dot", data_dir=None) -> str:
    graph = hasse_graph(n, data_dir)
    if fmt == "dot":
        return graph_to_dot(graph)
    if fmt == "json":
        return json.dumps(graph, ensure_ascii=False, sort_keys=True, indent=1)
    raise OrbitError(f"unknown format {fmt!r}; use dot or json")


def basis_trivectors(n: int) -> list[KVector]:
    return [KVector.monomial(n, *mi) for mi in basis_indices(n, 3)]
