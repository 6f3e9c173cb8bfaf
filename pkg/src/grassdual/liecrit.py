"""Root systems and the three-positive-root criterion on highest weights.

Roots and weights use Bourbaki epsilon-coordinates. Positive roots are
generated from the simple roots by root strings, fundamental weights by
inverting the Cartan matrix, and the longest Weyl element by reflecting -rho
back into the dominant chamber.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import data
from .exterior import MatrixQ

Vec = tuple  # tuple of Fraction

CLASSICAL = ("A", "B", "C", "D")
EXCEPTIONAL = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}

_POSITIVE_ROOT_COUNTS = {
    "A": lambda r: r * (r + 1) // 2,
    "B": lambda r: r * r,
    "C": lambda r: r * r,
    "D": lambda r: r * (r - 1),
    "E6": lambda r: 36,
    "E7": lambda r: 63,
    "E8": lambda r: 120,
    "F4": lambda r: 24,
    "G2": lambda r: 6,
}


class LieError(ValueError):
    pass


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def _add(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _scale(c, u: Sequence) -> Vec:
    return tuple(c * a for a in u)


def _unit(m: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(m))


def _eps(m: int, *terms: tuple[int, object]) -> Vec:
    v = [Fraction(0)] * m
    for i, c in terms:
        v[i - 1] += Fraction(c)
    return tuple(v)


def _classical_simple_roots(t: str, r: int) -> tuple[int, list[Vec]]:
    if t == "A":
        m = r + 1
        return m, [_eps(m, (i, 1), (i + 1, -1)) for i in range(1, r + 1)]
    m = r
    chain = [_eps(m, (i, 1), (i + 1, -1)) for i in range(1, r)]
    if t == "B":
        return m, chain + [_eps(m, (r, 1))]
    if t == "C":
        return m, chain + [_eps(m, (r, 2))]
    return m, chain + [_eps(m, (r - 1, 1), (r, 1))]


def _validate(lie_type: str, rank: int | None) -> tuple[str, int]:
    t = lie_type.upper()
    if t in EXCEPTIONAL:
        if rank not in (None, EXCEPTIONAL[t]):
            raise LieError(f"{t} has rank {EXCEPTIONAL[t]}, not {rank}")
        return t, EXCEPTIONAL[t]
    if len(t) > 1 and t[0] in CLASSICAL and t[1:].isdigit():
        r = int(t[1:])
        if rank not in (None, r):
            raise LieError(f"type {t} conflicts with rank {rank}")
        t, rank = t[0], r
    if t not in CLASSICAL:
        raise LieError(f"unknown Lie type {lie_type!r}")
    if rank is None:
        raise LieError(f"type {t} needs a rank")
    minimum = {"A": 1, "B": 2, "C": 3, "D": 4}[t]
    if rank < minimum:
        raise LieError(f"{t}{rank} is not a valid simple type (rank >= {minimum})")
    return t, rank


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c])
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class Weight:
    coords: Vec
    fw_coords: tuple[int, ...] | None = None

    @property
    def dominant(self) -> bool:
        return self.fw_coords is not None and all(a >= 0 for a in self.fw_coords)

    def name(self) -> str:
        return weight_name(self.fw_coords) if self.fw_coords is not None else str(self.coords)


def weight_name(fw: Sequence[int]) -> str:
    """'ω1+ω2', '3ω1', '0' for fundamental-weight coordinates."""
    parts = []
    for i, a in enumerate(fw, start=1):
        if a == 1:
            parts.append(f"+ω{i}")
        elif a:
            parts.append(f"{'+' if a > 0 else '-'}{abs(a) if abs(a) != 1 else ''}ω{i}")
    s = "".join(parts)
    return (s[1:] if s.startswith("+") else s) or "0"


def parse_weight(text: str, rank: int) -> tuple[int, ...]:
    """Inverse of :func:`weight_name`; accepts 'w' for 'ω'."""
    text = text.replace("w", "ω").replace(" ", "")
    fw = [0] * rank
    if text == "0":
        return tuple(fw)
    for term in text.split("+"):
        coef, _, idx = term.partition("ω")
        i = int(idx)
        if not 1 <= i <= rank:
            raise LieError(f"ω{i} does not exist in rank {rank}")
        fw[i - 1] += int(coef) if coef else 1
    return tuple(fw)


@dataclass(frozen=True)
class RootSystem:
    lie_type: str
    rank: int
    ambient_dim: int
    simple_roots: tuple[Vec, ...]
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Vec, ...]
    positive_simple_coords: tuple[tuple[int, ...], ...]
    fundamental_weights: tuple[Vec, ...]
    w0_matrix: MatrixQ
    w0_word: tuple[int, ...] = field(default=())

    @property
    def name(self) -> str:
        return self.lie_type if self.lie_type in EXCEPTIONAL else f"{self.lie_type}{self.rank}"

    def coroot_pairing(self, v: Sequence, i: int) -> Fraction:
        a = self.simple_roots[i]
        return 2 * _dot(v, a) / _dot(a, a)

    def fw_coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.coroot_pairing(v, i) for i in range(self.rank))

    def weight(self, fw: Sequence[int]) -> Weight:
        coords = tuple(Fraction(0) for _ in range(self.ambient_dim))
        for a, w in zip(fw, self.fundamental_weights):
            coords = _add(coords, _scale(a, w))
        return Weight(coords, tuple(int(a) for a in fw))

    def apply_w0(self, v: Sequence) -> Vec:
        M = self.w0_matrix.entries
        return tuple(_dot(row, v) for row in M)

    def diagram_automorphism(self) -> tuple[int, ...]:
        """Permutation sigma of simple-root indices with -w0(omega_i) = omega_sigma(i)."""
        perm = []
        for w in self.fundamental_weights:
            fw = self.fw_coordinates(_scale(-1, self.apply_w0(w)))
            (j,) = [j for j, a in enumerate(fw) if a]
            perm.append(j)
        return tuple(perm)


def _simple_roots(t: str, r: int, data_dir=None) -> tuple[int, list[Vec]]:
    if t in CLASSICAL:
        return _classical_simple_roots(t, r)
    doc = data.load("rootdata.json", data_dir)[t]
    m = doc["ambient_dim"]
    return m, [tuple(Fraction(x) for x in a) for a in doc["simple_roots"]]


def _positive_roots(cartan: list[list[int]]) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, by height, via root strings."""
    r = len(cartan)
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    roots = set(simple)
    layer = list(simple)
    out = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                # p = length of the alpha_i string below beta
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pairing = sum(beta[j] * cartan[j][i] for j in range(r))
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        nxt.sort()
        out.extend(nxt)
        layer = nxt
    return out


def _reflect(v: Vec, a: Vec, aa: Fraction) -> Vec:
    c = 2 * _dot(v, a) / aa
    return tuple(x - c * y for x, y in zip(v, a))


@lru_cache(maxsize=None)
def _build(t: str, r: int, data_dir) -> RootSystem:
    m, simple = _simple_roots(t, r, data_dir)
    if len(simple) != r:
        raise LieError(f"expected {r} simple roots for {t}")
    norms = [_dot(a, a) for a in simple]
    cartan = [[int(2 * _dot(simple[i], simple[j]) / norms[j]) for j in range(r)]
              for i in range(r)]
    coords = _positive_roots(cartan)
    pos = []
    for c in coords:
        v = tuple(Fraction(0) for _ in range(m))
        for cj, a in zip(c, simple):
            if cj:
                v = _add(v, _scale(cj, a))
        pos.append(v)
    inv = _inverse(cartan)
    fws = []
    for i in range(r):
        w = tuple(Fraction(0) for _ in range(m))
        for j in range(r):
            if inv[i][j]:
                w = _add(w, _scale(inv[i][j], simple[j]))
        fws.append(w)
    # longest element: walk -rho into the dominant chamber
    rho = tuple(sum((w[k] for w in fws), Fraction(0)) for k in range(m))
    v = _scale(-1, rho)
    word = []
    while True:
        i = next((i for i in range(r) if _dot(v, simple[i]) < 0), None)
        if i is None:
            break
        v = _reflect(v, simple[i], norms[i])
        word.append(i)
    cols = []
    for k in range(m):
        e = _unit(m, k)
        for i in word:
            e = _reflect(e, simple[i], norms[i])
        cols.append(e)
    w0 = MatrixQ.from_rows([[cols[k][row] for k in range(m)] for row in range(m)], m)
    return RootSystem(t, r, m, tuple(simple), tuple(tuple(x) for x in cartan), tuple(pos),
                      tuple(coords), tuple(fws), w0, tuple(word))


def build_root_system(lie_type: str, rank: int | None = None, data_dir=None) -> RootSystem:
    t, r = _validate(lie_type, rank)
    rs = _build(t, r, None if data_dir is None else str(data_dir))
    expected = _POSITIVE_ROOT_COUNTS[t](r)
    if len(rs.positive_roots) != expected:
        raise LieError(f"{rs.name}: generated {len(rs.positive_roots)} positive roots, "
                       f"expected {expected}")
    return rs


def w0_image(rs: RootSystem, w: Weight) -> Weight:
    img = rs.apply_w0(w.coords)
    fw = None
    if w.fw_coords is not None:
        fw = tuple(int(x) for x in rs.fw_coordinates(img))
    return Weight(img, fw)


# ------------------------------------------------------- the criterion


def _fw_int(rs: RootSystem, simple_coords: Sequence[int]) -> tuple[int, ...]:
    """Fundamental-weight coordinates of sum_j c_j alpha_j (integral)."""
    return tuple(sum(c * rs.cartan[j][k] for j, c in enumerate(simple_coords))
                 for k in range(rs.rank))


def _sums(rs: RootSystem, count: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Distinct sums of `count` positive roots (multisets), in simple-root
    coordinates, each mapped to one witness tuple of root indices."""
    roots = rs.positive_simple_coords
    level: dict[tuple[int, ...], tuple[int, ...]] = {(0,) * rs.rank: ()}
    for _ in range(count):
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for s, wit in level.items():
            for g in range(len(roots)):
                t = tuple(a + b for a, b in zip(s, roots[g]))
                if t not in nxt:
                    nxt[t] = wit + (g,)
        level = nxt
    return level


@lru_cache(maxsize=None)
def _triple_sums_cached(rs: RootSystem):
    return _sums(rs, 3)


@lru_cache(maxsize=None)
def _pair_sums_cached(rs: RootSystem):
    return _sums(rs, 2)


def triple_sums(rs: RootSystem) -> dict[Vec, tuple[Vec, Vec, Vec]]:
    """{alpha + beta + gamma: (alpha, beta, gamma)} over positive roots, in
    epsilon-coordinates, one witness per distinct sum."""
    out = {}
    for wit in _triple_sums_cached(rs).values():
        a, b, c = (rs.positive_roots[i] for i in wit)
        out[_add(_add(a, b), c)] = (a, b, c)
    return out


def pair_sums(rs: RootSystem) -> dict[Vec, tuple[Vec, Vec]]:
    out = {}
    for wit in _pair_sums_cached(rs).values():
        a, b = (rs.positive_roots[i] for i in wit)
        out[_add(a, b)] = (a, b)
    return out


def _orbits_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for i, j in enumerate(perm):
        if i in seen:
            continue
        if perm[j] != i:
            raise LieError("diagram automorphism is not an involution")
        seen.update({i, j})
        out.append((i,) if i == j else (i, j))
    return out


def _preimages(t: Sequence[int], orbits: list[tuple[int, ...]], r: int) -> list[tuple[int, ...]]:
    """Dominant a with a + sigma(a) = t (fundamental-weight coordinates).

    A fixed index i needs 2 a_i = t_i; a swapped pair (i, j) needs
    t_i = t_j and leaves a_i free in 0..t_i with a_j = t_i - a_i.
    """
    choices: list[list[tuple[tuple[int, int], ...]]] = []
    for orb in orbits:
        if len(orb) == 1:
            (i,) = orb
            if t[i] % 2:
                return []
            choices.append([((i, t[i] // 2),)])
        else:
            i, j = orb
            if t[i] != t[j]:
                return []
            choices.append([((i, x), (j, t[i] - x)) for x in range(t[i] + 1)])
    out = [()]
    for opts in choices:
        out = [acc + o for acc in out for o in opts]
    result = []
    for assignment in out:
        a = [0] * r
        for i, x in assignment:
            a[i] = x
        result.append(tuple(a))
    return result


@dataclass(frozen=True)
class DiamondSolution:
    weight: Weight
    triple: tuple[Vec, Vec, Vec]
    pair: tuple[Vec, Vec] | None  # set when lambda - w0(lambda) is also a sum of two positive roots

    @property
    def name(self) -> str:
        return self.weight.name()

    @property
    def defective(self) -> bool:
        return self.pair is not None


def _check_w0_map(rs: RootSystem) -> tuple[int, ...]:
    """Matrix of lambda -> lambda - w0(lambda) in fundamental-weight
    coordinates must be identity + an involutive permutation."""
    sigma = rs.diagram_automorphism()
    for i, w in enumerate(rs.fundamental_weights):
        img = tuple(x - y for x, y in zip(w, rs.apply_w0(w)))
        fw = rs.fw_coordinates(img)
        expected = [0] * rs.rank
        expected[i] += 1
        expected[sigma[i]] += 1
        if list(fw) != expected:
            raise LieError(f"{rs.name}: unexpected image of ω{i + 1} under 1 - w0")
    return sigma


def solve_diamond(rs: RootSystem, include_defective: bool = False) -> list[DiamondSolution]:
    """Dominant lambda with lambda - w0(lambda) a sum of three positive roots.

    Weights whose lambda - w0(lambda) is also a sum of two positive roots (the
    tangent cones at a general pair already meet, so the secant variety is
    defective) are dropped unless include_defective is set; they carry the
    two-root witness in ``pair``.
    """
    sigma = _check_w0_map(rs)
    orbits = _orbits_of(sigma)
    pairs_fw = {_fw_int(rs, s): wit for s, wit in _pair_sums_cached(rs).items()}
    found: dict[tuple[int, ...], DiamondSolution] = {}
    for s, wit in _triple_sums_cached(rs).items():
        t = _fw_int(rs, s)
        if min(t) < 0:
            continue
        for a in _preimages(t, orbits, rs.rank):
            if not any(a) or a in found:
                continue
            triple = tuple(rs.positive_roots[i] for i in wit)
            pw = pairs_fw.get(t)
            pair = None if pw is None else tuple(rs.positive_roots[i] for i in pw)
            found[a] = DiamondSolution(rs.weight(a), triple, pair)
    sols = sorted(found.values(), key=lambda s: (sum(s.weight.fw_coords), s.weight.fw_coords))
    if not include_defective:
        sols = [s for s in sols if not s.defective]
    return sols


def verify_solution(rs: RootSystem, sol: DiamondSolution) -> bool:
    """lambda - w0(lambda) - (alpha + beta + gamma) == 0 exactly."""
    lam = sol.weight.coords
    diff = tuple(x - y for x, y in zip(lam, rs.apply_w0(lam)))
    a, b, c = sol.triple
    pos = set(rs.positive_roots)
    return a in pos and b in pos and c in pos and diff == _add(_add(a, b), c)


# ------------------------------------------------------- reference table


def diagram_automorphisms(rs: RootSystem) -> list[tuple[int, ...]]:
    """All permutations of the simple roots preserving the Cartan matrix."""
    r = rs.rank
    A = rs.cartan
    out = []

    def extend(perm: list[int]):
        i = len(perm)
        if i == r:
            out.append(tuple(perm))
            return
        for j in range(r):
            if j in perm:
                continue
            if A[i][i] != A[j][j]:
                continue
            if all(A[i][k] == A[j][perm[k]] and A[k][i] == A[perm[k]][j] for k in range(i)):
                extend(perm + [j])

    extend([])
    return out


def _orbit_key(fw: tuple[int, ...], group: Sequence[Sequence[int]]) -> tuple[int, ...]:
    images = []
    for g in group:
        img = [0] * len(fw)
        for i, a in enumerate(fw):
            img[g[i]] = a
        images.append(tuple(img))
    return min(images)


def _expand(template: str, r: int) -> str:
    return template.replace("{n}", str(r)).replace("{n-1}", str(r - 1)).replace(
        "{n-2}", str(r - 2))


def _applicable_rows(rows: list[dict], t: str, r: int) -> list[dict]:
    out = []
    for row in rows:
        if row["type"] != t:
            continue
        if "rank" in row and row["rank"] != r:
            continue
        if r < row.get("min_rank", 0):
            continue
        for w in row["weights"]:
            out.append({"weight": _expand(w, r), "label": _expand(row["label"], r)})
    return out


def table1_expected(lie_type: str, rank: int | None = None, data_dir=None) -> list[dict]:
    """Stored reference rows that apply to one simple type."""
    t, r = _validate(lie_type, rank)
    return _applicable_rows(data.load("lie_table1.json", data_dir)["rows"], t, r)


def defective_reference(lie_type: str, rank: int | None = None, data_dir=None) -> list[dict]:
    """Cited list of homogeneous varieties with defective secant (not computed)."""
    t, r = _validate(lie_type, rank)
    doc = data.load("lie_table1.json", data_dir)
    return _applicable_rows(doc["defective_reference"]["rows"], t, r)


def table1_report(max_classical_rank: int = 8, data_dir=None,
                  min_classical_rank: int | None = None) -> dict:
    if max_classical_rank < 5:
        raise LieError("max_classical_rank must be >= 5")
    doc = data.load("lie_table1.json", data_dir)
    lo = doc["min_checked_rank"] if min_classical_rank is None else min_classical_rank
    types: list[tuple[str, int]] = []
    for t in CLASSICAL:
        start = max(lo.get(t, 1) if isinstance(lo, dict) else lo,
                    {"A": 1, "B": 2, "C": 3, "D": 4}[t])
        types += [(t, r) for r in range(start, max_classical_rank + 1)]
    types += [(t, r) for t, r in EXCEPTIONAL.items()]
    entries = []
    for t, r in types:
        rs = build_root_system(t, r, data_dir)
        group = diagram_automorphisms(rs)
        sols = solve_diamond(rs, include_defective=True)
        kept = [s for s in sols if not s.defective]
        exp = table1_expected(t, r, data_dir)
        exp_fw = {parse_weight(e["weight"], r) for e in exp}
        got_keys = {_orbit_key(s.weight.fw_coords, group) for s in kept}
        exp_keys = {_orbit_key(fw, group) for fw in exp_fw}
        entries.append({
            "type": rs.name,
            "solutions": [s.name for s in kept],
            "defective_secant": [s.name for s in sols if s.defective],
            "defective_reference": sorted({e["weight"].replace("w", "ω") + " " + e["label"]
                                           for e in defective_reference(t, r, data_dir)}),
            "expected": sorted({weight_name(fw) for fw in exp_fw}),
            "labels": sorted({e["label"] for e in exp}),
            "missing": sorted(weight_name(k) for k in exp_keys - got_keys),
            "extra": sorted(weight_name(k) for k in got_keys - exp_keys),
            "match": got_keys == exp_keys,
        })
    return {"max_classical_rank": max_classical_rank, "entries": entries,
            "all_match": all(e["match"] for e in entries)}
