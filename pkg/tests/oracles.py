"""Independent reference computations used only by the tests.

Nothing here imports the package; each routine takes the slow, obvious route.
"""
from fractions import Fraction
from itertools import combinations, permutations, product


def perm_parity(seq):
    """Sign of the permutation sorting seq, by cycle decomposition; 0 on repeats."""
    if len(set(seq)) != len(seq):
        return 0
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    seen = [False] * len(seq)
    sign = 1
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(M):
    n = len(M)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(perm_parity(p))
        for i in range(n):
            term *= M[i][p[i]]
            if not term:
                break
        total += term
    return total


def naive_rank(rows):
    """Plain Gaussian elimination over Fractions with first nonzero pivot."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return 0
    rank = 0
    ncols = len(A[0])
    for c in range(ncols):
        piv = None
        for r in range(rank, len(A)):
            if A[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(len(A)):
            if r != rank and A[r][c] != 0:
                f = A[r][c] / A[rank][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


def plucker_minors(vectors, n):
    """All k x k minors of the k x n matrix, in lexicographic column order."""
    k = len(vectors)
    out = {}
    for cols in combinations(range(n), k):
        M = [[Fraction(v[c]) for c in cols] for v in vectors]
        d = leibniz_det(M)
        if d:
            out[tuple(c + 1 for c in cols)] = d
    return out


def wedge_terms(terms_u, terms_v):
    """Wedge of {indices: coeff} dicts by concatenation and parity."""
    out = {}
    for a, x in terms_u.items():
        for b, y in terms_v.items():
            s = perm_parity(a + b)
            if s:
                key = tuple(sorted(a + b))
                out[key] = out.get(key, 0) + s * x * y
    return {k: v for k, v in out.items() if v}


def e8_roots():
    """All 240 roots of E8 in the even coordinate system."""
    roots = set()
    for i, j in combinations(range(8), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [Fraction(0)] * 8
            v[i], v[j] = Fraction(si), Fraction(sj)
            roots.add(tuple(v))
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.add(tuple(Fraction(s, 2) for s in signs))
    return roots


def f4_roots():
    roots = set()
    for i in range(4):
        for s in (1, -1):
            v = [Fraction(0)] * 4
            v[i] = Fraction(s)
            roots.add(tuple(v))
    for i, j in combinations(range(4), 2):
        for si, sj in product((1, -1), repeat=2):
            v = [Fraction(0)] * 4
            v[i], v[j] = Fraction(si), Fraction(sj)
            roots.add(tuple(v))
    for signs in product((1, -1), repeat=4):
        roots.add(tuple(Fraction(s, 2) for s in signs))
    return roots


def monomial_count(nvars, d):
    return sum(1 for e in product(range(d + 1), repeat=nvars) if sum(e) == d)
