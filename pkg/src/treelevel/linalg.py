"""Exact integer/rational linear algebra used by the cone and counting
modules: rank, linear solving, Smith and Hermite normal forms, rational
cone membership and extremal-ray filtering.

Everything works on plain Python ints and fractions.Fraction; no floats
anywhere.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def frac_rank(rows):
    """Rank of a matrix given as a list of rows (ints or Fractions)."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for j in range(cols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][j] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][j]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][j] != 0:
                f = mat[i][j]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def solve_in_span(vectors, target):
    """Coefficients writing ``target`` over the given vectors, or None.

    The vectors must be linearly independent; the coefficient tuple is
    then unique when it exists.
    """
    m = len(target)
    k = len(vectors)
    aug = [[Fraction(vec[i]) for vec in vectors] + [Fraction(target[i])]
           for i in range(m)]
    pivots = []
    row = 0
    for col in range(k):
        piv = None
        for i in range(row, m):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None  # dependent, caller guarantees this cannot happen
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, m):
        if aug[i][k] != 0:
            return None
    return tuple(aug[i][k] for i in range(k))


def cone_contains(target, generators):
    """Exact membership of ``target`` in the rational cone of the generators.

    Uses the conic Caratheodory theorem: a point of the cone lies in
    the cone over some linearly independent subset, so it suffices to
    solve the square-ish systems for all such subsets.
    """
    target = tuple(Fraction(x) for x in target)
    if all(x == 0 for x in target):
        return True
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    gens = [g for g in gens if any(x != 0 for x in g)]
    if not gens:
        return False
    maxsize = min(len(gens), frac_rank(gens))
    for size in range(1, maxsize + 1):
        for subset in itertools.combinations(gens, size):
            if frac_rank(subset) < size:
                continue
            coeffs = solve_in_span(subset, target)
            if coeffs is not None and all(c >= 0 for c in coeffs):
                return True
    return False


def primitive(vec):
    """The primitive integer vector on the ray of ``vec`` (nonzero input)."""
    fracs = [Fraction(x) for x in vec]
    denom = math.lcm(*[f.denominator for f in fracs])
    ints = [int(f * denom) for f in fracs]
    g = math.gcd(*[abs(x) for x in ints])
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def extremal_rays(rays):
    """Subset of pairwise non-parallel rays not expressible over the others."""
    rays = [primitive(r) for r in rays]
    distinct = sorted(set(rays))
    out = []
    for i, r in enumerate(distinct):
        others = distinct[:i] + distinct[i + 1:]
        if not cone_contains(r, others):
            out.append(r)
    return out


def _identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def smith_normal_form(mat):
    """Smith form with transforms: returns (U, D, V) with U*mat*V = D.

    U and V are unimodular; D is diagonal with the nonzero entries
    first.  ``mat`` is a list of integer rows.
    """
    a = [list(map(int, row)) for row in mat]
    r = len(a)
    c = len(a[0]) if r else 0
    U = _identity(r)
    V = _identity(c)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(r, c):
        # locate a smallest nonzero entry in the trailing block
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if a[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, r):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                add_row(t, i, -q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, c):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                add_col(t, j, -q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        t += 1

    # enforce the divisibility chain d_t | d_{t+1}
    changed = True
    while changed:
        changed = False
        for i in range(min(r, c) - 1):
            di, dj = a[i][i], a[i + 1][i + 1]
            if di and dj and dj % di != 0:
                add_col(i + 1, i, 1)
                # re-run elimination from position i
                changed = True
                t = i
                while t < min(r, c):
                    best = None
                    for x in range(t, r):
                        for y in range(t, c):
                            if a[x][y] != 0 and (
                                    best is None
                                    or abs(a[x][y]) < abs(a[best[0]][best[1]])):
                                best = (x, y)
                    if best is None:
                        break
                    swap_rows(t, best[0])
                    swap_cols(t, best[1])
                    if a[t][t] < 0:
                        negate_row(t)
                    dirty = False
                    for x in range(t + 1, r):
                        if a[x][t] != 0:
                            add_row(t, x, -(a[x][t] // a[t][t]))
                            if a[x][t] != 0:
                                dirty = True
                    for y in range(t + 1, c):
                        if a[t][y] != 0:
                            add_col(t, y, -(a[t][y] // a[t][t]))
                            if a[t][y] != 0:
                                dirty = True
                    if not dirty:
                        t += 1
                break
    return U, a, V


def row_hermite_form(rows):
    """Canonical Hermite basis of the integer row lattice of ``rows``.

    Equal outputs characterize equal row lattices, which is how the
    relation lattices of two labelled trees are compared.
    """
    mat = [list(map(int, r)) for r in rows if any(r)]
    if not mat:
        return ()
    cols = len(mat[0])
    i = 0
    for j in range(cols):
        piv = None
        for k in range(i, len(mat)):
            if mat[k][j] != 0:
                piv = k
                break
        if piv is None:
            continue
        mat[i], mat[piv] = mat[piv], mat[i]
        for k in range(i + 1, len(mat)):
            while mat[k][j] != 0:
                q = mat[i][j] // mat[k][j]
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[k])]
                mat[i], mat[k] = mat[k], mat[i]
        if mat[i][j] < 0:
            mat[i] = [-x for x in mat[i]]
        for k in range(i):
            q = mat[k][j] // mat[i][j]
            if q:
                mat[k] = [x - q * y for x, y in zip(mat[k], mat[i])]
        i += 1
    return tuple(tuple(r) for r in mat[:i] if any(r))


def det(mat):
    """Determinant of a square integer/Fraction matrix, exactly."""
    a = [[Fraction(x) for x in row] for row in mat]
    k = len(a)
    sign = 1
    out = Fraction(1)
    for j in range(k):
        piv = None
        for i in range(j, k):
            if a[i][j] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != j:
            a[j], a[piv] = a[piv], a[j]
            sign = -sign
        out *= a[j][j]
        inv = 1 / a[j][j]
        for i in range(j + 1, k):
            if a[i][j] != 0:
                f = a[i][j] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[j])]
    return sign * out


def _invert(mat):
    k = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
           for i, row in enumerate(mat)]
    for j in range(k):
        piv = None
        for i in range(j, k):
            if aug[i][j] != 0:
                piv = i
                break
        if piv is None:
            return None
        aug[j], aug[piv] = aug[piv], aug[j]
        inv = 1 / aug[j][j]
        aug[j] = [x * inv for x in aug[j]]
        for i in range(k):
            if i != j and aug[i][j] != 0:
                f = aug[i][j]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[j])]
    return [row[k:] for row in aug]


def lattice_equivalent(rays_a, rays_b):
    """Whether two ray sets differ by a GL(d, Z) change of lattice basis.

    Brute force over images of one independent subset; the ray sets in
    play are tiny (a handful of rays in dimension at most five or so).
    """
    A = sorted({primitive(r) for r in rays_a})
    B = sorted({primitive(r) for r in rays_b})
    if len(A) != len(B):
        return False
    if not A:
        return True
    d = len(A[0])
    if len(B[0]) != d:
        return False
    basis = None
    for subset in itertools.combinations(range(len(A)), d):
        if frac_rank([A[i] for i in subset]) == d:
            basis = [A[i] for i in subset]
            break
    if basis is None:
        # degenerate span; compare spans and fall back to rank equality
        return frac_rank(A) == frac_rank(B)
    S = [list(col) for col in zip(*basis)]  # columns are the basis rays
    S_inv = _invert(S)
    for image in itertools.permutations(range(len(B)), d):
        T = [list(col) for col in zip(*[B[i] for i in image])]
        # U maps basis -> image: U = T * S^{-1}
        U = [[sum(T[i][k] * S_inv[k][j] for k in range(d)) for j in range(d)]
             for i in range(d)]
        if any(x.denominator != 1 for row in U for x in row):
            continue
        if abs(det(U)) != 1:
            continue
        mapped = {tuple(int(sum(U[i][k] * a[k] for k in range(d)))
                        for i in range(d)) for a in A}
        if mapped == set(B):
            return True
    return False
