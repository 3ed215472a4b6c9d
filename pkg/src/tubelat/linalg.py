"""Exact linear algebra over the rationals.

Matrices are lists (or tuples) of rows of ``Fraction``; a matrix with zero
rows carries no column information, so every function that must cope with
empty input takes the column count explicitly.  Pivoting is deterministic
(topmost usable row, preferring unit pivots), which keeps all derived bases
byte-stable across runs.
"""

from __future__ import annotations

from fractions import Fraction

Vec = list  # list[Fraction]
Mat = list  # list[list[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: int) -> Mat:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Mat:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(a: Mat, cols: int | None = None) -> Mat:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def mat_mul(a: Mat, b: Mat, b_cols: int | None = None) -> Mat:
    """Product a.b; ``b_cols`` keeps the width when b has zero rows."""
    if not a:
        return []
    inner = len(a[0])
    cols = len(b[0]) if b else (0 if b_cols is None else b_cols)
    out = []
    for row in a:
        out.append(
            [sum((row[k] * b[k][j] for k in range(inner)), ZERO) for j in range(cols)]
        )
    return out


def mat_vec(a: Mat, v: Vec) -> Vec:
    return [sum((row[k] * v[k] for k in range(len(v))), ZERO) for row in a]


def vec_add(u: Vec, v: Vec) -> Vec:
    return [x + y for x, y in zip(u, v)]


def vec_sub(u: Vec, v: Vec) -> Vec:
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, v: Vec) -> Vec:
    return [c * x for x in v]


def _pivot_row(rows: Mat, col: int, start: int) -> int | None:
    """Topmost row with a nonzero entry in ``col``; unit entries win ties upward."""
    best = None
    for i in range(start, len(rows)):
        x = rows[i][col]
        if x == 0:
            continue
        if x == 1 or x == -1:
            return i
        if best is None:
            best = i
    return best


def rref(a: Mat, cols: int | None = None) -> tuple[Mat, list[int]]:
    """Reduced row echelon form (copy) and the list of pivot columns."""
    rows = [list(r) for r in a]
    ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = _pivot_row(rows, c, r)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = ONE / rows[r][c]
        if inv != 1:
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a: Mat, cols: int | None = None) -> int:
    return len(rref(a, cols)[1])


def nullspace(a: Mat, cols: int) -> list[Vec]:
    """Basis of the right kernel, one vector per free column, deterministic."""
    reduced, pivots = rref(a, cols)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced[r][f]
        basis.append(v)
    return basis


def solve(a: Mat, b: Vec, cols: int) -> Vec | None:
    """One solution of ``a x = b`` or ``None`` if the system is inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    reduced, pivots = rref(aug, cols + 1)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for r, p in enumerate(pivots):
        x[p] = reduced[r][cols]
    return x


def inverse(a: Mat) -> Mat | None:
    n = len(a)
    aug = [list(row) + ident_row for row, ident_row in zip(a, identity(n))]
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in reduced]


def column_space_basis(vectors: list[Vec], dim: int) -> list[Vec]:
    """Deterministic basis of span(vectors): the ones at pivot positions of the
    coordinate matrix, echelonized.  Returns reduced, leading-one vectors."""
    if not vectors:
        return []
    reduced, pivots = rref([list(v) for v in vectors], dim)
    # rows of the rref of the stacked vectors span the same space
    return [reduced[i] for i in range(len(pivots))]


def span_dim(vectors: list[Vec], dim: int) -> int:
    return rank([list(v) for v in vectors], dim)


def in_span(vectors: list[Vec], v: Vec, dim: int) -> bool:
    base = span_dim(vectors, dim)
    return span_dim(list(vectors) + [list(v)], dim) == base


def subspace_leq(u: list[Vec], v: list[Vec], dim: int) -> bool:
    """span(u) contained in span(v)."""
    base = span_dim(v, dim)
    return span_dim(list(v) + list(u), dim) == base


def subspace_sum(u: list[Vec], v: list[Vec], dim: int) -> list[Vec]:
    return column_space_basis(list(u) + list(v), dim)


def subspace_intersection(u: list[Vec], v: list[Vec], dim: int) -> list[Vec]:
    """Basis of span(u) n span(v) via the kernel of [U^T | -V^T]."""
    if not u or not v:
        return []
    cols = len(u) + len(v)
    system = []
    for coord in range(dim):
        system.append([w[coord] for w in u] + [-w[coord] for w in v])
    combos = nullspace(system, cols)
    vectors = []
    for c in combos:
        vec = [ZERO] * dim
        for j, w in enumerate(u):
            if c[j] != 0:
                vec = vec_add(vec, vec_scale(c[j], w))
        vectors.append(vec)
    return column_space_basis(vectors, dim)


def same_subspace(u: list[Vec], v: list[Vec], dim: int) -> bool:
    return subspace_leq(u, v, dim) and subspace_leq(v, u, dim)
