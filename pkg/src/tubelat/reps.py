"""Explicit finite-dimensional modules as matrix data.

A representation assigns a rational vector space to every vertex and a
matrix to every arrow; an element at vertex u is pushed along an arrow
u -> v by the arrow's matrix (covariant convention, pinned empirically by
the law hom(P_i, M) = dim(M)_i).  Hom spaces are kernels of the intertwiner
system, Ext is computed from a projective-cover presentation, and all linear
algebra is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import AlgebraSpec, Path, PathBasis
from .errors import (
    ConsistencyError,
    SpecFormatError,
    TypeMismatchError,
    ValidationError,
)
from .lattice import DimVector, K0Lattice, Slope
from .serialize import frac_to_str, parse_frac

Matrix = tuple[tuple[Fraction, ...], ...]
Element = tuple[int, tuple[Fraction, ...]]  # (vertex, coordinates)

ZERO = Fraction(0)
ONE = Fraction(1)


def _freeze(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple((ZERO,) * cols for _ in range(rows))


@dataclass(frozen=True, eq=False)
class Representation:
    spec: AlgebraSpec
    dims: tuple[int, ...]
    maps: dict[str, Matrix] = field(repr=False)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def arrow_matrix(self, label: str) -> Matrix:
        return self.maps[label]


def make_representation(spec: AlgebraSpec, dims, maps) -> Representation:
    """Normalise and shape-check; every arrow needs a dims(tgt) x dims(src)
    matrix (missing ones default to zero)."""
    dims = tuple(int(d) for d in dims)
    if len(dims) != spec.vertex_count or any(d < 0 for d in dims):
        raise SpecFormatError(f"bad dimension vector {dims}")
    frozen: dict[str, Matrix] = {}
    for arrow in spec.arrows:
        rows, cols = dims[arrow.tgt], dims[arrow.src]
        mat = maps.get(arrow.label)
        if mat is None:
            frozen[arrow.label] = zero_matrix(rows, cols)
            continue
        m = _freeze(mat)
        if len(m) != rows or any(len(r) != cols for r in m):
            raise SpecFormatError(
                f"matrix for arrow {arrow.label!r} must be {rows}x{cols}"
            )
        frozen[arrow.label] = m
    unknown = set(maps) - set(frozen)
    if unknown:
        raise SpecFormatError(f"matrices for unknown arrows: {sorted(unknown)}")
    return Representation(spec=spec, dims=dims, maps=frozen)


def path_matrix(rep: Representation, path: Path, src_hint: int | None = None) -> Matrix:
    """Matrix of a path acting dims(src) -> dims(tgt); identity for trivial paths."""
    src, _ = rep.spec.path_endpoints(path, src_hint)
    mat = [
        [ONE if i == j else ZERO for j in range(rep.dims[src])]
        for i in range(rep.dims[src])
    ]
    for label in path:
        mat = linalg.mat_mul(
            [list(r) for r in rep.maps[label]], mat, b_cols=rep.dims[src]
        )
    return _freeze(mat)


def validate(rep: Representation) -> None:
    """Check that every relation acts as the zero matrix; failures name the
    violated relation."""
    failures = []
    for idx, rel in enumerate(rep.spec.relations):
        src, tgt = rep.spec.path_endpoints(rel[0][1])
        acc = [list(r) for r in zero_matrix(rep.dims[tgt], rep.dims[src])]
        for coeff, path in rel:
            pm = path_matrix(rep, path)
            for i in range(rep.dims[tgt]):
                for j in range(rep.dims[src]):
                    acc[i][j] += coeff * pm[i][j]
        if any(x != 0 for row in acc for x in row):
            pretty = " + ".join(f"({frac_to_str(c)})*{'.'.join(p)}" for c, p in rel)
            failures.append(f"relation {idx + 1} [{pretty}] is violated")
    if failures:
        raise ValidationError(failures)


def is_valid(rep: Representation) -> bool:
    try:
        validate(rep)
        return True
    except ValidationError:
        return False


def dim_vector(rep: Representation) -> DimVector:
    return rep.dims


def module_slope(lattice: K0Lattice, rep: Representation) -> Slope:
    return lattice.slope(dim_vector(rep))


# ---------------------------------------------------------------------------
# Standard modules
# ---------------------------------------------------------------------------


def zero_rep(spec: AlgebraSpec) -> Representation:
    return make_representation(spec, (0,) * spec.vertex_count, {})


def simple(spec: AlgebraSpec, i: int) -> Representation:
    if not 0 <= i < spec.vertex_count:
        raise SpecFormatError(f"vertex {i} out of range")
    dims = tuple(1 if v == i else 0 for v in range(spec.vertex_count))
    return make_representation(spec, dims, {})


def projective(basis: PathBasis, i: int) -> Representation:
    """P_i on the normal-form path basis, arrows acting by composition."""
    spec = basis.spec
    if not 0 <= i < spec.vertex_count:
        raise SpecFormatError(f"vertex {i} out of range")
    dims = tuple(len(basis.paths_between(i, v)) for v in range(spec.vertex_count))
    maps: dict[str, list[list[Fraction]]] = {}
    for arrow in spec.arrows:
        src_paths = basis.paths_between(i, arrow.src)
        tgt_paths = basis.paths_between(i, arrow.tgt)
        index = {p: k for k, p in enumerate(tgt_paths)}
        mat = [[ZERO] * len(src_paths) for _ in range(len(tgt_paths))]
        for col, p in enumerate(src_paths):
            for word, coeff in basis.reduce(p + (arrow.label,)).items():
                mat[index[word]][col] += coeff
        maps[arrow.label] = mat
    return make_representation(spec, dims, maps)


def projective_generator(basis: PathBasis, i: int) -> Element:
    """The trivial path of P_i, as an element at vertex i."""
    paths = basis.paths_between(i, i)
    coords = tuple(ONE if p == () else ZERO for p in paths)
    return (i, coords)


def direct_sum(m: Representation, n: Representation) -> Representation:
    if m.spec is not n.spec and m.spec != n.spec:
        raise TypeMismatchError("direct sum of modules over different algebras")
    dims = tuple(a + b for a, b in zip(m.dims, n.dims))
    maps = {}
    for arrow in m.spec.arrows:
        a, b = m.maps[arrow.label], n.maps[arrow.label]
        rows = []
        for r in a:
            rows.append(list(r) + [ZERO] * n.dims[arrow.src])
        for r in b:
            rows.append([ZERO] * m.dims[arrow.src] + list(r))
        maps[arrow.label] = rows
    return make_representation(m.spec, dims, maps)


def sum_embed(m: Representation, n: Representation, elem: Element, side: int) -> Element:
    """Coordinates of an element of m (side 0) or n (side 1) inside their sum."""
    v, coords = elem
    if side == 0:
        return (v, tuple(coords) + (ZERO,) * n.dims[v])
    return (v, (ZERO,) * m.dims[v] + tuple(coords))


# ---------------------------------------------------------------------------
# Hom spaces: the intertwiner linear system
# ---------------------------------------------------------------------------

Morphism = tuple[Matrix, ...]  # one dims_N[v] x dims_M[v] block per vertex


def _unknown_offsets(m: Representation, n: Representation) -> tuple[list[int], int]:
    offsets = []
    total = 0
    for v in range(m.spec.vertex_count):
        offsets.append(total)
        total += n.dims[v] * m.dims[v]
    return offsets, total


def _intertwiner_rows(m: Representation, n: Representation):
    if m.spec != n.spec:
        raise TypeMismatchError("modules live over different algebras")
    offsets, total = _unknown_offsets(m, n)
    rows = []
    for arrow in m.spec.arrows:
        u, v = arrow.src, arrow.tgt
        a = m.maps[arrow.label]  # dims_M[v] x dims_M[u]
        b = n.maps[arrow.label]  # dims_N[v] x dims_N[u]
        # f_v . a = b . f_u, one equation per (i < dims_N[v], j < dims_M[u])
        for i in range(n.dims[v]):
            for j in range(m.dims[u]):
                row = [ZERO] * total
                for t in range(m.dims[v]):
                    if a[t][j]:
                        row[offsets[v] + i * m.dims[v] + t] += a[t][j]
                for s in range(n.dims[u]):
                    if b[i][s]:
                        row[offsets[u] + s * m.dims[u] + j] -= b[i][s]
                if any(x != 0 for x in row):
                    rows.append(row)
    return rows, offsets, total


def hom_dim(m: Representation, n: Representation) -> int:
    rows, _, total = _intertwiner_rows(m, n)
    return total - linalg.rank(rows, total)


def _vector_to_morphism(vec, offsets, m: Representation, n: Representation) -> Morphism:
    blocks = []
    for v in range(m.spec.vertex_count):
        block = []
        for i in range(n.dims[v]):
            base = offsets[v] + i * m.dims[v]
            block.append(tuple(vec[base : base + m.dims[v]]))
        blocks.append(tuple(block))
    return tuple(blocks)


def hom_basis(m: Representation, n: Representation) -> list[Morphism]:
    rows, offsets, total = _intertwiner_rows(m, n)
    return [
        _vector_to_morphism(vec, offsets, m, n)
        for vec in linalg.nullspace(rows, total)
    ]


def apply_morphism(f: Morphism, elem: Element) -> Element:
    v, coords = elem
    block = f[v]
    return (v, tuple(linalg.mat_vec([list(r) for r in block], list(coords))))


def compose_morphisms(f: Morphism, g: Morphism, source_dims) -> Morphism:
    """f after g, blockwise; ``source_dims`` is the dimension vector of g's source."""
    return tuple(
        _freeze(linalg.mat_mul([list(r) for r in fb], [list(r) for r in gb], b_cols=d))
        for fb, gb, d in zip(f, g, source_dims)
    )


def is_morphism(m: Representation, n: Representation, f: Morphism) -> bool:
    for arrow in m.spec.arrows:
        u, v = arrow.src, arrow.tgt
        lhs = linalg.mat_mul(
            [list(r) for r in f[v]],
            [list(r) for r in m.maps[arrow.label]],
            b_cols=m.dims[u],
        )
        rhs = linalg.mat_mul(
            [list(r) for r in n.maps[arrow.label]],
            [list(r) for r in f[u]],
            b_cols=m.dims[u],
        )
        if lhs != rhs:
            return False
    return True


def morphism_taking(
    m: Representation,
    n: Representation,
    pairs: list[tuple[Element, Element]],
) -> Morphism | None:
    """A morphism m -> n sending each source element to its target, or None.

    Solves the intertwiner system extended by the affine point conditions.
    """
    rows, offsets, total = _intertwiner_rows(m, n)
    rhs = [ZERO] * len(rows)
    for (v, src), (w, tgt) in pairs:
        if v != w:
            raise TypeMismatchError("point images must live at the same vertex")
        if len(src) != m.dims[v] or len(tgt) != n.dims[v]:
            raise TypeMismatchError("point coordinates have the wrong length")
        for i in range(n.dims[v]):
            row = [ZERO] * total
            for j in range(m.dims[v]):
                row[offsets[v] + i * m.dims[v] + j] = src[j]
            rows.append(row)
            rhs.append(tgt[i])
    sol = linalg.solve(rows, rhs, total)
    if sol is None:
        return None
    return _vector_to_morphism(sol, offsets, m, n)


# ---------------------------------------------------------------------------
# Submodules, quotients, covers and Ext
# ---------------------------------------------------------------------------

Bases = list[list[list[Fraction]]]  # per vertex, a list of coordinate vectors


def submodule_closure(rep: Representation, gens: list[Element]) -> Bases:
    """Per-vertex bases of the submodule generated by the given elements."""
    spans: Bases = [[] for _ in range(rep.spec.vertex_count)]
    for v, coords in gens:
        if len(coords) != rep.dims[v]:
            raise TypeMismatchError("generator has wrong length")
        spans[v].append([Fraction(c) for c in coords])
    for v in range(rep.spec.vertex_count):
        spans[v] = linalg.column_space_basis(spans[v], rep.dims[v])
    changed = True
    while changed:
        changed = False
        for arrow in rep.spec.arrows:
            u, v = arrow.src, arrow.tgt
            if not spans[u]:
                continue
            a = [list(r) for r in rep.maps[arrow.label]]
            pushed = [linalg.mat_vec(a, vec) for vec in spans[u]]
            merged = linalg.column_space_basis(spans[v] + pushed, rep.dims[v])
            if len(merged) != len(spans[v]):
                spans[v] = merged
                changed = True
    return spans


def sub_representation(rep: Representation, bases: Bases) -> tuple[Representation, Bases]:
    """The subrepresentation spanned by arrow-closed per-vertex bases, plus
    the inclusion (each basis vector in ambient coordinates)."""
    dims = tuple(len(b) for b in bases)
    maps = {}
    for arrow in rep.spec.arrows:
        u, v = arrow.src, arrow.tgt
        a = [list(r) for r in rep.maps[arrow.label]]
        cols = []
        tgt_matrix = [
            [bases[v][t][coord] for t in range(dims[v])]
            for coord in range(rep.dims[v])
        ]
        for vec in bases[u]:
            img = linalg.mat_vec(a, vec)
            coeffs = linalg.solve(tgt_matrix, img, dims[v])
            if coeffs is None:
                raise ConsistencyError("bases are not closed under the arrows")
            cols.append(coeffs)
        maps[arrow.label] = [
            [cols[j][i] for j in range(dims[u])] for i in range(dims[v])
        ]
    return make_representation(rep.spec, dims, maps), bases


def _reducer(basis_vectors: list[list[Fraction]], dim: int):
    """Return (free_positions, reduce) where reduce maps an ambient vector to
    its quotient coordinates over the standard complement."""
    reduced, pivots = linalg.rref([list(v) for v in basis_vectors], dim)
    reduced = reduced[: len(pivots)]
    free = [c for c in range(dim) if c not in set(pivots)]

    def reduce(vec):
        r = list(vec)
        for row, p in zip(reduced, pivots):
            if r[p]:
                f = r[p]
                r = [x - f * y for x, y in zip(r, row)]
        return [r[c] for c in free]

    return free, reduce


def quotient_representation(
    rep: Representation, bases: Bases
) -> tuple[Representation, list]:
    """The quotient by an arrow-closed subspace family, plus the per-vertex
    projection functions (ambient coordinates -> quotient coordinates)."""
    reducers = []
    frees = []
    for v in range(rep.spec.vertex_count):
        free, reduce = _reducer(bases[v], rep.dims[v])
        reducers.append(reduce)
        frees.append(free)
    dims = tuple(len(f) for f in frees)
    maps = {}
    for arrow in rep.spec.arrows:
        u, v = arrow.src, arrow.tgt
        a = [list(r) for r in rep.maps[arrow.label]]
        cols = []
        for fpos in frees[u]:
            section = [ONE if i == fpos else ZERO for i in range(rep.dims[u])]
            cols.append(reducers[v](linalg.mat_vec(a, section)))
        maps[arrow.label] = [
            [cols[j][i] for j in range(dims[u])] for i in range(dims[v])
        ]
    quot = make_representation(rep.spec, dims, maps)
    return quot, reducers


def quotient_by_elements(
    rep: Representation, gens: list[Element]
) -> tuple[Representation, list]:
    return quotient_representation(rep, submodule_closure(rep, gens))


def radical_bases(rep: Representation) -> Bases:
    """Per-vertex bases of rad(M) = sum of images of all arrow maps."""
    spans: Bases = [[] for _ in range(rep.spec.vertex_count)]
    for arrow in rep.spec.arrows:
        mat = rep.maps[arrow.label]
        for col in range(rep.dims[arrow.src]):
            spans[arrow.tgt].append([mat[row][col] for row in range(rep.dims[arrow.tgt])])
    return [
        linalg.column_space_basis(spans[v], rep.dims[v])
        for v in range(rep.spec.vertex_count)
    ]


def top_dims(rep: Representation) -> tuple[int, ...]:
    rad = radical_bases(rep)
    return tuple(rep.dims[v] - len(rad[v]) for v in range(rep.spec.vertex_count))


@dataclass(frozen=True)
class Presentation:
    """A projective cover P0 ->> M with its kernel subrepresentation."""

    cover_source: Representation
    cover_blocks: tuple[Matrix, ...]  # per vertex, dims_M[v] x dims_P0[v]
    kernel: Representation


def projective_cover_presentation(basis: PathBasis, rep: Representation) -> Presentation:
    spec = rep.spec
    rad = radical_bases(rep)
    generators: list[Element] = []
    for v in range(spec.vertex_count):
        free, _ = _reducer(rad[v], rep.dims[v])
        for fpos in free:
            coords = tuple(ONE if i == fpos else ZERO for i in range(rep.dims[v]))
            generators.append((v, coords))

    summands = [projective(basis, v) for v, _ in generators]
    p0 = zero_rep(spec)
    for s in summands:
        p0 = direct_sum(p0, s)

    # cover columns: basis path p of the (v, g) summand maps to p acting on g
    cols_per_vertex: list[list[list[Fraction]]] = [
        [] for _ in range(spec.vertex_count)
    ]
    for (v, g) in generators:
        for u in range(spec.vertex_count):
            for path in basis.paths_between(v, u):
                mat = [list(r) for r in path_matrix(rep, path, v)]
                cols_per_vertex[u].append(linalg.mat_vec(mat, list(g)))
    blocks = []
    for u in range(spec.vertex_count):
        cols = cols_per_vertex[u]
        block = [
            [cols[j][i] for j in range(len(cols))] for i in range(rep.dims[u])
        ]
        if linalg.rank(block, len(cols)) != rep.dims[u]:
            raise ConsistencyError("projective cover fails to be surjective")
        blocks.append(_freeze(block))

    kernel_bases: Bases = [
        linalg.nullspace([list(r) for r in blocks[u]], p0.dims[u])
        for u in range(spec.vertex_count)
    ]
    kernel, _ = sub_representation(p0, kernel_bases)
    return Presentation(cover_source=p0, cover_blocks=tuple(blocks), kernel=kernel)


def ext_dim(basis: PathBasis, m: Representation, n: Representation) -> int:
    """dim Ext^1(M, N) as the cokernel of Hom(P0, N) -> Hom(K, N) for the
    projective-cover presentation 0 -> K -> P0 -> M -> 0."""
    if m.spec != n.spec:
        raise TypeMismatchError("modules live over different algebras")
    if m.total_dim == 0:
        return 0
    pres = projective_cover_presentation(basis, m)
    value = (
        hom_dim(pres.kernel, n)
        - hom_dim(pres.cover_source, n)
        + hom_dim(m, n)
    )
    if value < 0:
        raise ConsistencyError("negative Ext dimension; presentation is broken")
    return value


def is_projective(basis: PathBasis, rep: Representation) -> bool:
    """A module is projective iff its projective cover has the same dimension
    vector (the cover is then an isomorphism)."""
    tops = top_dims(rep)
    expected = [0] * rep.spec.vertex_count
    for v, count in enumerate(tops):
        if count:
            pv = projective(basis, v)
            for u in range(rep.spec.vertex_count):
                expected[u] += count * pv.dims[u]
    return tuple(expected) == rep.dims


def pd_at_most_1(basis: PathBasis, rep: Representation) -> bool:
    if rep.total_dim == 0:
        return True
    pres = projective_cover_presentation(basis, rep)
    return is_projective(basis, pres.kernel)


# ---------------------------------------------------------------------------
# Random fixtures: quotients of projective sums (always valid)
# ---------------------------------------------------------------------------


def random_representation(
    basis: PathBasis,
    rng,
    max_summands: int = 2,
    max_generators: int = 3,
) -> Representation:
    spec = basis.spec
    count = rng.randint(1, max_summands)
    p = zero_rep(spec)
    for _ in range(count):
        p = direct_sum(p, projective(basis, rng.randrange(spec.vertex_count)))
    gens: list[Element] = []
    for _ in range(rng.randint(0, max_generators)):
        candidates = [v for v in range(spec.vertex_count) if p.dims[v] > 0]
        if not candidates:
            break
        v = rng.choice(candidates)
        coords = tuple(Fraction(rng.randint(-2, 2)) for _ in range(p.dims[v]))
        gens.append((v, coords))
    quot, _ = quotient_by_elements(p, gens)
    return quot


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------


def rep_to_json(rep: Representation) -> dict:
    return {
        "dims": list(rep.dims),
        "arrows": {
            label: [[frac_to_str(x) for x in row] for row in mat]
            for label, mat in sorted(rep.maps.items())
        },
    }


def rep_from_json(spec: AlgebraSpec, data: dict) -> Representation:
    try:
        dims = [int(d) for d in data["dims"]]
        maps = {
            str(label): [[parse_frac(x) for x in row] for row in mat]
            for label, mat in data.get("arrows", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"malformed representation: {exc}") from exc
    return make_representation(spec, dims, maps)
