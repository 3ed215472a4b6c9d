"""Pp formulas over the path algebra and their solution subgroups.

A formula is a matrix H whose entries are path combinations; columns carry
vertex types (one per variable, free variables first) and rows carry target
vertex types.  On a module M the formula cuts out the projection onto the
free coordinates of the kernel of the induced block matrix:

    phi(M) = { v : exists w, H (v, w)^T = 0 }.

Free realisations are built concretely: the presented module is the quotient
of a direct sum of projectives (one per variable) by the submodule generated
by the row elements of H, with the images of the free generators marked.
The action convention (paths push column variables into row slots) is pinned
by the solvability law: an element n lies in phi(N) exactly when some
morphism from the free realisation carries the marked element to n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import AlgebraSpec, Path, PathBasis
from .errors import ContractViolationError, SpecFormatError, TypeMismatchError
from .reps import (
    Element,
    Representation,
    direct_sum,
    path_matrix,
    projective,
    projective_generator,
    quotient_by_elements,
    sum_embed,
    zero_rep,
)
from .serialize import frac_to_str, parse_frac

AlgElement = tuple[tuple[Fraction, Path], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PpFormula:
    spec: AlgebraSpec
    free_count: int
    col_types: tuple[int, ...]
    row_types: tuple[int, ...]
    entries: tuple[tuple[AlgElement, ...], ...]  # rows x cols, () means zero

    @property
    def bound_count(self) -> int:
        return len(self.col_types) - self.free_count


def make_formula(
    spec: AlgebraSpec,
    free_count: int,
    col_types,
    row_types,
    entries,
) -> PpFormula:
    col_types = tuple(int(t) for t in col_types)
    row_types = tuple(int(t) for t in row_types)
    if not 0 <= free_count <= len(col_types):
        raise SpecFormatError("free variable count out of range")
    for t in col_types + row_types:
        if not 0 <= t < spec.vertex_count:
            raise SpecFormatError(f"vertex type {t} out of range")
    norm_rows = []
    if len(entries) != len(row_types):
        raise SpecFormatError("entry row count does not match row types")
    for r, row in enumerate(entries):
        if len(row) != len(col_types):
            raise SpecFormatError("entry column count does not match column types")
        norm_row = []
        for c, combo in enumerate(row):
            norm = []
            for coeff, path in combo:
                coeff = Fraction(coeff)
                path = tuple(path)
                src, tgt = spec.path_endpoints(path, src_hint=col_types[c])
                if src != col_types[c] or tgt != row_types[r]:
                    raise SpecFormatError(
                        f"entry ({r},{c}) path {'.'.join(path) or 'e'} does not run "
                        f"from type {col_types[c]} to type {row_types[r]}"
                    )
                if coeff != 0:
                    norm.append((coeff, path))
            norm_row.append(tuple(norm))
        norm_rows.append(tuple(norm_row))
    return PpFormula(
        spec=spec,
        free_count=free_count,
        col_types=col_types,
        row_types=row_types,
        entries=tuple(norm_rows),
    )


def tautology(spec: AlgebraSpec, t: int) -> PpFormula:
    """v = v at vertex type t: no constraints at all."""
    return make_formula(spec, 1, (t,), (), ())


def zero_formula(spec: AlgebraSpec, t: int) -> PpFormula:
    """v = 0 at vertex type t."""
    return make_formula(spec, 1, (t,), (t,), ((((ONE, ()),),),))


def arrow_divisibility(spec: AlgebraSpec, label: str) -> PpFormula:
    """exists w (v = alpha.w) for the arrow alpha."""
    arrow = spec.arrow_map().get(label)
    if arrow is None:
        raise SpecFormatError(f"unknown arrow {label!r}")
    entries = ((((ONE, ()),), ((-ONE, (label,)),)),)
    return make_formula(spec, 1, (arrow.tgt, arrow.src), (arrow.tgt,), entries)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def free_ambient_dim(phi: PpFormula, m: Representation) -> int:
    return sum(m.dims[t] for t in phi.col_types[: phi.free_count])


def _check_compatible(phi: PpFormula, m: Representation) -> None:
    if phi.spec != m.spec:
        raise TypeMismatchError("formula and module live over different algebras")


def solution_space(phi: PpFormula, m: Representation) -> list[list[Fraction]]:
    """Echelonized basis of phi(M) inside the free coordinate block."""
    _check_compatible(phi, m)
    col_dims = [m.dims[t] for t in phi.col_types]
    col_offsets = []
    total = 0
    for d in col_dims:
        col_offsets.append(total)
        total += d
    rows: list[list[Fraction]] = []
    for r, row_type in enumerate(phi.row_types):
        height = m.dims[row_type]
        if height == 0:
            continue
        block_rows = [[ZERO] * total for _ in range(height)]
        for c, combo in enumerate(phi.entries[r]):
            if not combo:
                continue
            width = col_dims[c]
            if width == 0:
                continue
            acc = [[ZERO] * width for _ in range(height)]
            for coeff, path in combo:
                pm = path_matrix(m, path, src_hint=phi.col_types[c])
                for i in range(height):
                    for j in range(width):
                        if pm[i][j]:
                            acc[i][j] += coeff * pm[i][j]
            off = col_offsets[c]
            for i in range(height):
                for j in range(width):
                    block_rows[i][off + j] = acc[i][j]
        rows.extend(block_rows)
    kernel = linalg.nullspace(rows, total)
    free_dim = free_ambient_dim(phi, m)
    projected = [vec[:free_dim] for vec in kernel]
    return linalg.column_space_basis(projected, free_dim)


def solution_dim(phi: PpFormula, m: Representation) -> int:
    return len(solution_space(phi, m))


def element_in_solution(phi: PpFormula, m: Representation, coords) -> bool:
    """Membership of a free-block coordinate vector in phi(M)."""
    basis = solution_space(phi, m)
    dim = free_ambient_dim(phi, m)
    return linalg.in_span(basis, list(coords), dim)


# ---------------------------------------------------------------------------
# Lattice operations on formulas
# ---------------------------------------------------------------------------


def _check_same_free(phi: PpFormula, psi: PpFormula) -> None:
    if phi.spec != psi.spec:
        raise TypeMismatchError("formulas live over different algebras")
    if (
        phi.free_count != psi.free_count
        or phi.col_types[: phi.free_count] != psi.col_types[: psi.free_count]
    ):
        raise TypeMismatchError("formulas have different free variable signatures")


def meet(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """phi and psi: stack both systems, sharing the free variables."""
    _check_same_free(phi, psi)
    f = phi.free_count
    col_types = (
        phi.col_types[:f] + phi.col_types[f:] + psi.col_types[f:]
    )
    zero_a = ((),) * phi.bound_count
    zero_b = ((),) * psi.bound_count
    entries = []
    for row in phi.entries:
        entries.append(row[:f] + row[f:] + zero_b)
    for row in psi.entries:
        entries.append(row[:f] + zero_a + row[f:])
    return make_formula(
        phi.spec, f, col_types, phi.row_types + psi.row_types, tuple(entries)
    )


def plus(phi: PpFormula, psi: PpFormula) -> PpFormula:
    """phi + psi: v = v' + v'' with v' constrained by phi and v'' by psi."""
    _check_same_free(phi, psi)
    f = phi.free_count
    head = phi.col_types[:f]
    col_types = head + head + head + phi.col_types[f:] + psi.col_types[f:]
    n_cols = len(col_types)
    entries = []
    row_types = []
    # v_i - v'_i - v''_i = 0
    for i, t in enumerate(head):
        row = [()] * n_cols
        row[i] = ((ONE, ()),)
        row[f + i] = ((-ONE, ()),)
        row[2 * f + i] = ((-ONE, ()),)
        entries.append(tuple(row))
        row_types.append(t)
    # phi acting on v', psi acting on v''
    for r, row in enumerate(phi.entries):
        new = [()] * n_cols
        for c in range(f):
            new[f + c] = row[c]
        for c in range(phi.bound_count):
            new[3 * f + c] = row[f + c]
        entries.append(tuple(new))
        row_types.append(phi.row_types[r])
    for r, row in enumerate(psi.entries):
        new = [()] * n_cols
        for c in range(f):
            new[2 * f + c] = row[c]
        for c in range(psi.bound_count):
            new[3 * f + phi.bound_count + c] = row[f + c]
        entries.append(tuple(new))
        row_types.append(psi.row_types[r])
    return make_formula(phi.spec, f, col_types, tuple(row_types), tuple(entries))


# ---------------------------------------------------------------------------
# Pointed modules and free realisations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointedModule:
    module: Representation
    points: tuple[Element, ...]

    @property
    def point(self) -> Element:
        if len(self.points) != 1:
            raise TypeMismatchError("module is not single-pointed")
        return self.points[0]


def free_realisation(basis: PathBasis, phi: PpFormula) -> PointedModule:
    """The module presented by H, with the free generators' images marked.

    Quotients the direct sum of one projective per variable by the submodule
    generated by the row elements of H.
    """
    spec = phi.spec
    summands = [projective(basis, t) for t in phi.col_types]
    free_mod = zero_rep(spec)
    offsets = []
    for s in summands:
        offsets.append(free_mod.dims)
        free_mod = direct_sum(free_mod, s)

    def embed(col: int, elem: Element) -> Element:
        v, coords = elem
        before = offsets[col][v]
        after = free_mod.dims[v] - before - summands[col].dims[v]
        return (v, (ZERO,) * before + tuple(coords) + (ZERO,) * after)

    relation_elements: list[Element] = []
    for r, row_type in enumerate(phi.row_types):
        acc = [ZERO] * free_mod.dims[row_type]
        nonzero = False
        for c, combo in enumerate(phi.entries[r]):
            if not combo:
                continue
            paths = basis.paths_between(phi.col_types[c], row_type)
            index = {p: k for k, p in enumerate(paths)}
            local = [ZERO] * summands[c].dims[row_type]
            for coeff, path in combo:
                for word, red_coeff in basis.reduce(path).items():
                    local[index[word]] += coeff * red_coeff
            _, coords = embed(c, (row_type, tuple(local)))
            acc = [x + y for x, y in zip(acc, coords)]
            nonzero = True
        if nonzero and any(x != 0 for x in acc):
            relation_elements.append((row_type, tuple(acc)))

    module, reducers = quotient_by_elements(free_mod, relation_elements)
    points = []
    for c in range(phi.free_count):
        t = phi.col_types[c]
        gen = embed(c, projective_generator(basis, t))
        points.append((t, tuple(reducers[t](list(gen[1])))))
    return PointedModule(module=module, points=tuple(points))


def coker_of_point(pm: PointedModule) -> Representation:
    """The quotient of the module by the submodule its points generate."""
    quot, _ = quotient_by_elements(pm.module, list(pm.points))
    return quot


def _check_matching_points(pma: PointedModule, pmb: PointedModule) -> None:
    if pma.module.spec != pmb.module.spec:
        raise TypeMismatchError("pointed modules live over different algebras")
    if len(pma.points) != len(pmb.points):
        raise TypeMismatchError("pointed modules have different point counts")
    for (v, _), (w, _) in zip(pma.points, pmb.points):
        if v != w:
            raise TypeMismatchError("points have different vertex types")


def pushout_pointed(pma: PointedModule, pmb: PointedModule) -> PointedModule:
    """Pushout of the two point maps out of the free rank-1 module; realises
    the meet when the inputs are free realisations."""
    _check_matching_points(pma, pmb)
    if len(pma.points) != 1:
        raise TypeMismatchError("pushout needs single-pointed modules")
    a, b = pma.module, pmb.module
    total = direct_sum(a, b)
    ca_elem = sum_embed(a, b, pma.points[0], 0)
    cb_elem = sum_embed(a, b, pmb.points[0], 1)
    glue = (ca_elem[0], tuple(x - y for x, y in zip(ca_elem[1], cb_elem[1])))
    module, reducers = quotient_by_elements(total, [glue])
    t = ca_elem[0]
    point = (t, tuple(reducers[t](list(ca_elem[1]))))
    return PointedModule(module=module, points=(point,))


def sum_pointed(pma: PointedModule, pmb: PointedModule) -> PointedModule:
    """(M + M', (m, m')): realises the sum of the realised formulas."""
    _check_matching_points(pma, pmb)
    a, b = pma.module, pmb.module
    total = direct_sum(a, b)
    points = []
    for pa, pb in zip(pma.points, pmb.points):
        va, coords_a = sum_embed(a, b, pa, 0)
        _, coords_b = sum_embed(a, b, pb, 1)
        points.append((va, tuple(x + y for x, y in zip(coords_a, coords_b))))
    return PointedModule(module=total, points=tuple(points))


# ---------------------------------------------------------------------------
# Pp pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PpPair:
    phi: PpFormula
    psi: PpFormula


def pair_open_on(pair: PpPair, m: Representation) -> bool:
    """True iff psi(M) is strictly smaller than phi(M); requires containment."""
    _check_same_free(pair.phi, pair.psi)
    phi_space = solution_space(pair.phi, m)
    psi_space = solution_space(pair.psi, m)
    dim = free_ambient_dim(pair.phi, m)
    if not linalg.subspace_leq(psi_space, phi_space, dim):
        raise ContractViolationError("psi(M) is not contained in phi(M)")
    return len(phi_space) > len(psi_space)


# ---------------------------------------------------------------------------
# JSON wire format (vertices 1-based on the wire)
# ---------------------------------------------------------------------------


def formula_to_json(phi: PpFormula) -> dict:
    entries = []
    for r, row in enumerate(phi.entries):
        for c, combo in enumerate(row):
            if combo:
                entries.append(
                    {
                        "row": r,
                        "col": c,
                        "terms": [
                            {"coeff": frac_to_str(coeff), "path": list(path)}
                            for coeff, path in combo
                        ],
                    }
                )
    return {
        "free": phi.free_count,
        "bound": phi.bound_count,
        "types": [t + 1 for t in phi.col_types],
        "rows": [t + 1 for t in phi.row_types],
        "entries": entries,
    }


def formula_from_json(spec: AlgebraSpec, data: dict) -> PpFormula:
    try:
        free = int(data["free"])
        col_types = [int(t) - 1 for t in data["types"]]
        if "bound" in data and int(data["bound"]) + free != len(col_types):
            raise SpecFormatError("free + bound does not match the type list")
        raw_entries = data.get("entries", [])
        if "rows" in data:
            row_types = [int(t) - 1 for t in data["rows"]]
        else:
            # derive row types from the entries' path targets
            row_count = 1 + max((int(e["row"]) for e in raw_entries), default=-1)
            derived: list[int | None] = [None] * row_count
            for e in raw_entries:
                r, c = int(e["row"]), int(e["col"])
                for term in e["terms"]:
                    path = tuple(str(l) for l in term["path"])
                    _, tgt = spec.path_endpoints(path, src_hint=col_types[c])
                    if derived[r] is None:
                        derived[r] = tgt
                    elif derived[r] != tgt:
                        raise SpecFormatError(f"row {r} mixes target types")
            if any(t is None for t in derived):
                raise SpecFormatError("row without entries needs explicit 'rows'")
            row_types = [int(t) for t in derived]
        entries = [[() for _ in col_types] for _ in row_types]
        for e in raw_entries:
            r, c = int(e["row"]), int(e["col"])
            combo = tuple(
                (parse_frac(term["coeff"]), tuple(str(l) for l in term["path"]))
                for term in e["terms"]
            )
            entries[r][c] = combo
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SpecFormatError(f"malformed pp formula: {exc}") from exc
    return make_formula(spec, free, col_types, row_types, entries)


def pointed_to_json(pm: PointedModule) -> dict:
    from .reps import rep_to_json

    return {
        "module": rep_to_json(pm.module),
        "points": [
            {"vertex": v + 1, "coords": [frac_to_str(x) for x in coords]}
            for v, coords in pm.points
        ],
    }
