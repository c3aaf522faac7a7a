"""Tanaka prolongation of a graded nilpotent algebra with a chosen
degree-zero derivation subalgebra, and the full-prolongation tests.

Levels are added degree by degree: the next component consists of the
degree-raising linear maps from the negative part into everything built so
far that satisfy the derivation identity.  Elements of positive levels
bracket with the negative part by evaluation, and with each other through
the recursion [u, v](x) = [u(x), v] + [u, v(x)], resolved bottom-up in
total degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactla import (
    Matrix,
    Subspace,
    Vec,
    ZERO,
    image_basis,
    is_zero_vec,
    kernel_basis,
    solve_preimage,
    unit_vec,
    vec,
    vec_add,
    vec_scale,
    zero_vec,
)
from .liealg import (
    FilteredLieAlgebra,
    GradedLieAlgebra,
    LieAlgebra,
    check_graded,
    check_jacobi,
)
from .cochains import cohomology_dim, gr_of

ONE = Fraction(1)


@dataclass
class ProlongationResult:
    """Outcome of the prolongation recursion.

    components holds (degree, basis of degree-d maps) pairs, each map
    flattened row-major over (coordinates at construction time) x (negative
    basis); stabilized_at is the top nonzero degree once the recursion is
    known to have stopped, or None when the cap was exhausted first.
    """

    components: list[tuple[int, Subspace]]
    stabilized_at: Optional[int]
    total: GradedLieAlgebra
    truncated: bool = False

    @property
    def total_dim(self) -> int:
        return self.total.dim

    def component_dims(self) -> dict[int, int]:
        return {d: s.dim for d, s in self.components}


@dataclass
class FiniteTypeResult:
    kind: str  # "FINITE" or "UNKNOWN_AT"
    value: int

    def __repr__(self) -> str:
        return f"{self.kind}({self.value})"


def _is_fundamental(m: GradedLieAlgebra) -> bool:
    """True when the degree -1 part generates."""
    depth = m.depth
    if depth <= 1:
        return True
    for d in range(-2, -depth - 1, -1):
        upper = m.indices_of_degree(d + 1)
        ones = m.indices_of_degree(-1)
        target = m.indices_of_degree(d)
        cols = []
        for a in upper:
            for b in ones:
                w = m.alg.bracket_basis(a, b)
                cols.append(vec(w.get(t, ZERO) for t in target))
        if not cols:
            return False
        if image_basis(Matrix.from_cols(cols, ambient=len(target))).dim < len(target):
            return False
    return True


def _check_derivation_subalgebra(m: GradedLieAlgebra, g0: Subspace) -> list[Matrix]:
    nm = m.dim
    if g0.ambient_dim != nm * nm:
        raise ValueError("derivation subspace has the wrong ambient dimension")
    mats = []
    for t in range(g0.dim):
        flat = g0.basis.col(t)
        mat = Matrix([[flat[r * nm + c] for c in range(nm)] for r in range(nm)])
        for r in range(nm):
            for c in range(nm):
                if mat.data[r][c] and m.degrees[r] != m.degrees[c]:
                    raise ValueError("derivation subspace is not of degree zero")
        for i in range(nm):
            for j in range(i + 1, nm):
                lhs = zero_vec(nm)
                for k, cf in m.alg.bracket_basis(i, j).items():
                    lhs = vec_add(lhs, vec_scale(cf, mat.col(k)))
                rhs = m.alg.bracket(mat.col(i), unit_vec(nm, j))
                rhs = vec_add(rhs, m.alg.bracket(unit_vec(nm, i), mat.col(j)))
                if lhs != rhs:
                    raise ValueError("derivation subspace entries violate the derivation identity")
        mats.append(mat)
    for s in range(len(mats)):
        for t in range(s + 1, len(mats)):
            comm = mats[s] * mats[t] - mats[t] * mats[s]
            flat = vec(comm.data[r][c] for r in range(nm) for c in range(nm))
            if solve_preimage(g0.basis, flat) is None:
                raise ValueError("derivation subspace is not closed under the commutator")
    return mats


def default_cap(m: GradedLieAlgebra) -> int:
    return 2 * (m.depth + m.dim)


def tanaka_prolongation(m: GradedLieAlgebra, g0: Subspace, cap: Optional[int] = None) -> ProlongationResult:
    """Prolong (m, g0) upward until the components vanish or `cap` levels
    have been built.

    For fundamental m one zero component stops the recursion; otherwise a
    run of depth-many zero components is required (a map of higher degree
    sends every negative piece into one of the zero levels, so everything
    above vanishes as well).
    """
    if cap is None:
        cap = default_cap(m)
    nm = m.dim
    mats = _check_derivation_subalgebra(m, g0)
    fundamental = _is_fundamental(m)
    needed_zeros = 1 if fundamental else max(1, m.depth)

    degrees: list[int] = list(m.degrees) + [0] * g0.dim
    # actions[b] for global nonneg basis index b: map matrix (rows = global
    # coords at construction time, cols = m basis).
    actions: dict[int, Matrix] = {}
    for t, mat in enumerate(mats):
        actions[nm + t] = mat
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), terms in m.alg._table.items():
        table[(i, j)] = dict(terms)
    for t, mat in enumerate(mats):
        for x in range(nm):
            col = mat.col(x)
            entries = {r: -c for r, c in enumerate(col) if c}
            if entries:
                table[(x, nm + t)] = entries
    for s in range(g0.dim):
        for t in range(s + 1, g0.dim):
            comm = mats[s] * mats[t] - mats[t] * mats[s]
            flat = vec(comm.data[r][c] for r in range(nm) for c in range(nm))
            sol = solve_preimage(g0.basis, flat)
            assert sol is not None
            entries = {nm + u: c for u, c in enumerate(sol) if c}
            if entries:
                table[(nm + s, nm + t)] = entries

    level_slices: dict[int, list[int]] = {0: list(range(nm, nm + g0.dim))}

    def bracket_basis(p: int, q: int) -> dict[int, Fraction]:
        if p == q:
            return {}
        if p < q:
            return table.get((p, q), {})
        return {k: -c for k, c in table.get((q, p), {}).items()}

    def bracket_vec_basis(w: Vec, q: int) -> Vec:
        """[w, e_q] for a coordinate vector w (possibly shorter than the
        current total dimension)."""
        out = [ZERO] * len(degrees)
        for p, c in enumerate(w):
            if c:
                for k, s in bracket_basis(p, q).items():
                    out[k] += c * s
        return tuple(out)

    components: list[tuple[int, Subspace]] = []
    zero_run = 0
    stabilized: Optional[int] = None
    top_nonzero = 0
    level = 0
    while level < cap:
        level += 1
        big_n = len(degrees)
        allowed = [(r, x) for x in range(nm) for r in range(big_n)
                   if degrees[r] == m.degrees[x] + level]
        pos = {rx: t for t, rx in enumerate(allowed)}
        rows: list[list[Fraction]] = []
        for i in range(nm):
            for j in range(i + 1, nm):
                row_for: dict[int, dict[int, Fraction]] = {}

                def add(out_coord: int, unk: int, c: Fraction):
                    d = row_for.setdefault(out_coord, {})
                    d[unk] = d.get(unk, ZERO) + c

                for k, cf in m.alg.bracket_basis(i, j).items():
                    for r in range(big_n):
                        t = pos.get((r, k))
                        if t is not None:
                            add(r, t, cf)
                for r in range(big_n):
                    t = pos.get((r, i))
                    if t is not None:
                        for s, cf in bracket_basis(r, j).items():
                            add(s, t, -cf)
                    t = pos.get((r, j))
                    if t is not None:
                        for s, cf in bracket_basis(i, r).items():
                            add(s, t, -cf)
                for out_coord in sorted(row_for):
                    entries = row_for[out_coord]
                    if any(c != 0 for c in entries.values()):
                        rows.append([entries.get(t, ZERO) for t in range(len(allowed))])
        if allowed:
            system = Matrix(rows, cols=len(allowed)) if rows else Matrix.zero(0, len(allowed))
            ker = kernel_basis(system)
        else:
            ker = Subspace.zero(0)
        comp_cols = []
        for t in range(ker.dim):
            coeffs = ker.basis.col(t)
            flat = [ZERO] * (big_n * nm)
            for u, (r, x) in enumerate(allowed):
                flat[r * nm + x] = coeffs[u]
            comp_cols.append(tuple(flat))
        comp = Subspace(Matrix.from_cols(comp_cols, ambient=big_n * nm), check=False)
        components.append((level, comp))

        if comp.dim > 0:
            zero_run = 0
            top_nonzero = level
            new_indices = list(range(len(degrees), len(degrees) + comp.dim))
            level_slices[level] = new_indices
            maps = []
            for t in range(comp.dim):
                flat = comp.basis.col(t)
                maps.append(Matrix([[flat[r * nm + x] for x in range(nm)] for r in range(big_n)]))
            degrees.extend([level] * comp.dim)
            for t, mat in enumerate(maps):
                b = new_indices[t]
                actions[b] = mat
                for x in range(nm):
                    col = mat.col(x)
                    entries = {r: -c for r, c in enumerate(col) if c}
                    if entries:
                        table[(x, b)] = entries
        # Pairwise brackets with total degree equal to `level`; at vanishing
        # levels these must be zero maps, which is asserted.
        for i in sorted(level_slices):
            j = level - i
            if j < i or j not in level_slices or j < 1:
                continue
            for p in level_slices[i]:
                for q in level_slices[j]:
                    if p >= q:
                        continue
                    result_cols = []
                    for x in range(nm):
                        ux = actions[p].col(x)
                        vx = actions[q].col(x)
                        term1 = bracket_vec_basis(ux, q)
                        term2 = tuple(-c for c in bracket_vec_basis(vx, p))
                        result_cols.append(vec_add(term1, term2))
                    # Express the bracket map in the just-built component.
                    target = level_slices.get(level, [])
                    if not target:
                        if any(not is_zero_vec(c) for c in result_cols):
                            raise AssertionError("bracket escaped a vanishing level")
                        continue
                    stacked = []
                    for b in target:
                        mat = actions[b]
                        stacked.append(vec(mat.data[r][x] if r < mat.rows else ZERO
                                           for x in range(nm) for r in range(len(degrees))))
                    rhs = vec(result_cols[x][r] for x in range(nm) for r in range(len(degrees)))
                    sol = solve_preimage(Matrix.from_cols(stacked, ambient=nm * len(degrees)), rhs)
                    if sol is None:
                        raise AssertionError("bracket of prolongation elements left the prolongation")
                    entries = {target[u]: c for u, c in enumerate(sol) if c}
                    if entries:
                        table[(p, q)] = entries

        if comp.dim == 0:
            zero_run += 1
            if zero_run >= needed_zeros:
                stabilized = top_nonzero
                break

    truncated = stabilized is None
    labels = list(m.alg.labels) + [f"D{t+1}" for t in range(g0.dim)]
    for lvl in sorted(level_slices):
        if lvl == 0:
            continue
        for u, b in enumerate(level_slices[lvl]):
            labels.append(f"p{lvl}_{u+1}")
    total_alg = LieAlgebra(labels, table)
    total = GradedLieAlgebra(total_alg, degrees)
    result = ProlongationResult(components, stabilized, total, truncated)
    return result


def is_finite_type(m: GradedLieAlgebra, g0: Subspace, cap: Optional[int] = None) -> FiniteTypeResult:
    """FINITE(top degree) once a sufficient run of zero components appears
    within the cap; otherwise UNKNOWN_AT(cap).  Never claims infinite type."""
    if cap is None:
        cap = default_cap(m)
    result = tanaka_prolongation(m, g0, cap)
    if result.stabilized_at is not None:
        return FiniteTypeResult("FINITE", result.stabilized_at)
    return FiniteTypeResult("UNKNOWN_AT", cap)


def check_full_prolongation_pair(f: FilteredLieAlgebra) -> bool:
    """First cohomology of the symbol with coefficients in the associated
    graded vanishes in every positive degree."""
    gr = gr_of(f)
    for ell in range(1, f.depth + f.height + 1):
        if cohomology_dim(gr, 1, ell) != 0:
            return False
    return True


def check_full_prolongation_of_m(f: FilteredLieAlgebra) -> bool:
    """As the pair test, and additionally in degree zero (the degree-zero
    part realizes every graded derivation of the symbol)."""
    gr = gr_of(f)
    if cohomology_dim(gr, 1, 0) != 0:
        return False
    return check_full_prolongation_pair(f)
