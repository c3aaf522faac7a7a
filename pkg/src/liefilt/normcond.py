"""Normalization conditions, negligible submodules, and codifferentials.

Everything is verified infinitesimally: the structure-group action on the
hom-spaces is replaced by the action of the isotropy part of the algebra
(exact for connected groups; reports carry the caveat).

The two codifferential constructions are the homology transport through the
Killing pairing (semisimple case) and adjoints of the cochain differential
with respect to an invariant inner product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .exactla import (
    Matrix,
    Subspace,
    Vec,
    ZERO,
    image_basis,
    intersect,
    invert,
    is_zero_vec,
    kernel_basis,
    rank,
    solve_preimage,
    sum_spaces,
    unit_vec,
    vec,
    vec_add,
    vec_scale,
    zero_vec,
)
from .liealg import FilteredLieAlgebra, GradedLieAlgebra, LieAlgebra, killing_form
from .cochains import (
    Cochain,
    ComplexSpace,
    FilteredHom,
    Splitting,
    _differential_matrix,
    _insert_sorted,
    check_filtration_compatible,
    check_image_homogeneous,
    chain_space,
    cochain_space,
    differential_matrix,
    gr0_blocks,
    gr_ell,
    gr_of,
    homology_matrix,
    hom_space,
    lift_cochain,
)

ONE = Fraction(1)

GROUP_CAVEAT = (
    "invariance and equivariance are verified infinitesimally (adjoint action "
    "of the isotropy part); discrete structure-group data is delegated to the user"
)


# -- the isotropy action on hom-spaces -----------------------------------------


def _class_bracket(f: FilteredLieAlgebra, a_vec: Vec, x: int) -> dict[int, Fraction]:
    """[A, e_x] reduced mod the isotropy part, on the negative basis."""
    w = f.alg.bracket(a_vec, unit_vec(f.dim, x))
    return {b: c for b, c in enumerate(w) if c and f.filt[b] < 0}


def _check_isotropy(f: FilteredLieAlgebra, a_vec: Vec):
    for b, c in enumerate(a_vec):
        if c and f.filt[b] < 0:
            raise ValueError("element does not lie in the isotropy level")


def module_action(a_vec: Vec, hom: FilteredHom) -> FilteredHom:
    """Infinitesimal action on alternating maps:
    (A.f)(X...) = [A, f(X...)] - sum_i f(..., [A, X_i] mod p, ...)."""
    f = hom.f
    a_vec = vec(a_vec)
    _check_isotropy(f, a_vec)
    space = hom_space(f, hom.k)
    out: dict[tuple[int, ...], Vec] = {}
    for T in space.tuples:
        total = zero_vec(f.dim)
        base = hom.coeffs.get(T)
        if base is not None:
            total = vec_add(total, f.alg.bracket(a_vec, base))
        for i, x in enumerate(T):
            rest = T[:i] + T[i + 1:]
            for b, c in _class_bracket(f, a_vec, x).items():
                step = _insert_sorted(b, rest)
                if step is None:
                    continue
                _, full = step
                val = hom.coeffs.get(full)
                if val is None:
                    continue
                total = vec_add(total, vec_scale(-c * _slot_sign(T, i, b), val))
        if not is_zero_vec(total):
            out[T] = total
    return FilteredHom(f, hom.k, out)


def _slot_sign(T: tuple[int, ...], i: int, b: int) -> Fraction:
    """Sign of sorting (T with slot i replaced by b) back to increasing order."""
    rest = T[:i] + T[i + 1:]
    step = _insert_sorted(b, rest)
    assert step is not None
    sign, _ = step
    # _insert_sorted treats b as prepended; moving it from slot 0 to slot i
    # costs i transpositions.
    return Fraction(sign * (1 if i % 2 == 0 else -1))


def action_matrix(f: FilteredLieAlgebra, k: int, a_vec: Vec) -> Matrix:
    """Matrix of the isotropy action on hom-space coordinates."""
    a_vec = vec(a_vec)
    _check_isotropy(f, a_vec)
    space = hom_space(f, k)
    n = f.dim
    ad_a = f.alg.ad_vec(a_vec)
    data = [[ZERO] * space.dim for _ in range(space.dim)]
    for T in space.tuples:
        row_base = space.tuple_pos[T] * n
        col_base = row_base
        for t in range(n):
            for r, c in enumerate(ad_a.col(t)):
                if c:
                    data[row_base + r][col_base + t] += c
        for i, x in enumerate(T):
            rest = T[:i] + T[i + 1:]
            for b, c in _class_bracket(f, a_vec, x).items():
                step = _insert_sorted(b, rest)
                if step is None:
                    continue
                _, full = step
                sign = _slot_sign(T, i, b)
                src_base = space.tuple_pos[full] * n
                for t in range(n):
                    data[row_base + t][src_base + t] -= c * sign
    return Matrix(data, cols=space.dim)


def _invariant_under_isotropy(f: FilteredLieAlgebra, k: int, s: Subspace) -> bool:
    if s.dim == 0:
        return True
    for a in f.isotropy_indices():
        act = action_matrix(f, k, unit_vec(f.dim, a))
        moved = act * s.basis
        if rank(s.basis.hstack(moved)) != s.dim:
            return False
    return True


# -- normalization conditions ---------------------------------------------------


def _exact_degree_projection(space: ComplexSpace, basis: Matrix, ell: int) -> Subspace:
    """Images of the basis columns under the exact-degree-ell coordinate
    projection, inside the full coordinate ambient."""
    keep = set(space.coords_of_degree(ell))
    cols = []
    for j in range(basis.cols):
        col = basis.col(j)
        cols.append(tuple(c if i in keep else ZERO for i, c in enumerate(col)))
    return image_basis(Matrix.from_cols(cols, ambient=space.dim))


def _restrict_cols(m: Matrix, cols: Sequence[int]) -> Matrix:
    return Matrix.from_cols([m.col(c) for c in cols], ambient=m.rows)


def _embed_coords(coords: Sequence[int], sub: Subspace, ambient: int) -> Subspace:
    cols = []
    for j in range(sub.dim):
        col = [ZERO] * ambient
        for i, c in zip(coords, sub.basis.col(j)):
            col[i] = c
        cols.append(tuple(col))
    return Subspace(Matrix.from_cols(cols, ambient=ambient), check=False)


@dataclass
class DegreeData:
    """Per-degree split of the two-cochain space used by the solver."""

    coords: list[int]
    gr_n: Subspace
    im_partial: Subspace
    complementary: bool


class NormalizationCondition:
    """An isotropy-invariant subspace of the arity-two hom-space whose graded
    images complement the coboundaries in every positive degree."""

    def __init__(self, f: FilteredLieAlgebra, subspace: Subspace):
        self.alg = f
        self.subspace = subspace
        gr = gr_of(f)
        h2 = hom_space(f, 2)
        if subspace.ambient_dim != h2.dim:
            raise ValueError("subspace does not live in the arity-two hom-space")
        self.invariant = _invariant_under_isotropy(f, 2, subspace)
        d1 = differential_matrix(gr, 1)
        c1 = cochain_space(gr, 1)
        self.per_degree: dict[int, DegreeData] = {}
        top = 2 * f.depth + f.height
        for ell in range(1, top + 1):
            coords = h2.coords_of_degree(ell)
            level = h2.level_subspace(ell)
            n_level = intersect(subspace, level)
            gr_n = _exact_degree_projection(h2, n_level.basis, ell)
            c1_cols = c1.coords_of_degree(ell)
            im = image_basis(_restrict_cols(d1, c1_cols)) if c1_cols else Subspace.zero(h2.dim)
            comp = intersect(gr_n, im).dim == 0 and gr_n.dim + im.dim == len(coords)
            self.per_degree[ell] = DegreeData(coords, gr_n, im, comp)
        self.complementary = all(d.complementary for d in self.per_degree.values())
        self.passed = self.invariant and self.complementary

    def report(self) -> dict:
        return {
            "invariant": self.invariant,
            "per_degree": {
                ell: {
                    "complementary": d.complementary,
                    "dim_gr_N": d.gr_n.dim,
                    "dim_im_partial": d.im_partial.dim,
                    "dim_C2": len(d.coords),
                }
                for ell, d in sorted(self.per_degree.items())
            },
            "passed": self.passed,
            "caveat": GROUP_CAVEAT,
        }


def check_normalization(f: FilteredLieAlgebra, subspace: Subspace) -> dict:
    return NormalizationCondition(f, subspace).report()


@dataclass
class NegligibleSubmodule:
    subspace: Subspace
    contained: bool
    invariant: bool
    trivial_intersection: bool
    maximal: bool

    def report(self) -> dict:
        return {
            "contained": self.contained,
            "invariant": self.invariant,
            "trivial_intersection": self.trivial_intersection,
            "maximal": self.maximal,
            "caveat": GROUP_CAVEAT,
        }


def check_negligible(ntilde: Subspace, cond: NormalizationCondition) -> NegligibleSubmodule:
    """Negligible = contained, invariant, graded images meeting the cocycles
    trivially; maximal when they complement the cocycles in every degree."""
    f = cond.alg
    gr = gr_of(f)
    h2 = hom_space(f, 2)
    contained = cond.subspace.contains(ntilde)
    invariant = _invariant_under_isotropy(f, 2, ntilde)
    d2 = differential_matrix(gr, 2)
    trivial = True
    maximal = True
    top = 2 * f.depth + f.height
    for ell in range(1, top + 1):
        coords = h2.coords_of_degree(ell)
        level = h2.level_subspace(ell)
        nt_level = intersect(ntilde, level)
        gr_nt = _exact_degree_projection(h2, nt_level.basis, ell)
        if coords:
            restricted = _restrict_cols(d2, coords)
            ker_local = kernel_basis(restricted)
            ker = _embed_coords(coords, ker_local, h2.dim)
        else:
            ker = Subspace.zero(h2.dim)
        if intersect(gr_nt, ker).dim != 0:
            trivial = False
        if gr_nt.dim + ker.dim != len(coords):
            maximal = False
    return NegligibleSubmodule(ntilde, contained, invariant, trivial, trivial and maximal)


def quotient_dims(cond: NormalizationCondition, neg: NegligibleSubmodule) -> dict[int, int]:
    """Degreewise dimensions of the graded quotient of the condition by the
    negligible part."""
    if not neg.maximal:
        raise ValueError("negligible submodule must be maximal")
    f = cond.alg
    h2 = hom_space(f, 2)
    out = {}
    for ell, data in cond.per_degree.items():
        level = h2.level_subspace(ell)
        nt_level = intersect(neg.subspace, level)
        gr_nt = _exact_degree_projection(h2, nt_level.basis, ell)
        out[ell] = data.gr_n.dim - gr_nt.dim
    return out


# -- codifferentials -------------------------------------------------------------


@dataclass
class Codifferential:
    alg: FilteredLieAlgebra
    d2: Matrix  # arity two -> arity one
    d3: Matrix  # arity three -> arity two


def check_codifferential(c: Codifferential) -> dict:
    """The five conditions: isotropy equivariance, homogeneity compatibility,
    square zero, image homogeneity, and degreewise disjointness from the
    cochain differential."""
    f = c.alg
    gr = gr_of(f)
    h1, h2, h3 = hom_space(f, 1), hom_space(f, 2), hom_space(f, 3)
    report: dict = {"caveat": GROUP_CAVEAT}

    equivariant = True
    for a in f.isotropy_indices():
        a_vec = unit_vec(f.dim, a)
        act1 = action_matrix(f, 1, a_vec)
        act2 = action_matrix(f, 2, a_vec)
        act3 = action_matrix(f, 3, a_vec)
        if act1 * c.d2 != c.d2 * act2 or act2 * c.d3 != c.d3 * act3:
            equivariant = False
            break
    report["equivariant"] = equivariant

    compatible = check_filtration_compatible(c.d2, h2, h1) and check_filtration_compatible(c.d3, h3, h2)
    report["filtration_compatible"] = compatible

    report["square_zero"] = (c.d2 * c.d3).is_zero()

    image_hom = compatible and check_image_homogeneous(c.d2, h2, h1) and check_image_homogeneous(c.d3, h3, h2)
    report["image_homogeneous"] = image_hom

    disjoint = True
    detail: dict[int, bool] = {}
    if compatible:
        blocks2 = gr0_blocks(c.d2, h2, h1)
        blocks3 = gr0_blocks(c.d3, h3, h2)
        d1 = differential_matrix(gr, 1)
        d2m = differential_matrix(gr, 2)
        c1s, c2s, c3s = cochain_space(gr, 1), cochain_space(gr, 2), cochain_space(gr, 3)
        degrees = sorted(set(c2s.degree_values()) | set(c3s.degree_values()))
        for ell in degrees:
            ok = True
            c1_cols = c1s.coords_of_degree(ell)
            c2_cols = c2s.coords_of_degree(ell)
            c3_cols = c3s.coords_of_degree(ell)
            im_d1 = image_basis(_restrict_cols(d1, c1_cols)) if c1_cols else Subspace.zero(c2s.dim)
            im_d2 = image_basis(_restrict_cols(d2m, c2_cols)) if c2_cols else Subspace.zero(c3s.dim)
            ker_d1 = (_embed_coords(c1_cols, kernel_basis(_restrict_cols(d1, c1_cols)), c1s.dim)
                      if c1_cols else Subspace.zero(c1s.dim))
            ker_d2 = (_embed_coords(c2_cols, kernel_basis(_restrict_cols(d2m, c2_cols)), c2s.dim)
                      if c2_cols else Subspace.zero(c2s.dim))
            if ell in blocks2:
                block, dcols, crows = blocks2[ell]
                if dcols:
                    ker_b = _embed_coords(dcols, kernel_basis(block), c2s.dim)
                    if intersect(ker_b, im_d1).dim != 0:
                        ok = False
                if crows and dcols:
                    im_b = _embed_coords(crows, image_basis(block), c1s.dim)
                    if intersect(im_b, ker_d1).dim != 0:
                        ok = False
            if ell in blocks3:
                block, dcols, crows = blocks3[ell]
                if dcols:
                    ker_b = _embed_coords(dcols, kernel_basis(block), c3s.dim)
                    if intersect(ker_b, im_d2).dim != 0:
                        ok = False
                if crows and dcols:
                    im_b = _embed_coords(crows, image_basis(block), c2s.dim)
                    if intersect(im_b, ker_d2).dim != 0:
                        ok = False
            detail[ell] = ok
            disjoint = disjoint and ok
    else:
        disjoint = False
    report["disjoint"] = disjoint
    report["disjoint_detail"] = detail
    report["passed"] = equivariant and compatible and report["square_zero"] and image_hom and disjoint
    return report


def condition_from_codifferential(c: Codifferential) -> tuple[NormalizationCondition, NegligibleSubmodule]:
    """Kernel of the arity-two map as the normalization condition, image of
    the arity-three map as the maximal negligible submodule."""
    cond = NormalizationCondition(c.alg, kernel_basis(c.d2))
    if not cond.passed:
        raise ValueError("kernel of the codifferential is not a normalization condition")
    neg = check_negligible(image_basis(c.d3), cond)
    if not (neg.contained and neg.invariant and neg.trivial_intersection and neg.maximal):
        raise ValueError("image of the codifferential is not a maximal negligible submodule")
    return cond, neg


# -- the Kostant codifferential ---------------------------------------------------


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            term = m[0][j] * _det(minor)
            total += term if j % 2 == 0 else -term
    return total


def _compound_kron(mat: Matrix, row_tuples: Sequence[tuple[int, ...]],
                   col_tuples: Sequence[tuple[int, ...]], block: int) -> Matrix:
    """Minor matrix of `mat` over the given position tuples, tensored with an
    identity of size `block` (tuple-major coordinate layout)."""
    rows = len(row_tuples) * block
    data = [[ZERO] * (len(col_tuples) * block) for _ in range(rows)]
    for rt, rows_tuple in enumerate(row_tuples):
        for ct, cols_tuple in enumerate(col_tuples):
            minor = [[mat.data[r][c] for c in cols_tuple] for r in rows_tuple]
            d = _det(minor)
            if d:
                for t in range(block):
                    data[rt * block + t][ct * block + t] = d
    return Matrix(data, cols=len(col_tuples) * block)


def kostant_codifferential(f: FilteredLieAlgebra) -> Codifferential:
    """Transport of the homology boundary of the positive nilpotent part
    across the Killing pairing with the negative quotient."""
    alg = f.alg
    n = f.dim
    B = killing_form(alg)
    if rank(B) != n:
        raise ValueError("Killing form is degenerate; the algebra is not semisimple")
    p_idx = f.isotropy_indices()
    pos = [a for a, d in enumerate(f.filt) if d >= 1]
    neg = f.negative_indices()
    ann = kernel_basis(Matrix([B.data[c] for c in p_idx], cols=n))
    pos_space = Subspace(Matrix.from_cols([unit_vec(n, a) for a in pos], ambient=n), check=False)
    if not (ann.dim == pos_space.dim and ann.contains(pos_space)):
        raise ValueError("Killing annihilator of the isotropy does not match its positive part")
    q = len(neg)
    if len(pos) != q:
        raise ValueError("positive and negative parts have different dimensions")
    pi = Matrix([[B.data[a][b] for b in pos] for a in neg], cols=q)
    c_inv = invert(pi)

    hom_tuples = {k: [tuple(neg.index(a) for a in T) for T in hom_space(f, k).tuples] for k in (1, 2, 3)}
    chain_tuples = {k: [tuple(pos.index(a) for a in S) for S in chain_space(f, k).tuples] for k in (1, 2, 3)}

    def build(k: int) -> Matrix:
        w_k = _compound_kron(c_inv, chain_tuples[k], hom_tuples[k], n)
        w_prev_inv = _compound_kron(pi, hom_tuples[k - 1], chain_tuples[k - 1], n)
        delta = homology_matrix(f, k)
        return w_prev_inv * (delta * w_k)

    return Codifferential(f, build(2), build(3))


# -- inner products and adjoint codifferentials -----------------------------------


@dataclass
class InnerProduct:
    alg: FilteredLieAlgebra
    gram: Matrix

    def validate(self):
        g = self.gram
        n = self.alg.dim
        if g.rows != n or g.cols != n:
            raise ValueError("gram matrix has the wrong size")
        if g != g.transpose():
            raise ValueError("gram matrix is not symmetric")
        for a in range(n):
            for b in range(n):
                if g.data[a][b] and self.alg.filt[a] != self.alg.filt[b]:
                    raise ValueError("gram matrix mixes grading components")
        if not is_positive_definite(g):
            raise ValueError("gram matrix is not positive definite")

    def is_diagonal(self) -> bool:
        return all(self.gram.data[a][b] == 0
                   for a in range(self.gram.rows) for b in range(self.gram.cols) if a != b)


def is_positive_definite(g: Matrix) -> bool:
    n = g.rows
    work = [list(r) for r in g.data]
    for i in range(n):
        piv = work[i][i]
        if piv <= 0:
            return False
        for r in range(i + 1, n):
            if work[r][i]:
                fac = work[r][i] / piv
                work[r] = [x - fac * y for x, y in zip(work[r], work[i])]
    return True


def ode_inner_product(k: int, m: int) -> InnerProduct:
    """Weight-orthogonal inner product on the ODE-type algebra: transpose
    trace forms on the reductive blocks, solved adjointness weights on the
    module (raising and lowering operators are mutually adjoint)."""
    from .models import ode_algebra

    if k < 1 or m < 1:
        raise ValueError("k and m must be at least 1")
    f = ode_algebra(k, m)
    n = f.dim
    diag: list[Fraction] = [ONE, Fraction(2), ONE]
    diag.extend([ONE] * (m * m))
    binom = 1
    weights = []
    for j in range(k + 1):
        weights.append(Fraction(1, binom))
        binom = binom * (k - j) // (j + 1)
    for j in range(k + 1):
        diag.extend([weights[j]] * m)
    gram = Matrix([[diag[a] if a == b else ZERO for b in range(n)] for a in range(n)])
    ip = InnerProduct(f, gram)
    ip.validate()
    return ip


def skew_derivations(m: GradedLieAlgebra, b: Matrix) -> Subspace:
    """Degree-zero derivations whose restriction to the generating layer is
    skew for the gram b; the canonical reduction for metric symbols."""
    from .liealg import graded_derivations

    der = graded_derivations(m, 0)
    ones = m.indices_of_degree(-1)
    n1 = len(ones)
    if b.rows != n1 or b.cols != n1:
        raise ValueError("gram size does not match the generating layer")
    rows = []
    for i in range(n1):
        for j in range(n1):
            row = []
            for t in range(der.dim):
                flat = der.basis.col(t)
                block = [[flat[r * m.dim + c] for c in ones] for r in ones]
                entry = sum((block[r][i] * b.data[r][j] for r in range(n1)), ZERO)
                entry += sum((b.data[i][r] * block[r][j] for r in range(n1)), ZERO)
                row.append(entry)
            rows.append(row)
    if not rows or der.dim == 0:
        return der
    ker = kernel_basis(Matrix(rows, cols=der.dim))
    cols = [der.basis.mul_vec(ker.basis.col(j)) for j in range(ker.dim)]
    return Subspace(Matrix.from_cols(cols, ambient=der.ambient_dim), check=False)


def subriemannian_inner_product(m: GradedLieAlgebra, b: Matrix, g0: Subspace) -> InnerProduct:
    """Propagate an inner product on the generating layer through the bracket
    surjections (identifying each deeper layer with the orthocomplement of
    the kernel), and pair it with the negative trace form on the skew
    derivation algebra."""
    from .models import semidirect_derivation_extension
    from .prolong import _is_fundamental

    if not _is_fundamental(m):
        raise ValueError("symbol must be generated by its top layer")
    ones = m.indices_of_degree(-1)
    n1 = len(ones)
    if b.rows != n1 or b.cols != n1 or b != b.transpose() or not is_positive_definite(b):
        raise ValueError("need a symmetric positive definite gram on the generating layer")
    mats = []
    for t in range(g0.dim):
        flat = g0.basis.col(t)
        mat = Matrix([[flat[r * m.dim + c] for c in range(m.dim)] for r in range(m.dim)])
        block = Matrix([[mat.data[r][c] for c in ones] for r in ones], cols=n1)
        if (block.transpose() * b) + (b * block) != Matrix.zero(n1, n1):
            raise ValueError("derivation algebra is not skew on the generating layer")
        mats.append(mat)

    grams: dict[int, Matrix] = {-1: b}
    for d in range(-2, -m.depth - 1, -1):
        layer = m.indices_of_degree(d)
        nd = len(layer)
        if d == -2:
            pairs = list(itertools.combinations(range(n1), 2))
            s_cols = []
            for (i, j) in pairs:
                w = m.alg.bracket_basis(ones[i], ones[j])
                s_cols.append(vec(w.get(t, ZERO) for t in layer))
            surj = Matrix.from_cols(s_cols, ambient=nd)
            gt = Matrix([[b.data[i][k] * b.data[j][l] - b.data[i][l] * b.data[j][k]
                          for (k, l) in pairs] for (i, j) in pairs], cols=len(pairs))
        else:
            upper = m.indices_of_degree(d + 1)
            gu = grams[d + 1]
            pairs = [(i, u) for i in range(n1) for u in range(len(upper))]
            s_cols = []
            for (i, u) in pairs:
                w = m.alg.bracket_basis(ones[i], upper[u])
                s_cols.append(vec(w.get(t, ZERO) for t in layer))
            surj = Matrix.from_cols(s_cols, ambient=nd)
            gt = Matrix([[b.data[i][j] * gu.data[u][w] for (j, w) in pairs] for (i, u) in pairs],
                        cols=len(pairs))
        ker = kernel_basis(surj)
        # preimage in the orthocomplement of the kernel
        ortho_rows = (ker.basis.transpose() * gt) if ker.dim else Matrix.zero(0, surj.cols)
        stacked = Matrix(list(surj.data) + list(ortho_rows.data), cols=surj.cols)
        pre_cols = []
        for t in range(nd):
            rhs = vec([ONE if r == t else ZERO for r in range(nd)] + [ZERO] * ortho_rows.rows)
            x = solve_preimage(stacked, rhs)
            if x is None:
                raise ValueError("bracket surjection failed on a deeper layer")
            pre_cols.append(x)
        pre = Matrix.from_cols(pre_cols, ambient=surj.cols)
        grams[d] = pre.transpose() * (gt * pre)

    ext = semidirect_derivation_extension(m, g0)
    n = ext.dim
    data = [[ZERO] * n for _ in range(n)]
    for d, gd in grams.items():
        layer = m.indices_of_degree(d)
        for a, i in enumerate(layer):
            for bb, j in enumerate(layer):
                data[i][j] = gd.data[a][bb]
    for s in range(g0.dim):
        for t in range(g0.dim):
            bs = Matrix([[mats[s].data[r][c] for c in ones] for r in ones], cols=n1)
            bt = Matrix([[mats[t].data[r][c] for c in ones] for r in ones], cols=n1)
            prod = bs * bt
            data[m.dim + s][m.dim + t] = -sum((prod.data[r][r] for r in range(n1)), ZERO)
    ip = InnerProduct(ext, Matrix(data, cols=n))
    ip.validate()
    # invariance of the propagated metric under the derivation algebra
    for mat in mats:
        for d, gd in grams.items():
            layer = m.indices_of_degree(d)
            block = Matrix([[mat.data[r][c] for c in layer] for r in layer], cols=len(layer))
            if (block.transpose() * gd) + (gd * block) != Matrix.zero(len(layer), len(layer)):
                raise ValueError("propagated metric is not invariant under the derivation algebra")
    return ip


def _hom_gram_diag(f: FilteredLieAlgebra, space: ComplexSpace, gram: Matrix) -> list[Fraction]:
    """Diagonal of the induced gram on alternating maps, for diagonal input."""
    n = f.dim
    ginv = [ONE / gram.data[a][a] for a in range(n)]
    diag = []
    for T in space.tuples:
        base = ONE
        for a in T:
            base *= ginv[a]
        for t in range(n):
            diag.append(base * gram.data[t][t])
    return diag


def adjoint_codifferential(ip: InnerProduct) -> Codifferential:
    """Adjoint of the full cochain differential of the algebra acting on
    itself, restricted to the maps vanishing on the isotropy part.

    Requires the negative adapted basis to span a subalgebra; together with
    the grading-orthogonal inner product this makes the adjoint preserve the
    horizontal subspaces, which is verified entry by entry.
    """
    ip.validate()
    f = ip.alg
    alg = f.alg
    n = f.dim
    neg = f.negative_indices()
    neg_set = set(neg)
    for i in neg:
        for j in neg:
            if i < j and any(k not in neg_set for k in alg.bracket_basis(i, j)):
                raise ValueError("negative part must span a subalgebra for the adjoint construction")
    full = list(range(n))
    spaces = {k: ComplexSpace(alg, full, k, weights=f.filt) for k in (1, 2, 3)}
    homs = {k: hom_space(f, k) for k in (1, 2, 3)}

    def horizontal_coords(k: int) -> list[int]:
        out = []
        for T in homs[k].tuples:
            base = spaces[k].tuple_pos[T] * n
            out.extend(range(base, base + n))
        return out

    diagonal = ip.is_diagonal()
    grams = {}
    if not diagonal:
        ginv = invert(ip.gram)
        for k in (1, 2, 3):
            space = spaces[k]
            data = []
            for T in space.tuples:
                for t in range(n):
                    row = []
                    for T2 in space.tuples:
                        minor = [[ginv.data[a][bb] for bb in T2] for a in T]
                        d = _det(minor)
                        for t2 in range(n):
                            row.append(d * ip.gram.data[t][t2])
                    data.append(row)
            grams[k] = Matrix(data, cols=space.dim)

    def adjoint_restricted(k: int) -> Matrix:
        # adjoint of the differential arity k -> k+1, restricted to
        # horizontal coordinates on both sides
        d_full = _differential_matrix(alg, full, k)
        hor_dom = horizontal_coords(k)
        hor_cod = horizontal_coords(k + 1)
        dom_pos = {c: i for i, c in enumerate(hor_dom)}
        if diagonal:
            mk = _hom_gram_diag(f, spaces[k], ip.gram)
            mk1 = _hom_gram_diag(f, spaces[k + 1], ip.gram)
            cols = []
            for h in hor_cod:
                col = [ZERO] * len(hor_dom)
                for cfull in range(spaces[k].dim):
                    val = d_full.data[h][cfull]
                    if val:
                        entry = val * mk1[h] / mk[cfull]
                        if cfull not in dom_pos:
                            raise AssertionError("adjoint left the horizontal subspace")
                        col[dom_pos[cfull]] = entry
                cols.append(tuple(col))
            return Matrix.from_cols(cols, ambient=len(hor_dom))
        adj = invert(grams[k]) * (d_full.transpose() * grams[k + 1])
        cols = []
        for h in hor_cod:
            col_full = adj.col(h)
            col = [ZERO] * len(hor_dom)
            for cfull, val in enumerate(col_full):
                if val:
                    if cfull not in dom_pos:
                        raise AssertionError("adjoint left the horizontal subspace")
                    col[dom_pos[cfull]] = val
            cols.append(tuple(col))
        return Matrix.from_cols(cols, ambient=len(hor_dom))

    return Codifferential(f, adjoint_restricted(1), adjoint_restricted(2))


def hom_inner_product(ip: InnerProduct, k: int, x: Vec, y: Vec) -> Fraction:
    """Induced inner product of two horizontal alternating maps given in
    hom-space coordinates."""
    f = ip.alg
    n = f.dim
    space = hom_space(f, k)
    ginv = invert(ip.gram)
    total = ZERO
    for i1, T1 in enumerate(space.tuples):
        for i2, T2 in enumerate(space.tuples):
            minor = [[ginv.data[a][bb] for bb in T2] for a in T1]
            d = _det(minor)
            if not d:
                continue
            for t1 in range(n):
                xv = x[i1 * n + t1]
                if not xv:
                    continue
                for t2 in range(n):
                    yv = y[i2 * n + t2]
                    if yv and ip.gram.data[t1][t2]:
                        total += d * ip.gram.data[t1][t2] * xv * yv
    return total


def cochain_inner_product(ip: InnerProduct, k: int, x: Vec, y: Vec) -> Fraction:
    """Same gram, read on the cochain coordinates of the associated graded
    (the coordinates coincide for a grading-orthogonal metric)."""
    return hom_inner_product(ip, k, x, y)


# -- the pointwise normalization solver -------------------------------------------


@dataclass
class NormalizationRun:
    v_norm: FilteredHom
    corrections: list[tuple[int, FilteredHom]]
    steps: list[dict]


def normalize_pointwise(v: FilteredHom, cond: NormalizationCondition, s: Splitting) -> NormalizationRun:
    """Degree-by-degree split of an arity-two map into its normalized part
    and lifted coboundary corrections.

    At each degree the graded class of the residual decomposes uniquely into
    a piece from the condition and a coboundary; the first is lifted into
    the condition, the second through the splitting, and both are removed.
    """
    f = cond.alg
    if v.f is not f and not (v.f.filt == f.filt and v.f.alg._table == f.alg._table):
        raise ValueError("map and condition live on different algebras")
    if v.f is not f:
        v = FilteredHom(f, v.k, v.coeffs)
    if not cond.passed:
        raise ValueError("invalid normalization condition")
    hom = v.homogeneity()
    if hom is not None and hom < 1:
        raise ValueError("map must be homogeneous of positive degree")
    gr = gr_of(f)
    h2 = hom_space(f, 2)
    d1 = differential_matrix(gr, 1)
    c1 = cochain_space(gr, 1)
    residual = v
    v_norm = FilteredHom(f, 2)
    corrections: list[tuple[int, FilteredHom]] = []
    steps: list[dict] = []
    top = 2 * f.depth + f.height
    for ell in range(1, top + 1):
        data = cond.per_degree[ell]
        grl = gr_ell(residual, ell, s)
        w = grl.to_coords()
        if is_zero_vec(w):
            steps.append({"degree": ell, "condition_part": 0, "correction": 0})
            continue
        stacked = data.gr_n.basis.hstack(data.im_partial.basis)
        sol = solve_preimage(stacked, w)
        if sol is None:
            raise AssertionError("graded class failed to decompose")
        n_coeffs = sol[: data.gr_n.dim]
        b_coeffs = sol[data.gr_n.dim:]
        n_part = data.gr_n.basis.mul_vec(n_coeffs)
        b_part = data.im_partial.basis.mul_vec(b_coeffs)
        # lift the condition part into the condition itself
        level = h2.level_subspace(ell)
        n_level = intersect(cond.subspace, level)
        keep = set(h2.coords_of_degree(ell))
        proj_cols = []
        for j in range(n_level.dim):
            col = n_level.basis.col(j)
            proj_cols.append(tuple(c if i in keep else ZERO for i, c in enumerate(col)))
        proj = Matrix.from_cols(proj_cols, ambient=h2.dim)
        coeffs = solve_preimage(proj, n_part)
        if coeffs is None:
            raise AssertionError("condition part failed to lift")
        n_hat_coords = n_level.basis.mul_vec(coeffs)
        n_hat = FilteredHom.from_coords(f, 2, n_hat_coords)
        # lift the coboundary part through the splitting
        b_hat = lift_cochain(Cochain.from_coords(gr, 2, b_part), f, s)
        correction_entry = 0
        if not is_zero_vec(b_part):
            c1_cols = c1.coords_of_degree(ell)
            eta_local = solve_preimage(_restrict_cols(d1, c1_cols), b_part)
            if eta_local is None:
                raise AssertionError("coboundary part has no potential")
            eta_full = [ZERO] * c1.dim
            for i, cc in zip(c1_cols, eta_local):
                eta_full[i] = cc
            h_ell = lift_cochain(Cochain.from_coords(gr, 1, tuple(eta_full)), f, s)
            corrections.append((ell, h_ell))
            correction_entry = 1
        residual = residual.sub(n_hat).sub(b_hat)
        v_norm = v_norm.add(n_hat)
        steps.append({"degree": ell, "condition_part": 1 if not is_zero_vec(n_part) else 0,
                      "correction": correction_entry})
    if not residual.is_zero():
        raise AssertionError("residual survived beyond the maximal homogeneity")
    return NormalizationRun(v_norm, corrections, steps)
