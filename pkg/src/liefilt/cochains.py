"""Graded cochain complexes, filtered hom-spaces, and the maps between them.

Cochains C^k(m, gr(g)) are alternating k-linear maps from the negative part
of a graded algebra into the whole algebra; only strictly increasing basis
tuples are stored, ordered lexicographically, which fixes every matrix
representation used downstream.

Filtered hom-spaces L(Lambda^k(g/p), g) use the same tuple indexing over the
adapted basis, so the degree-l level of a filtered hom and the degree-l
cochain space share coordinates; passing to the associated graded is a
coordinate projection.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

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
from .liealg import FilteredLieAlgebra, GradedLieAlgebra, LieAlgebra, associated_graded

ONE = Fraction(1)


def _insert_sorted(b: int, rest: tuple[int, ...]) -> Optional[tuple[int, tuple[int, ...]]]:
    """Sort b into an increasing tuple; None if it collides. Returns (sign, tuple)."""
    if b in rest:
        return None
    pos = 0
    while pos < len(rest) and rest[pos] < b:
        pos += 1
    sign = 1 if pos % 2 == 0 else -1
    return sign, rest[:pos] + (b,) + rest[pos:]


def _sort_tuple(t: Sequence[int]) -> Optional[tuple[int, tuple[int, ...]]]:
    """Sort an arbitrary index tuple, tracking the permutation sign."""
    out: tuple[int, ...] = ()
    sign = 1
    for b in t:
        if b in out:
            return None
        pos = 0
        while pos < len(out) and out[pos] < b:
            pos += 1
        # b enters from the right; it crosses len(out) - pos entries.
        if (len(out) - pos) % 2 == 1:
            sign = -sign
        out = out[:pos] + (b,) + out[pos:]
    return sign, out


class ComplexSpace:
    """Coordinate bookkeeping for alternating maps source^k -> algebra."""

    def __init__(self, alg: LieAlgebra, source: Sequence[int], k: int,
                 weights: Optional[Sequence[int]] = None):
        self.alg = alg
        self.k = k
        self.source = tuple(source)
        self.tuples = list(itertools.combinations(self.source, k))
        self.tuple_pos = {T: i for i, T in enumerate(self.tuples)}
        self.dim = len(self.tuples) * alg.dim
        self.weights = tuple(weights) if weights is not None else None

    def coord(self, T: tuple[int, ...], t: int) -> int:
        return self.tuple_pos[T] * self.alg.dim + t

    def coord_degree(self, idx: int) -> int:
        """Exact homogeneity degree of a coordinate: value degree minus the
        summed entry degrees."""
        if self.weights is None:
            raise ValueError("no grading data on this space")
        T = self.tuples[idx // self.alg.dim]
        t = idx % self.alg.dim
        return self.weights[t] - sum(self.weights[a] for a in T)

    def degree_values(self) -> list[int]:
        return sorted({self.coord_degree(i) for i in range(self.dim)})

    def coords_of_degree(self, ell: int) -> list[int]:
        return [i for i in range(self.dim) if self.coord_degree(i) == ell]

    def coords_of_degree_ge(self, ell: int) -> list[int]:
        return [i for i in range(self.dim) if self.coord_degree(i) >= ell]

    def level_subspace(self, ell: int) -> Subspace:
        cols = [unit_vec(self.dim, i) for i in self.coords_of_degree_ge(ell)]
        return Subspace(Matrix.from_cols(cols, ambient=self.dim), check=False)

    def degree_subspace(self, ell: int) -> Subspace:
        cols = [unit_vec(self.dim, i) for i in self.coords_of_degree(ell)]
        return Subspace(Matrix.from_cols(cols, ambient=self.dim), check=False)


def _differential_matrix(alg: LieAlgebra, source: Sequence[int], k: int) -> Matrix:
    """Matrix of the Lie algebra cohomology differential on alternating
    k-maps source^k -> alg (columns) into (k+1)-maps (rows)."""
    dom = ComplexSpace(alg, source, k)
    cod = ComplexSpace(alg, source, k + 1)
    n = alg.dim
    cols: dict[int, dict[int, Fraction]] = {}

    def add(col: int, row: int, c: Fraction):
        if c:
            d = cols.setdefault(col, {})
            d[row] = d.get(row, ZERO) + c

    source_set = set(source)
    for T in cod.tuples:
        base_row = cod.tuple_pos[T] * n
        for i, x in enumerate(T):
            rest = T[:i] + T[i + 1:]
            sign = ONE if i % 2 == 0 else -ONE
            if rest in dom.tuple_pos:
                col_base = dom.tuple_pos[rest] * n
                ad = alg.ad(x)
                for t in range(n):
                    for r, c in enumerate(ad.col(t)):
                        if c:
                            add(col_base + t, base_row + r, sign * c)
        for i in range(len(T)):
            for j in range(i + 1, len(T)):
                rest = tuple(a for p, a in enumerate(T) if p not in (i, j))
                sign = ONE if (i + j) % 2 == 0 else -ONE
                for b, c in alg.bracket_basis(T[i], T[j]).items():
                    if b not in source_set:
                        raise ValueError("source span is not closed under the bracket")
                    step = _insert_sorted(b, rest)
                    if step is None:
                        continue
                    s, full = step
                    col_base = dom.tuple_pos[full] * n
                    for t in range(n):
                        add(col_base + t, base_row + t, sign * s * c)
    data = [[ZERO] * dom.dim for _ in range(cod.dim)]
    for col, entries in cols.items():
        for row, c in entries.items():
            data[row][col] = c
    return Matrix(data, cols=dom.dim)


# -- graded cochains -----------------------------------------------------------


def _grading_cache(g: GradedLieAlgebra) -> dict:
    cache = getattr(g, "_cochain_cache", None)
    if cache is None:
        cache = {}
        setattr(g, "_cochain_cache", cache)
    return cache


def cochain_space(g: GradedLieAlgebra, k: int) -> ComplexSpace:
    cache = _grading_cache(g)
    key = ("space", k)
    if key not in cache:
        cache[key] = ComplexSpace(g.alg, g.negative_indices(), k, weights=g.degrees)
    return cache[key]


def differential_matrix(g: GradedLieAlgebra, k: int) -> Matrix:
    """Matrix of the cochain differential C^k(m, gr) -> C^(k+1)(m, gr)."""
    cache = _grading_cache(g)
    key = ("d", k)
    if key not in cache:
        cache[key] = _differential_matrix(g.alg, g.negative_indices(), k)
    return cache[key]


class Cochain:
    """Alternating k-linear map from the negative part of `target` into
    `target`, stored on strictly increasing basis tuples."""

    def __init__(self, target: GradedLieAlgebra, k: int,
                 coeffs: Optional[Mapping[tuple[int, ...], Vec]] = None):
        self.target = target
        self.k = k
        self.coeffs: dict[tuple[int, ...], Vec] = {}
        if coeffs:
            for T, v in coeffs.items():
                v = vec(v)
                if len(v) != target.dim:
                    raise ValueError("value dimension mismatch")
                if list(T) != sorted(T) or len(set(T)) != len(T):
                    raise ValueError("tuples must be strictly increasing")
                if not is_zero_vec(v):
                    self.coeffs[tuple(T)] = v

    def is_zero(self) -> bool:
        return not self.coeffs

    def value(self, T: tuple[int, ...]) -> Vec:
        return self.coeffs.get(tuple(T), zero_vec(self.target.dim))

    def add(self, other: "Cochain") -> "Cochain":
        out = dict(self.coeffs)
        for T, v in other.coeffs.items():
            out[T] = vec_add(out.get(T, zero_vec(len(v))), v)
        return Cochain(self.target, self.k, out)

    def scale(self, c: Fraction) -> "Cochain":
        return Cochain(self.target, self.k, {T: vec_scale(c, v) for T, v in self.coeffs.items()})

    def sub(self, other: "Cochain") -> "Cochain":
        return self.add(other.scale(Fraction(-1)))

    def to_coords(self) -> Vec:
        space = cochain_space(self.target, self.k)
        out = [ZERO] * space.dim
        for T, v in self.coeffs.items():
            base = space.tuple_pos[T] * self.target.dim
            for t, c in enumerate(v):
                out[base + t] = c
        return tuple(out)

    @staticmethod
    def from_coords(target: GradedLieAlgebra, k: int, coords: Vec) -> "Cochain":
        space = cochain_space(target, k)
        n = target.dim
        coeffs = {}
        for i, T in enumerate(space.tuples):
            v = coords[i * n:(i + 1) * n]
            if not is_zero_vec(v):
                coeffs[T] = v
        return Cochain(target, k, coeffs)

    def evaluate(self, vectors: Sequence[Mapping[int, Fraction]]) -> Vec:
        """Multilinear alternating evaluation on source coefficient dicts."""
        if len(vectors) != self.k:
            raise ValueError("arity mismatch")
        total = zero_vec(self.target.dim)
        supports = [sorted(v.keys()) for v in vectors]
        for combo in itertools.product(*supports):
            step = _sort_tuple(combo)
            if step is None:
                continue
            sign, T = step
            base = self.coeffs.get(T)
            if base is None:
                continue
            c = Fraction(sign)
            for v, b in zip(vectors, combo):
                c *= v[b]
            if c:
                total = vec_add(total, vec_scale(c, base))
        return total

    def __repr__(self) -> str:
        return f"Cochain(k={self.k}, nonzero_tuples={len(self.coeffs)})"


def differential(phi: Cochain) -> Cochain:
    """The cochain differential: alternating sum of bracket actions plus
    bracket contractions, one arity up."""
    g = phi.target
    alg = g.alg
    neg = set(g.negative_indices())
    space_out = cochain_space(g, phi.k + 1)
    out: dict[tuple[int, ...], Vec] = {}
    for T in space_out.tuples:
        total = zero_vec(g.dim)
        for i, x in enumerate(T):
            rest = T[:i] + T[i + 1:]
            val = phi.value(rest)
            if not is_zero_vec(val):
                term = alg.bracket_basis_vec(x, val)
                total = vec_add(total, term if i % 2 == 0 else vec_scale(Fraction(-1), term))
        for i in range(len(T)):
            for j in range(i + 1, len(T)):
                rest = tuple(a for p, a in enumerate(T) if p not in (i, j))
                for b, c in alg.bracket_basis(T[i], T[j]).items():
                    if b not in neg:
                        raise ValueError("negative part is not closed under the bracket")
                    step = _insert_sorted(b, rest)
                    if step is None:
                        continue
                    s, full = step
                    val = phi.coeffs.get(full)
                    if val is None:
                        continue
                    sign = Fraction(s) * (1 if (i + j) % 2 == 0 else -1)
                    total = vec_add(total, vec_scale(sign * c, val))
        if not is_zero_vec(total):
            out[T] = total
    return Cochain(g, phi.k + 1, out)


def homogeneous_component(phi: Cochain, ell: int) -> Cochain:
    """Degree-ell part: on each tuple, the value components in the summed
    entry degree shifted by ell."""
    g = phi.target
    out = {}
    for T, v in phi.coeffs.items():
        want = sum(g.degrees[a] for a in T) + ell
        kept = tuple(c if g.degrees[t] == want else ZERO for t, c in enumerate(v))
        if not is_zero_vec(kept):
            out[T] = kept
    return Cochain(g, phi.k, out)


def homogeneity_values(phi: Cochain) -> list[int]:
    g = phi.target
    vals = set()
    for T, v in phi.coeffs.items():
        base = sum(g.degrees[a] for a in T)
        for t, c in enumerate(v):
            if c:
                vals.add(g.degrees[t] - base)
    return sorted(vals)


def cochain_space_basis(g: GradedLieAlgebra, k: int, ell: int) -> Subspace:
    """Coordinate basis of the degree-ell cochains inside the full C^k space."""
    return cochain_space(g, k).degree_subspace(ell)


def _restrict_cols(m: Matrix, cols: Sequence[int]) -> Matrix:
    return Matrix.from_cols([m.col(c) for c in cols], ambient=m.rows)


def cohomology_dim(g: GradedLieAlgebra, k: int, ell: int) -> int:
    """dim ker(d: C^k_ell -> C^(k+1)_ell) - dim im(d: C^(k-1)_ell -> C^k_ell)."""
    if k not in (0, 1, 2, 3):
        raise ValueError("cohomology is computed for arities 0..3")
    space = cochain_space(g, k)
    cols = space.coords_of_degree(ell)
    if not cols:
        return 0
    d_k = _restrict_cols(differential_matrix(g, k), cols)
    ker_dim = len(cols) - rank(d_k)
    im_dim = 0
    if k > 0:
        prev = cochain_space(g, k - 1)
        prev_cols = prev.coords_of_degree(ell)
        if prev_cols:
            im_dim = rank(_restrict_cols(differential_matrix(g, k - 1), prev_cols))
    return ker_dim - im_dim


# -- chains and the homology differential -------------------------------------


def chain_space(f: FilteredLieAlgebra, k: int) -> ComplexSpace:
    cache = getattr(f, "_chain_cache", None)
    if cache is None:
        cache = {}
        setattr(f, "_chain_cache", cache)
    key = ("space", k)
    if key not in cache:
        cache[key] = ComplexSpace(f.alg, [a for a, d in enumerate(f.filt) if d >= 1], k,
                                  weights=f.filt)
    return cache[key]


class Chain:
    """Element of Lambda^k(p_+) tensor g, on increasing tuples of the
    positive-level adapted basis."""

    def __init__(self, f: FilteredLieAlgebra, k: int,
                 coeffs: Optional[Mapping[tuple[int, ...], Vec]] = None):
        self.f = f
        self.k = k
        self.coeffs: dict[tuple[int, ...], Vec] = {}
        if coeffs:
            for T, v in coeffs.items():
                v = vec(v)
                if not is_zero_vec(v):
                    self.coeffs[tuple(T)] = v

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_coords(self) -> Vec:
        space = chain_space(self.f, self.k)
        out = [ZERO] * space.dim
        for T, v in self.coeffs.items():
            base = space.tuple_pos[T] * self.f.dim
            for t, c in enumerate(v):
                out[base + t] = c
        return tuple(out)


def homology_differential(c: Chain) -> Chain:
    """Boundary operator: contract one wedge slot into the coefficient module
    (adjoint action), plus pairwise bracket insertion; one arity down."""
    f = c.f
    alg = f.alg
    pos = set(a for a, d in enumerate(f.filt) if d >= 1)
    out: dict[tuple[int, ...], Vec] = {}

    def add(T: tuple[int, ...], v: Vec):
        if not is_zero_vec(v):
            prev = out.get(T)
            out[T] = vec_add(prev, v) if prev is not None else v

    for S, v in c.coeffs.items():
        k = len(S)
        for i in range(k):
            rest = S[:i] + S[i + 1:]
            sign = Fraction(-1) if i % 2 == 0 else ONE
            add(rest, vec_scale(sign, alg.bracket_basis_vec(S[i], v)))
        for i in range(k):
            for j in range(i + 1, k):
                rest = tuple(a for p, a in enumerate(S) if p not in (i, j))
                sign0 = 1 if (i + j) % 2 == 0 else -1
                for b, cf in alg.bracket_basis(S[i], S[j]).items():
                    if b not in pos:
                        raise ValueError("positive part is not closed under the bracket")
                    step = _insert_sorted(b, rest)
                    if step is None:
                        continue
                    s, full = step
                    add(full, vec_scale(Fraction(sign0 * s) * cf, v))
    return Chain(f, c.k - 1, out)


def homology_matrix(f: FilteredLieAlgebra, k: int) -> Matrix:
    """Matrix of the boundary operator on chain coordinates, arity k -> k-1."""
    chain_space(f, k)
    cache = getattr(f, "_chain_cache")
    key = ("delta", k)
    if key not in cache:
        dom = chain_space(f, k)
        cod = chain_space(f, k - 1)
        data = [[ZERO] * dom.dim for _ in range(cod.dim)]
        n = f.dim
        for T in dom.tuples:
            for t in range(n):
                col = dom.coord(T, t)
                image = homology_differential(Chain(f, k, {T: unit_vec(n, t)}))
                for S, v in image.coeffs.items():
                    base = cod.tuple_pos[S] * n
                    for r, cc in enumerate(v):
                        if cc:
                            data[base + r][col] = cc
        cache[key] = Matrix(data, cols=dom.dim)
    return cache[key]


# -- filtered hom-spaces -------------------------------------------------------


def hom_space(f: FilteredLieAlgebra, k: int) -> ComplexSpace:
    cache = getattr(f, "_hom_cache", None)
    if cache is None:
        cache = {}
        setattr(f, "_hom_cache", cache)
    if k not in cache:
        cache[k] = ComplexSpace(f.alg, f.negative_indices(), k, weights=f.filt)
    return cache[k]


class FilteredHom:
    """Alternating k-linear map on the quotient by the isotropy part, with
    values in the algebra; stored on increasing tuples of the negative
    adapted basis."""

    def __init__(self, f: FilteredLieAlgebra, k: int,
                 coeffs: Optional[Mapping[tuple[int, ...], Vec]] = None):
        self.f = f
        self.k = k
        self.coeffs: dict[tuple[int, ...], Vec] = {}
        if coeffs:
            for T, v in coeffs.items():
                v = vec(v)
                if not is_zero_vec(v):
                    self.coeffs[tuple(T)] = v

    def is_zero(self) -> bool:
        return not self.coeffs

    def value(self, T: tuple[int, ...]) -> Vec:
        return self.coeffs.get(tuple(T), zero_vec(self.f.dim))

    def add(self, other: "FilteredHom") -> "FilteredHom":
        out = dict(self.coeffs)
        for T, v in other.coeffs.items():
            out[T] = vec_add(out.get(T, zero_vec(len(v))), v)
        return FilteredHom(self.f, self.k, out)

    def scale(self, c: Fraction) -> "FilteredHom":
        return FilteredHom(self.f, self.k, {T: vec_scale(c, v) for T, v in self.coeffs.items()})

    def sub(self, other: "FilteredHom") -> "FilteredHom":
        return self.add(other.scale(Fraction(-1)))

    def to_coords(self) -> Vec:
        space = hom_space(self.f, self.k)
        out = [ZERO] * space.dim
        for T, v in self.coeffs.items():
            base = space.tuple_pos[T] * self.f.dim
            for t, c in enumerate(v):
                out[base + t] = c
        return tuple(out)

    @staticmethod
    def from_coords(f: FilteredLieAlgebra, k: int, coords: Vec) -> "FilteredHom":
        space = hom_space(f, k)
        n = f.dim
        coeffs = {}
        for i, T in enumerate(space.tuples):
            v = coords[i * n:(i + 1) * n]
            if not is_zero_vec(v):
                coeffs[T] = v
        return FilteredHom(f, k, coeffs)

    def homogeneity(self) -> Optional[int]:
        """Largest l such that every entry respects a degree shift >= l;
        None for the zero map."""
        if self.is_zero():
            return None
        filt = self.f.filt
        best = None
        for T, v in self.coeffs.items():
            base = sum(filt[a] for a in T)
            for t, c in enumerate(v):
                if c:
                    shift = filt[t] - base
                    best = shift if best is None else min(best, shift)
        return best

    def homogeneous_part_ge(self, ell: int) -> "FilteredHom":
        filt = self.f.filt
        out = {}
        for T, v in self.coeffs.items():
            base = sum(filt[a] for a in T)
            kept = tuple(c if filt[t] - base >= ell else ZERO for t, c in enumerate(v))
            if not is_zero_vec(kept):
                out[T] = kept
        return FilteredHom(self.f, self.k, out)

    def evaluate(self, vectors: Sequence[Mapping[int, Fraction]]) -> Vec:
        """Multilinear alternating evaluation; arguments are coefficient
        dicts over the negative adapted basis (classes mod the isotropy)."""
        if len(vectors) != self.k:
            raise ValueError("arity mismatch")
        total = zero_vec(self.f.dim)
        supports = [sorted(v.keys()) for v in vectors]
        for combo in itertools.product(*supports):
            step = _sort_tuple(combo)
            if step is None:
                continue
            sign, T = step
            base = self.coeffs.get(T)
            if base is None:
                continue
            c = Fraction(sign)
            for v, b in zip(vectors, combo):
                c *= v[b]
            if c:
                total = vec_add(total, vec_scale(c, base))
        return total

    def __repr__(self) -> str:
        return f"FilteredHom(k={self.k}, nonzero_tuples={len(self.coeffs)})"


# -- splittings and the graded-level map ---------------------------------------


class Splitting:
    """Per-level complements W_i realizing the vector-space isomorphism
    between the algebra and its associated graded."""

    def __init__(self, f: FilteredLieAlgebra, complements: Mapping[int, Subspace]):
        self.f = f
        self.complements = dict(complements)
        n = f.dim
        levels = sorted(set(f.filt))
        cols: list[Vec] = []
        self._level_of_col: list[int] = []
        for i in levels:
            w = self.complements.get(i)
            if w is None:
                raise ValueError(f"missing complement at level {i}")
            higher = f.level_subspace(i + 1)
            level = f.level_subspace(i)
            if not level.contains(w):
                raise ValueError(f"complement at level {i} is not inside the level")
            if w.dim + higher.dim != level.dim or intersect(w, higher).dim != 0:
                raise ValueError(f"complement at level {i} does not split the level")
            for j in range(w.dim):
                cols.append(w.basis.col(j))
                self._level_of_col.append(i)
        stacked = Matrix.from_cols(cols, ambient=n)
        if rank(stacked) != n:
            raise ValueError("complements do not span")
        self._stacked = stacked
        self._stacked_inv = invert(stacked)
        # Graded-level isomorphism: decompose, then take per-level classes.
        data = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            coeffs = self._stacked_inv.mul_vec(unit_vec(n, j))
            for c, x in enumerate(coeffs):
                if not x:
                    continue
                i = self._level_of_col[c]
                w_col = stacked.col(c)
                for t in range(n):
                    if f.filt[t] == i and w_col[t]:
                        data[t][j] += x * w_col[t]
        self.iso = Matrix(data, cols=n)
        self.iso_inv = invert(self.iso)

    @staticmethod
    def standard(f: FilteredLieAlgebra) -> "Splitting":
        comps = {}
        for i in sorted(set(f.filt)):
            cols = [unit_vec(f.dim, a) for a, d in enumerate(f.filt) if d == i]
            comps[i] = Subspace(Matrix.from_cols(cols, ambient=f.dim), check=False)
        return Splitting(f, comps)

    def quotient_class_in_m(self, a: int) -> dict[int, Fraction]:
        """Image of the class of adapted basis vector a (negative level) in
        the negative part of the graded algebra."""
        col = self.iso.col(a)
        return {t: c for t, c in enumerate(col) if c and self.f.filt[t] < 0}


def gr_ell(alpha: FilteredHom, ell: int, s: Splitting) -> Cochain:
    """The degree-ell cochain induced on the associated graded.

    Defined on quotient classes, so the result does not depend on the
    splitting; the splitting argument fixes representative choices for the
    inverse (lifting) direction and keeps call sites symmetric with it.
    """
    f = alpha.f
    hom = alpha.homogeneity()
    if hom is not None and hom < ell:
        raise ValueError(f"map is homogeneous of degree {hom}, below {ell}")
    gr = gr_of(f)
    out = {}
    for T, v in alpha.coeffs.items():
        want = sum(f.filt[a] for a in T) + ell
        kept = tuple(c if f.filt[t] == want else ZERO for t, c in enumerate(v))
        if not is_zero_vec(kept):
            out[T] = kept
    return Cochain(gr, alpha.k, out)


def gr_of(f: FilteredLieAlgebra) -> GradedLieAlgebra:
    cached = getattr(f, "_gr", None)
    if cached is None:
        cached = associated_graded(f)
        setattr(f, "_gr", cached)
    return cached


def lift_cochain(beta: Cochain, f: FilteredLieAlgebra, s: Splitting) -> FilteredHom:
    """A filtered hom inducing beta on the graded level, built through the
    splitting isomorphism on both sides."""
    out = {}
    n = f.dim
    for T in hom_space(f, beta.k).tuples:
        args = [s.quotient_class_in_m(a) for a in T]
        val = beta.evaluate(args)
        if not is_zero_vec(val):
            out[T] = s.iso_inv.mul_vec(val)
    return FilteredHom(f, beta.k, out)


# -- filtration-compatible maps between graded coordinate spaces ---------------


def check_filtration_compatible(phi: Matrix, dom: ComplexSpace, cod: ComplexSpace) -> bool:
    """phi maps each level of dom into the same level of cod."""
    for j in range(dom.dim):
        d = dom.coord_degree(j)
        col = phi.col(j)
        for r, c in enumerate(col):
            if c and cod.coord_degree(r) < d:
                return False
    return True


def check_image_homogeneous(phi: Matrix, dom, cod) -> bool:
    """Every image vector at level i has a preimage at level i."""
    if not check_filtration_compatible(phi, dom, cod):
        raise ValueError("map is not filtration compatible")
    im = image_basis(phi)
    levels = sorted(set(dom.degree_values()) | set(cod.degree_values()))
    for i in levels:
        lhs = intersect(im, cod.level_subspace(i))
        rhs_basis = phi * dom.level_subspace(i).basis
        rhs = image_basis(rhs_basis)
        if not (lhs.dim == rhs.dim and lhs.contains(rhs)):
            return False
    return True


def gr0_blocks(phi: Matrix, dom: ComplexSpace, cod: ComplexSpace) -> dict[int, tuple[Matrix, list[int], list[int]]]:
    """Per-degree blocks of the induced graded map.

    Returns degree -> (block, dom coordinate list, cod coordinate list); the
    block maps exact-degree dom coordinates to exact-degree cod coordinates.
    """
    out = {}
    degrees = sorted(set(dom.degree_values()) | set(cod.degree_values()))
    for i in degrees:
        dcols = dom.coords_of_degree(i)
        crows = cod.coords_of_degree(i)
        block = Matrix([[phi.data[r][c] for c in dcols] for r in crows], cols=len(dcols))
        out[i] = (block, dcols, crows)
    return out
