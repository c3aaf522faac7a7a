"""Finite-dimensional Lie algebras presented by structure constants.

A `LieAlgebra` stores brackets [e_i, e_j] for i < j only; antisymmetry is
structural.  Gradings and filtrations are carried by an integer per basis
vector (adapted bases), which keeps the filtration components, quotients,
and the associated graded canonical and cheap.

Structure groups are never represented: every invariance condition is
checked infinitesimally through ad of the nonnegative part, which is exact
for connected groups.  Reports downstream carry a standing caveat for the
discrete part.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .exactla import (
    Matrix,
    Subspace,
    Vec,
    ZERO,
    annihilator_rows,
    frac,
    image_basis,
    intersect,
    is_zero_vec,
    kernel_basis,
    rank,
    solve_preimage,
    unit_vec,
    vec,
    vec_add,
    vec_scale,
    zero_vec,
)

BracketTable = Mapping[tuple[int, int], Mapping[int, Fraction]]


class EffectivityError(ValueError):
    """A nonzero ideal survived inside the isotropy part."""


class LieAlgebra:
    """Lie algebra on a labeled basis with exact structure constants."""

    def __init__(self, labels: Sequence[str], brackets: BracketTable):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), terms in brackets.items():
            if not 0 <= i < j < self.dim:
                raise ValueError(f"bracket key ({i},{j}) out of range or not i<j")
            cleaned = {k: frac(c) for k, c in terms.items() if frac(c) != 0}
            for k in cleaned:
                if not 0 <= k < self.dim:
                    raise ValueError(f"bracket target {k} out of range")
            if cleaned:
                table[(i, j)] = cleaned
        self._table = table
        self._ad_cache: dict[int, Matrix] = {}

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        """[e_i, e_j] as a sparse coefficient dict."""
        if i == j:
            return {}
        if i < j:
            return dict(self._table.get((i, j), {}))
        return {k: -c for k, c in self._table.get((j, i), {}).items()}

    def bracket_basis_vec(self, i: int, v: Vec) -> Vec:
        """[e_i, v] for an arbitrary vector v."""
        out = [ZERO] * self.dim
        for j, c in enumerate(v):
            if c:
                for k, s in self.bracket_basis(i, j).items():
                    out[k] += c * s
        return tuple(out)

    def bracket(self, x: Vec, y: Vec) -> Vec:
        out = [ZERO] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, s in self.bracket_basis(i, j).items():
                    out[k] += a * b * s
        return tuple(out)

    def ad(self, i: int) -> Matrix:
        """Matrix of ad(e_i) acting on coordinate columns."""
        cached = self._ad_cache.get(i)
        if cached is None:
            cols = [vec(self.bracket_basis_vec(i, unit_vec(self.dim, j))) for j in range(self.dim)]
            cached = Matrix.from_cols(cols, ambient=self.dim)
            self._ad_cache[i] = cached
        return cached

    def ad_vec(self, x: Vec) -> Matrix:
        m = Matrix.zero(self.dim, self.dim)
        for i, c in enumerate(x):
            if c:
                m = m + self.ad(i).scale(c)
        return m

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim})"


class GradedLieAlgebra:
    """A LieAlgebra with an integer degree per basis vector."""

    def __init__(self, alg: LieAlgebra, degrees: Sequence[int]):
        if len(degrees) != alg.dim:
            raise ValueError("one degree per basis vector required")
        self.alg = alg
        self.degrees = tuple(int(d) for d in degrees)

    @property
    def dim(self) -> int:
        return self.alg.dim

    def indices_of_degree(self, d: int) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    def negative_indices(self) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg < 0]

    @property
    def depth(self) -> int:
        neg = [d for d in self.degrees if d < 0]
        return -min(neg) if neg else 0

    @property
    def height(self) -> int:
        pos = [d for d in self.degrees if d > 0]
        return max(pos) if pos else 0

    def __repr__(self) -> str:
        return f"GradedLieAlgebra(dim={self.dim}, degrees={sorted(set(self.degrees))})"


class FilteredLieAlgebra:
    """A LieAlgebra with a filtration index per basis vector (adapted basis:
    the filtration component of level i is spanned by vectors of index >= i)."""

    def __init__(self, alg: LieAlgebra, filt: Sequence[int]):
        if len(filt) != alg.dim:
            raise ValueError("one filtration index per basis vector required")
        self.alg = alg
        self.filt = tuple(int(d) for d in filt)

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def depth(self) -> int:
        neg = [d for d in self.filt if d < 0]
        return -min(neg) if neg else 0

    @property
    def height(self) -> int:
        pos = [d for d in self.filt if d > 0]
        return max(pos) if pos else 0

    def level_indices(self, i: int) -> list[int]:
        """Basis positions spanning the level-i filtration component."""
        return [a for a, d in enumerate(self.filt) if d >= i]

    def level_subspace(self, i: int) -> Subspace:
        cols = [unit_vec(self.dim, a) for a in self.level_indices(i)]
        return Subspace(Matrix.from_cols(cols, ambient=self.dim), check=False)

    def negative_indices(self) -> list[int]:
        return [a for a, d in enumerate(self.filt) if d < 0]

    def isotropy_indices(self) -> list[int]:
        return [a for a, d in enumerate(self.filt) if d >= 0]

    def __repr__(self) -> str:
        return f"FilteredLieAlgebra(dim={self.dim}, levels={sorted(set(self.filt))})"


def check_jacobi(alg: LieAlgebra) -> bool:
    """Brute-force scan of the cyclic identity over basis triples i<j<k."""
    n = alg.dim
    for i in range(n):
        ei = unit_vec(n, i)
        for j in range(i + 1, n):
            ej = unit_vec(n, j)
            bij = alg.bracket_basis(i, j)
            for k in range(j + 1, n):
                total = [ZERO] * n
                for t, c in bij.items():
                    for s, d in alg.bracket_basis(t, k).items():
                        total[s] += c * d
                for t, c in alg.bracket_basis(j, k).items():
                    for s, d in alg.bracket_basis(t, i).items():
                        total[s] += c * d
                for t, c in alg.bracket_basis(k, i).items():
                    for s, d in alg.bracket_basis(t, j).items():
                        total[s] += c * d
                if any(x != 0 for x in total):
                    return False
    return True


def jacobi_witness(alg: LieAlgebra) -> Optional[tuple[int, int, int]]:
    """First basis triple violating the Jacobi identity, if any."""
    n = alg.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = [ZERO] * n
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    for t, u in alg.bracket_basis(a, b).items():
                        for s, d in alg.bracket_basis(t, c).items():
                            total[s] += u * d
                if any(x != 0 for x in total):
                    return (i, j, k)
    return None


def check_graded(g: GradedLieAlgebra) -> bool:
    """Every bracket of homogeneous basis vectors lands in the summed degree."""
    alg, deg = g.alg, g.degrees
    for (i, j), terms in alg._table.items():
        want = deg[i] + deg[j]
        if any(deg[k] != want for k in terms):
            return False
    return True


def check_filtered(f: FilteredLieAlgebra) -> bool:
    """Bracket of index-a and index-b vectors lies in the level a+b component."""
    alg, filt = f.alg, f.filt
    for (i, j), terms in alg._table.items():
        want = filt[i] + filt[j]
        if any(filt[k] < want for k in terms):
            return False
    return True


def associated_graded(f: FilteredLieAlgebra) -> GradedLieAlgebra:
    """The graded algebra on the level quotients.

    In an adapted basis the class of e_i generates the degree filt(i) piece,
    and the quotient bracket keeps exactly the homogeneous part of the
    structure constants.
    """
    if not check_filtered(f):
        raise ValueError("not a filtered Lie algebra (bracket violates levels)")
    alg, filt = f.alg, f.filt
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), terms in alg._table.items():
        want = filt[i] + filt[j]
        kept = {k: c for k, c in terms.items() if filt[k] == want}
        if kept:
            table[(i, j)] = kept
    labels = [f"gr_{filt[i]}({lbl})" for i, lbl in enumerate(alg.labels)]
    return GradedLieAlgebra(LieAlgebra(labels, table), filt)


def graded_derivations(g: GradedLieAlgebra, d: int) -> Subspace:
    """Degree-d linear maps D with D[x,y] = [Dx,y] + [x,Dy].

    Returned as a subspace of the dim x dim matrix space, flattened
    row-major.
    """
    n = g.dim
    deg = g.degrees
    # Allowed matrix entries: D maps degree a to degree a+d.
    allowed = [(r, c) for r in range(n) for c in range(n) if deg[r] == deg[c] + d]
    pos = {rc: t for t, rc in enumerate(allowed)}
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            bij = g.alg.bracket_basis(i, j)
            # Constraint rows indexed by output coordinate s.
            row_for_s: dict[int, dict[int, Fraction]] = {}

            def add(s: int, t: int, coeff: Fraction):
                row_for_s.setdefault(s, {}).setdefault(t, ZERO)
                row_for_s[s][t] += coeff

            # D([e_i, e_j]) term.
            for k, c in bij.items():
                for r in range(n):
                    t = pos.get((r, k))
                    if t is not None:
                        add(r, t, c)
            # -[D e_i, e_j] and -[e_i, D e_j] terms.
            for r in range(n):
                t = pos.get((r, i))
                if t is not None:
                    for s, c in g.alg.bracket_basis(r, j).items():
                        add(s, t, -c)
                t = pos.get((r, j))
                if t is not None:
                    for s, c in g.alg.bracket_basis(i, r).items():
                        add(s, t, -c)
            for s in sorted(row_for_s):
                entries = row_for_s[s]
                if any(c != 0 for c in entries.values()):
                    rows.append([entries.get(t, ZERO) for t in range(len(allowed))])
    if not allowed:
        return Subspace.zero(n * n)
    system = Matrix(rows, cols=len(allowed)) if rows else Matrix.zero(0, len(allowed))
    ker = kernel_basis(system)
    cols = []
    for j in range(ker.dim):
        coeffs = ker.basis.col(j)
        flat = [ZERO] * (n * n)
        for t, (r, c) in enumerate(allowed):
            flat[r * n + c] = coeffs[t]
        cols.append(tuple(flat))
    return Subspace(Matrix.from_cols(cols, ambient=n * n), check=False)


def killing_form(alg: LieAlgebra) -> Matrix:
    """B_ij = trace(ad e_i . ad e_j)."""
    n = alg.dim
    ads = [alg.ad(i) for i in range(n)]
    entries = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            t = sum((ads[i].data[r][s] * ads[j].data[s][r] for r in range(n) for s in range(n)), ZERO)
            entries[i][j] = t
            entries[j][i] = t
    return Matrix(entries, cols=n)


def _stable_subspace(alg: LieAlgebra, start: Subspace, keep) -> Subspace:
    """Shrink `start` by the linear condition `keep` until stable."""
    current = start
    while True:
        if current.dim == 0:
            return current
        nxt = keep(current)
        if nxt.dim == current.dim:
            return current
        current = nxt


def max_ideal_in(f: FilteredLieAlgebra) -> Subspace:
    """Largest ideal of g contained in the level-0 part, by iterating
    I <- {X in I : [g, X] in I} from I = g^0."""
    alg = f.alg
    n = alg.dim

    def shrink(space: Subspace) -> Subspace:
        ann = annihilator_rows(space)
        rows = []
        for b in range(n):
            prod = ann * (alg.ad(b) * space.basis)
            rows.extend(prod.data)
        if not rows:
            return space
        system = Matrix(rows, cols=space.dim)
        ker = kernel_basis(system)
        cols = [space.basis.mul_vec(ker.basis.col(j)) for j in range(ker.dim)]
        return Subspace(Matrix.from_cols(cols, ambient=n), check=False)

    return _stable_subspace(alg, f.level_subspace(0), shrink)


def _shift_condition_space(f: FilteredLieAlgebra, domain: Subspace, shift: int,
                           targets: Optional[dict[int, Subspace]] = None) -> Subspace:
    """{X in domain : [X, level i] lies in level i+shift, for all i < 0}.

    `targets` may supply non-coordinate subspaces for positive levels (used
    while a filtration is being continued).
    """
    alg, filt = f.alg, f.filt
    n = alg.dim
    rows = []
    for x in f.negative_indices():
        i = filt[x]
        level = i + shift
        if level <= -f.depth:
            continue
        if targets is not None and level > 0:
            target = targets.get(level, Subspace.zero(n))
        else:
            target = f.level_subspace(level)
        ann = annihilator_rows(target)
        if ann.rows == 0:
            continue
        cols = [alg.bracket_basis_vec(x, domain.basis.col(j)) for j in range(domain.dim)]
        bracket_mat = Matrix.from_cols(cols, ambient=n)
        rows.extend((ann * bracket_mat).data)
    if not rows:
        return domain
    ker = kernel_basis(Matrix(rows, cols=domain.dim))
    cols = [domain.basis.mul_vec(ker.basis.col(j)) for j in range(ker.dim)]
    return Subspace(Matrix.from_cols(cols, ambient=n), check=False)


def check_condition_B(f: FilteredLieAlgebra) -> bool:
    """Elements of g^0 shifting every negative level up by one are exactly g^1."""
    detected = _shift_condition_space(f, f.level_subspace(0), 1)
    return detected == f.level_subspace(1)


def remark_consistency_space(f: FilteredLieAlgebra, j: int) -> Subspace:
    """{A in g^1 : ad(A)(g^i) in g^(i+j) for all i < 0}."""
    return _shift_condition_space(f, f.level_subspace(1), j)


def normalizer(alg: LieAlgebra, s: Subspace) -> Subspace:
    """{X : [X, S] contained in S}; S must be a subalgebra."""
    n = alg.dim
    for a in range(s.dim):
        for b in range(a + 1, s.dim):
            v = alg.bracket(s.basis.col(a), s.basis.col(b))
            if not s.contains_vector(v):
                raise ValueError("given subspace is not a subalgebra")
    ann = annihilator_rows(s)
    rows = []
    for j in range(s.dim):
        adj = alg.ad_vec(s.basis.col(j))
        rows.extend((ann * adj.scale(Fraction(-1))).data)
    if not rows:
        return Subspace.full(n)
    ker = kernel_basis(Matrix(rows, cols=n))
    return Subspace(ker.basis, check=False)


def center(alg: LieAlgebra) -> Subspace:
    """{X : [X, g] = 0}."""
    n = alg.dim
    rows = []
    for b in range(n):
        rows.extend(alg.ad(b).data)
    if not rows:
        return Subspace.full(n)
    return kernel_basis(Matrix(rows, cols=n))


def change_basis(alg: LieAlgebra, new_basis: Matrix, labels: Sequence[str]) -> LieAlgebra:
    """Structure constants in the basis given by the columns of `new_basis`."""
    n = alg.dim
    if new_basis.rows != n or new_basis.cols != n or rank(new_basis) != n:
        raise ValueError("change of basis must be square and invertible")
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = alg.bracket(new_basis.col(i), new_basis.col(j))
            if is_zero_vec(v):
                continue
            coeffs = solve_preimage(new_basis, v)
            assert coeffs is not None
            terms = {k: c for k, c in enumerate(coeffs) if c}
            if terms:
                table[(i, j)] = terms
    return LieAlgebra(labels, table)


def continue_filtration(alg: LieAlgebra, nonpos: Sequence[int]) -> FilteredLieAlgebra:
    """Continue a nonpositive filtration to positive levels.

    Computes level j+1 as the elements of level j whose adjoint action
    shifts every negative level up by j+1, until the chain stabilizes.  A
    nonzero stable tail is an ideal inside the level-0 part and raises
    EffectivityError.  The result is returned on a freshly adapted basis;
    the attributes `positive_chain` and `basis_in_input` record the computed
    positive components and the basis change in input coordinates.
    """
    n = alg.dim
    nonpos = [int(x) for x in nonpos]
    if len(nonpos) != n:
        raise ValueError("one filtration index per basis vector required")
    if any(x > 0 for x in nonpos):
        raise ValueError("input indices must be nonpositive")
    base = FilteredLieAlgebra(alg, nonpos)
    # The nonpositive part must already be compatibly filtered.
    for (i, j), terms in alg._table.items():
        want = nonpos[i] + nonpos[j]
        if any(nonpos[k] < want for k in terms):
            raise ValueError("nonpositive part is not a filtration")

    chain: list[Subspace] = []  # chain[j-1] = level j, in input coordinates
    targets: dict[int, Subspace] = {}
    current = base.level_subspace(0)
    j = 0
    while True:
        j += 1
        targets_j = dict(targets)
        nxt = _shift_condition_space(base, current, j, targets=targets_j)
        if nxt.dim == current.dim and j > 1:
            if current.dim != 0:
                raise EffectivityError(
                    f"stable tail of dimension {current.dim} is an ideal inside the isotropy part"
                )
            break
        chain.append(nxt)
        targets[j] = nxt
        current = nxt
        if current.dim == 0:
            break
    while chain and chain[-1].dim == 0:
        chain.pop()
    nu = len(chain)

    # Build an adapted basis refining g^0 > g^1 > ... > g^nu.
    neg_order = [a for a in range(n) if nonpos[a] < 0]
    zero_space = base.level_subspace(0)
    from .exactla import complement as _complement

    new_cols: list[Vec] = [unit_vec(n, a) for a in neg_order]
    new_filt: list[int] = [nonpos[a] for a in neg_order]
    new_labels: list[str] = [alg.labels[a] for a in neg_order]
    label_count = 0
    prev = Subspace.zero(n)
    pieces: list[tuple[int, Vec]] = []
    for level in range(nu, -1, -1):
        space = chain[level - 1] if level >= 1 else zero_space
        comp = _complement(prev, space)
        for c in range(comp.dim):
            pieces.append((level, comp.basis.col(c)))
        prev = space
    # Keep original basis order where the vectors are (multiples of)
    # original basis vectors, for stable labels.
    for level, col in sorted(pieces, key=lambda p: (p[0],)):
        support = [a for a, x in enumerate(col) if x]
        if len(support) == 1:
            a = support[0]
            new_cols.append(unit_vec(n, a))
            new_labels.append(alg.labels[a])
        else:
            new_cols.append(col)
            new_labels.append(f"w{label_count}")
            label_count += 1
        new_filt.append(level)
    basis_mat = Matrix.from_cols(new_cols, ambient=n)
    new_alg = change_basis(alg, basis_mat, new_labels)
    result = FilteredLieAlgebra(new_alg, new_filt)
    result.positive_chain = chain  # type: ignore[attr-defined]
    result.basis_in_input = basis_mat  # type: ignore[attr-defined]
    return result


def gr0_action_on_m(f: FilteredLieAlgebra) -> tuple[GradedLieAlgebra, Subspace]:
    """The symbol algebra m together with the degree-zero part of the
    associated graded acting on it by derivations.

    Returns (m, subspace of matrices on m), the input for the prolongation.
    """
    gr = associated_graded(f)
    neg = gr.negative_indices()
    pos_of = {a: t for t, a in enumerate(neg)}
    m_alg = subalgebra_on_indices(gr.alg, neg)
    m = GradedLieAlgebra(m_alg, [gr.degrees[a] for a in neg])
    nm = len(neg)
    cols = []
    for z in gr.indices_of_degree(0):
        flat = [ZERO] * (nm * nm)
        for c, a in enumerate(neg):
            w = gr.alg.bracket_basis_vec(z, unit_vec(gr.dim, a))
            for b, x in enumerate(w):
                if x:
                    if b not in pos_of:
                        raise ValueError("degree-zero action does not preserve the negative part")
                    flat[pos_of[b] * nm + c] = x
        cols.append(tuple(flat))
    action = image_basis(Matrix.from_cols(cols, ambient=nm * nm))
    return m, action


def subalgebra_on_indices(alg: LieAlgebra, indices: Sequence[int]) -> LieAlgebra:
    """The subalgebra spanned by the given basis vectors (must be closed)."""
    pos_of = {a: t for t, a in enumerate(indices)}
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for s, i in enumerate(indices):
        for t in range(s + 1, len(indices)):
            j = indices[t]
            terms = {}
            for k, c in alg.bracket_basis(i, j).items():
                if k not in pos_of:
                    raise ValueError("span of the given indices is not closed under the bracket")
                terms[pos_of[k]] = c
            if terms:
                table[(s, t)] = terms
    return LieAlgebra([alg.labels[i] for i in indices], table)
