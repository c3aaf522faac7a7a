"""Constructors for the catalog of example algebras.

Every model comes with exact rational structure constants on a documented
basis, plus the grading or filtration data the verification pipeline needs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import (
    Matrix,
    Subspace,
    Vec,
    ZERO,
    frac,
    image_basis,
    kernel_basis,
    solve_preimage,
    unit_vec,
    vec,
)
from .liealg import (
    FilteredLieAlgebra,
    GradedLieAlgebra,
    LieAlgebra,
)

ONE = Fraction(1)


def abelian(n: int) -> GradedLieAlgebra:
    """The abelian algebra on n generators, all in degree -1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return GradedLieAlgebra(LieAlgebra([f"a{i+1}" for i in range(n)], {}), [-1] * n)


def heisenberg(d: int) -> GradedLieAlgebra:
    """Heisenberg algebra of dimension d = 2k+1: [x_i, y_i] = z."""
    if d < 3 or d % 2 == 0:
        raise ValueError("dimension must be odd and at least 3")
    k = (d - 1) // 2
    labels = [f"x{i+1}" for i in range(k)] + [f"y{i+1}" for i in range(k)] + ["z"]
    table = {(i, k + i): {2 * k: ONE} for i in range(k)}
    return GradedLieAlgebra(LieAlgebra(labels, table), [-1] * (2 * k) + [-2])


def bryant() -> GradedLieAlgebra:
    """Two-step algebra on R^3 with its full exterior square on top."""
    labels = ["e1", "e2", "e3", "f12", "f13", "f23"]
    table = {(0, 1): {3: ONE}, (0, 2): {4: ONE}, (1, 2): {5: ONE}}
    return GradedLieAlgebra(LieAlgebra(labels, table), [-1, -1, -1, -2, -2, -2])


# -- free nilpotent algebras on a Hall basis --------------------------------


def _hall_words(gens: int, step: int) -> list:
    """Hall words as nested tuples (leaves are generator numbers).

    Order is (weight, creation order); w = (u, v) is kept when u < v and,
    for composite v = (x, y), x <= u.
    """
    words: list = list(range(gens))
    pos = {w: i for i, w in enumerate(words)}
    weight = {w: 1 for w in words}
    for n in range(2, step + 1):
        new = []
        for v in words:
            for u in words:
                if weight[u] + weight[v] != n:
                    continue
                if pos[u] >= pos[v]:
                    continue
                if isinstance(v, tuple) and pos[v[0]] > pos[u]:
                    continue
                new.append((u, v))
        for w in new:
            pos[w] = len(words)
            weight[w] = n
            words.append(w)
    return words


def _word_label(w) -> str:
    if isinstance(w, int):
        return f"x{w+1}"
    return f"[{_word_label(w[0])},{_word_label(w[1])}]"


def _tensor_expansion(w, step: int) -> dict[tuple, Fraction]:
    """Expansion in the step-truncated free associative algebra."""
    if isinstance(w, int):
        return {(w,): ONE}
    a = _tensor_expansion(w[0], step)
    b = _tensor_expansion(w[1], step)
    out: dict[tuple, Fraction] = {}
    for (wa, ca), (wb, cb) in itertools.product(a.items(), b.items()):
        if len(wa) + len(wb) <= step:
            key = wa + wb
            out[key] = out.get(key, ZERO) + ca * cb
            key = wb + wa
            out[key] = out.get(key, ZERO) - ca * cb
    return {k: c for k, c in out.items() if c}


def free_nilpotent(gens: int, step: int) -> GradedLieAlgebra:
    """Free nilpotent algebra on `gens` generators, truncated at `step`."""
    if gens < 2 or step < 1:
        raise ValueError("need at least two generators and step >= 1")
    words = _hall_words(gens, step)
    weight = [1 if isinstance(w, int) else None for w in words]
    for t, w in enumerate(words):
        if weight[t] is None:
            weight[t] = weight[words.index(w[0])] + weight[words.index(w[1])]
    expansions = [_tensor_expansion(w, step) for w in words]

    # Coordinates per weight: all length-n generator words.
    def word_list(n: int) -> list[tuple]:
        return list(itertools.product(range(gens), repeat=n))

    basis_by_weight: dict[int, list[int]] = {}
    for t, w in enumerate(words):
        basis_by_weight.setdefault(weight[t], []).append(t)
    col_matrix: dict[int, Matrix] = {}
    for n, members in basis_by_weight.items():
        coords = word_list(n)
        cols = [vec(expansions[t].get(wd, ZERO) for wd in coords) for t in members]
        col_matrix[n] = Matrix.from_cols(cols, ambient=len(coords))

    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            n = weight[a] + weight[b]
            if n > step:
                continue
            prod: dict[tuple, Fraction] = {}
            for (wa, ca), (wb, cb) in itertools.product(expansions[a].items(), expansions[b].items()):
                if len(wa) + len(wb) <= step:
                    key = wa + wb
                    prod[key] = prod.get(key, ZERO) + ca * cb
                    key = wb + wa
                    prod[key] = prod.get(key, ZERO) - ca * cb
            coords = word_list(n)
            rhs = vec(prod.get(wd, ZERO) for wd in coords)
            sol = solve_preimage(col_matrix[n], rhs)
            if sol is None:
                raise AssertionError("Hall expansion failed to close")
            terms = {basis_by_weight[n][t]: c for t, c in enumerate(sol) if c}
            if terms:
                table[(a, b)] = terms
    labels = [_word_label(w) for w in words]
    return GradedLieAlgebra(LieAlgebra(labels, table), [-weight[t] for t in range(len(words))])


# -- contact symbol with its full graded derivation algebra -----------------


def contact_csp(n: int) -> tuple[GradedLieAlgebra, Subspace]:
    """Contact-type symbol on an even-dimensional space: the bracket is the
    symplectic-trace-free part of the wedge.  Returns (m, der0(m))."""
    if n < 2 or n % 2 == 1:
        raise ValueError("n must be even and at least 2")
    q = n // 2
    labels1 = [f"x{i+1}" for i in range(q)] + [f"y{i+1}" for i in range(q)]

    def b(a: int, c: int) -> Fraction:
        if c == a + q:
            return ONE
        if a == c + q:
            return -ONE
        return ZERO

    pairs = list(itertools.combinations(range(n), 2))
    b_row = Matrix([[b(a, c) for (a, c) in pairs]])
    ker = kernel_basis(b_row)
    dim2 = ker.dim
    if dim2 == 0:
        m_alg = LieAlgebra(labels1, {})
        grades = [-1] * n
        m = GradedLieAlgebra(m_alg, grades)
    else:
        btilde = [Fraction(1, q) if (a < q and c == a + q) else ZERO for (a, c) in pairs]
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for t, (a, c) in enumerate(pairs):
            wedge = [ONE if s == t else ZERO for s in range(len(pairs))]
            val = vec(w - b(a, c) * bt for w, bt in zip(wedge, btilde))
            sol = solve_preimage(ker.basis, val)
            assert sol is not None
            terms = {n + s: x for s, x in enumerate(sol) if x}
            if terms:
                table[(a, c)] = terms
        m_alg = LieAlgebra(labels1 + [f"z{s+1}" for s in range(dim2)], table)
        m = GradedLieAlgebra(m_alg, [-1] * n + [-2] * dim2)
    from .liealg import graded_derivations

    return m, graded_derivations(m, 0)


# -- semidirect extension by a derivation subalgebra -------------------------


def semidirect_derivation_extension(m: GradedLieAlgebra, g0: Subspace) -> FilteredLieAlgebra:
    """The algebra m + g0 with [(X,A),(Y,B)] = ([X,Y] + A(Y) - B(X), [A,B]),
    filtered by the grading of m with g0 in level 0.

    g0 is a subspace of the matrix space on m (flattened row-major) and must
    be closed under the commutator.
    """
    nm = m.dim
    r = g0.dim
    if g0.ambient_dim != nm * nm:
        raise ValueError("derivation subspace has wrong ambient dimension")
    mats = []
    for t in range(r):
        flat = g0.basis.col(t)
        mats.append(Matrix([[flat[a * nm + c] for c in range(nm)] for a in range(nm)]))
    labels = list(m.alg.labels) + [f"D{t+1}" for t in range(r)]
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), terms in m.alg._table.items():
        table[(i, j)] = dict(terms)
    for t in range(r):
        for j in range(nm):
            col = mats[t].col(j)
            entries = {a: -c for a, c in enumerate(col) if c}
            if entries:
                table[(j, nm + t)] = entries  # [e_j, D_t] = -D_t(e_j)
    for s in range(r):
        for t in range(s + 1, r):
            comm = mats[s] * mats[t] - mats[t] * mats[s]
            flat = vec(comm.data[a][c] for a in range(nm) for c in range(nm))
            sol = solve_preimage(g0.basis, flat)
            if sol is None:
                raise ValueError("derivation subspace is not closed under the commutator")
            entries = {nm + u: c for u, c in enumerate(sol) if c}
            if entries:
                table[(nm + s, nm + t)] = entries
    alg = LieAlgebra(labels, table)
    return FilteredLieAlgebra(alg, list(m.degrees) + [0] * r)


def so_matrices(n: int) -> Subspace:
    """so(n) inside the n x n matrix space (flattened row-major)."""
    cols = []
    for i in range(n):
        for j in range(i + 1, n):
            flat = [ZERO] * (n * n)
            flat[i * n + j] = ONE
            flat[j * n + i] = -ONE
            cols.append(tuple(flat))
    return Subspace(Matrix.from_cols(cols, ambient=n * n), check=False)


# -- the ODE-type filtered algebras ------------------------------------------


def ode_algebra(k: int, m: int) -> FilteredLieAlgebra:
    """(sl(2) + gl(m)) acting on m copies of the degree-k polynomial module.

    Basis: e, h, f; E_ab for the gl(m) block; v_{j,a} for the monomial
    x^(k-j) y^j tensored with the a-th standard vector.  The action is
    e = x d/dy, f = y d/dx, h = x d/dx - y d/dy.  Filtration: e at +1, h and
    gl(m) at 0, f at -1, v_{j,a} at -(j+1).
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be at least 1")
    labels = ["e", "h", "f"]
    E = lambda a, b: 3 + a * m + b
    for a in range(m):
        for b in range(m):
            labels.append(f"E{a+1}{b+1}")
    V = lambda j, a: 3 + m * m + j * m + a
    for j in range(k + 1):
        for a in range(m):
            labels.append(f"v{j}_{a+1}")
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    table[(0, 1)] = {0: Fraction(-2)}  # [e,h] = -2e
    table[(0, 2)] = {1: ONE}           # [e,f] = h
    table[(1, 2)] = {2: Fraction(-2)}  # [h,f] = -2f
    for a in range(m):
        for b in range(m):
            for c in range(m):
                for d in range(m):
                    if (a, b) >= (c, d):
                        continue
                    terms: dict[int, Fraction] = {}
                    if b == c:
                        terms[E(a, d)] = terms.get(E(a, d), ZERO) + ONE
                    if d == a:
                        terms[E(c, b)] = terms.get(E(c, b), ZERO) - ONE
                    terms = {key: x for key, x in terms.items() if x}
                    if terms:
                        table[(E(a, b), E(c, d))] = terms
    for j in range(k + 1):
        for a in range(m):
            idx = V(j, a)
            if j >= 1:
                table[(0, idx)] = {V(j - 1, a): Fraction(j)}  # [e, v_j]
            if k - 2 * j != 0:
                table[(1, idx)] = {idx: Fraction(k - 2 * j)}  # [h, v_j]
            if j <= k - 1:
                table[(2, idx)] = {V(j + 1, a): Fraction(k - j)}  # [f, v_j]
            for c in range(m):
                for d in range(m):
                    if d == a:
                        table[(E(c, d), idx)] = {V(j, c): ONE}
    filt = [1, 0, -1] + [0] * (m * m) + [-(j + 1) for j in range(k + 1) for _ in range(m)]
    return FilteredLieAlgebra(LieAlgebra(labels, table), filt)


# -- semisimple algebras with parabolic gradings ------------------------------


def lie_algebra_from_matrices(mats: Sequence[Matrix], labels: Sequence[str]) -> LieAlgebra:
    """Structure constants of a matrix Lie algebra given by a basis."""
    if not mats:
        return LieAlgebra([], {})
    n = mats[0].rows
    flat_cols = [vec(mm.data[a][b] for a in range(n) for b in range(n)) for mm in mats]
    basis = Matrix.from_cols(flat_cols, ambient=n * n)
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            comm = mats[i] * mats[j] - mats[j] * mats[i]
            flat = vec(comm.data[a][b] for a in range(n) for b in range(n))
            sol = solve_preimage(basis, flat)
            if sol is None:
                raise ValueError("matrix span is not closed under the commutator")
            terms = {t: c for t, c in enumerate(sol) if c}
            if terms:
                table[(i, j)] = terms
    return LieAlgebra(labels, table)


def _matrix_unit(n: int, i: int, j: int) -> Matrix:
    return Matrix([[ONE if (a, b) == (i, j) else ZERO for b in range(n)] for a in range(n)])


def parabolic_grading(typ: str, crossed: Iterable[int]) -> FilteredLieAlgebra:
    """Root-height grading for sl(n) (n <= 4, any crossed simple roots) and
    sp(4) with both roots crossed; the filtration comes from the grading."""
    crossed = sorted(set(int(c) for c in crossed))
    if typ in ("sl2", "sl3", "sl4"):
        n = int(typ[2])
        if not crossed or any(c < 1 or c > n - 1 for c in crossed):
            raise ValueError(f"crossed roots must be a nonempty subset of 1..{n-1}")
        mats, labels, degrees = [], [], []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                mats.append(_matrix_unit(n, i, j))
                labels.append(f"E{i+1}{j+1}")
                lo, hi = min(i, j), max(i, j)
                depth = sum(1 for c in crossed if lo + 1 <= c <= hi)
                degrees.append(depth if i < j else -depth)
        for i in range(n - 1):
            mats.append(_matrix_unit(n, i, i) - _matrix_unit(n, i + 1, i + 1))
            labels.append(f"H{i+1}")
            degrees.append(0)
        alg = lie_algebra_from_matrices(mats, labels)
        return FilteredLieAlgebra(alg, degrees)
    if typ == "sp4":
        if crossed != [1, 2]:
            raise ValueError("sp4 is implemented with both simple roots crossed")
        def sp_elt(A: Matrix, B: Matrix, C: Matrix) -> Matrix:
            rows = []
            for a in range(2):
                rows.append(list(A.data[a]) + list(B.data[a]))
            for a in range(2):
                rows.append(list(C.data[a]) + [-A.data[b][a] for b in range(2)])
            return Matrix(rows)

        Z2 = Matrix.zero(2, 2)
        E = lambda i, j: _matrix_unit(2, i, j)
        sym = [E(0, 0), E(1, 1), E(0, 1) + E(1, 0)]
        entries = [
            ("h1", sp_elt(E(0, 0) - E(1, 1), Z2, Z2), 0),
            ("h2", sp_elt(E(1, 1), Z2, Z2), 0),
            ("a12", sp_elt(E(0, 1), Z2, Z2), 1),
            ("a21", sp_elt(E(1, 0), Z2, Z2), -1),
            ("b22", sp_elt(Z2, sym[1], Z2), 1),
            ("b12", sp_elt(Z2, sym[2], Z2), 2),
            ("b11", sp_elt(Z2, sym[0], Z2), 3),
            ("c22", sp_elt(Z2, Z2, sym[1]), -1),
            ("c12", sp_elt(Z2, Z2, sym[2]), -2),
            ("c11", sp_elt(Z2, Z2, sym[0]), -3),
        ]
        labels = [e[0] for e in entries]
        mats = [e[1] for e in entries]
        degrees = [e[2] for e in entries]
        alg = lie_algebra_from_matrices(mats, labels)
        return FilteredLieAlgebra(alg, degrees)
    raise ValueError(f"unsupported type {typ!r}")


# -- the mutation triple -------------------------------------------------------


def mutation_triple(n: int) -> tuple[FilteredLieAlgebra, FilteredLieAlgebra, FilteredLieAlgebra]:
    """Three filtered algebras on the block presentation (A, v) with A in
    so(n), differing only in the bracket of two translations; all induce the
    same associated graded."""
    if n < 2:
        raise ValueError("n must be at least 2")
    labels = [f"v{a+1}" for a in range(n)] + [f"F{i+1}{j+1}" for i in range(n) for j in range(i + 1, n)]
    filt = [-1] * n + [0] * (n * (n - 1) // 2)

    def build(eps: int) -> FilteredLieAlgebra:
        size = n + 1
        mats = []
        for a in range(n):
            mm = [[ZERO] * size for _ in range(size)]
            mm[a][n] = ONE
            if eps:
                mm[n][a] = frac(eps)
            mats.append(Matrix(mm))
        for i in range(n):
            for j in range(i + 1, n):
                mm = [[ZERO] * size for _ in range(size)]
                mm[i][j] = ONE
                mm[j][i] = -ONE
                mats.append(Matrix(mm))
        alg = lie_algebra_from_matrices(mats, labels)
        return FilteredLieAlgebra(alg, filt)

    return build(-1), build(0), build(1)


# -- catalog registry (used by the CLI) ---------------------------------------


def build_model(name: str, params: dict[str, int]):
    """Instantiate a catalog model by name; returns a filtered or graded
    algebra, or a tuple for the mutation triple."""
    name = name.lower()
    if name == "abelian":
        return abelian(params.get("n", 3))
    if name == "heisenberg":
        return heisenberg(params.get("d", 3))
    if name == "free_nilpotent":
        return free_nilpotent(params.get("g", 2), params.get("s", 3))
    if name == "bryant":
        return bryant()
    if name == "contact":
        m, _g0 = contact_csp(params.get("n", 4))
        return m
    if name == "ode":
        return ode_algebra(params.get("k", 3), params.get("m", 1))
    if name in ("sl2", "sl3", "sl4", "sp4"):
        crossed = params.get("crossed")
        if crossed is None:
            rank_ = 2 if name == "sp4" else int(name[2]) - 1
            crossed_list = list(range(1, rank_ + 1))
        else:
            crossed_list = [int(c) for c in str(crossed)]
        return parabolic_grading(name, crossed_list)
    if name == "mutation_triple":
        return mutation_triple(params.get("n", 2))
    if name == "subriemannian_heisenberg":
        m = heisenberg(params.get("d", 3))
        q = (params.get("d", 3) - 1) // 2
        rot = [[ZERO] * m.dim for _ in range(m.dim)]
        for i in range(q):
            rot[i][q + i] = -ONE
            rot[q + i][i] = ONE
        flat = vec(rot[a][b] for a in range(m.dim) for b in range(m.dim))
        g0 = Subspace(Matrix.from_cols([flat], ambient=m.dim * m.dim), check=False)
        return semidirect_derivation_extension(m, g0)
    raise ValueError(f"unknown model {name!r}")


MODEL_NAMES = [
    "abelian",
    "heisenberg",
    "free_nilpotent",
    "bryant",
    "contact",
    "ode",
    "sl2",
    "sl3",
    "sl4",
    "sp4",
    "mutation_triple",
    "subriemannian_heisenberg",
]
