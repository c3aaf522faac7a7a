from fractions import Fraction

import pytest

from liefilt.exactla import Matrix, Subspace, rank, unit_vec, vec
from liefilt.liealg import (
    EffectivityError,
    FilteredLieAlgebra,
    GradedLieAlgebra,
    LieAlgebra,
    associated_graded,
    center,
    change_basis,
    check_condition_B,
    check_filtered,
    check_graded,
    check_jacobi,
    continue_filtration,
    graded_derivations,
    jacobi_witness,
    killing_form,
    max_ideal_in,
    normalizer,
    remark_consistency_space,
)
from liefilt.models import (
    abelian,
    bryant,
    heisenberg,
    mutation_triple,
    ode_algebra,
    parabolic_grading,
)


def sl2():
    return parabolic_grading("sl2", [1])


def test_jacobi_abelian_and_heisenberg():
    assert check_jacobi(abelian(4).alg)
    assert check_jacobi(heisenberg(3).alg)
    assert jacobi_witness(heisenberg(5).alg) is None


def test_jacobi_detects_perturbation():
    h = heisenberg(3)
    table = {(0, 1): {2: Fraction(1)}, (0, 2): {0: Fraction(1)}}
    bad = LieAlgebra(h.alg.labels, table)
    # Independent check of one cyclic sum: [[x,y],z] + [[y,z],x] + [[z,x],y].
    cyc = bad.bracket(bad.bracket(unit_vec(3, 0), unit_vec(3, 1)), unit_vec(3, 2))
    cyc = vec([a + b for a, b in zip(cyc, bad.bracket(bad.bracket(unit_vec(3, 1), unit_vec(3, 2)), unit_vec(3, 0)))])
    cyc = vec([a + b for a, b in zip(cyc, bad.bracket(bad.bracket(unit_vec(3, 2), unit_vec(3, 0)), unit_vec(3, 1)))])
    assert any(x != 0 for x in cyc)
    assert not check_jacobi(bad)
    assert jacobi_witness(bad) == (0, 1, 2)


def test_check_graded():
    assert check_graded(ode_symbol_graded())
    h = heisenberg(3)
    assert check_graded(h)
    wrong = GradedLieAlgebra(h.alg, [-1, -1, -1])
    assert not check_graded(wrong)


def ode_symbol_graded():
    f = ode_algebra(3, 1)
    return associated_graded(f)


def test_check_filtered_sl2():
    assert check_filtered(sl2())
    bad = FilteredLieAlgebra(sl2().alg, [2, 0, -1])
    assert not check_filtered(bad)


def test_check_filtered_hyperplane_stabilizer():
    for f in mutation_triple(2):
        assert check_jacobi(f.alg)
        assert check_filtered(f)


def test_associated_graded_mutation():
    o_plus, euc, o_minus = mutation_triple(2)
    grs = [associated_graded(x) for x in (o_plus, euc, o_minus)]
    # dims 2 at degree -1 and 1 at degree 0, translations commute in gr
    g = grs[0]
    assert sorted(g.degrees) == [-1, -1, 0]
    assert g.alg.bracket_basis(0, 1) == {}
    for other in grs[1:]:
        assert other.alg._table == g.alg._table
        assert other.degrees == g.degrees
    # but o(3) and euc(2) differ as algebras
    assert o_plus.alg.bracket_basis(0, 1) != euc.alg.bracket_basis(0, 1)


def test_associated_graded_of_already_graded():
    f = ode_algebra(2, 1)
    gr = associated_graded(f)
    assert gr.alg._table == f.alg._table
    assert check_graded(gr)
    assert check_jacobi(gr.alg)


def test_graded_derivations_dims():
    assert graded_derivations(heisenberg(3), 0).dim == 4
    assert graded_derivations(bryant(), 0).dim == 9
    assert graded_derivations(abelian(3), 0).dim == 9


def test_graded_derivations_closed_under_commutator():
    der = graded_derivations(heisenberg(3), 0)
    n = 3
    for a in range(der.dim):
        for b in range(a + 1, der.dim):
            A = Matrix([[der.basis.col(a)[r * n + c] for c in range(n)] for r in range(n)])
            B = Matrix([[der.basis.col(b)[r * n + c] for c in range(n)] for r in range(n)])
            comm = A * B - B * A
            flat = vec(comm.data[r][c] for r in range(n) for c in range(n))
            assert der.contains_vector(flat)


def test_killing_form_values():
    assert killing_form(abelian(3).alg).is_zero()
    assert killing_form(heisenberg(3).alg).is_zero()
    s = sl2()
    labels = list(s.alg.labels)
    e, f, h = labels.index("E12"), labels.index("E21"), labels.index("H1")
    B = killing_form(s.alg)
    assert B.data[h][h] == 8
    assert B.data[e][f] == 4 and B.data[f][e] == 4
    assert B.data[e][e] == 0
    assert rank(B) == 3


def test_killing_nondegenerate_on_semisimple():
    sl3 = parabolic_grading("sl3", [1, 2])
    assert rank(killing_form(sl3.alg)) == sl3.dim
    sp4 = parabolic_grading("sp4", [1, 2])
    assert rank(killing_form(sp4.alg)) == sp4.dim


def test_max_ideal_examples():
    assert max_ideal_in(sl2()).dim == 0
    ab = LieAlgebra(["e1", "e2"], {})
    f = FilteredLieAlgebra(ab, [-1, 0])
    ideal = max_ideal_in(f)
    assert ideal.dim == 1
    assert ideal.contains_vector(vec([0, 1]))
    assert max_ideal_in(ode_algebra(3, 1)).dim == 0


def test_condition_B_examples():
    assert check_condition_B(sl2())
    declared_no_top = FilteredLieAlgebra(sl2().alg, [0, 0, -1])
    assert not check_condition_B(declared_no_top)
    assert check_condition_B(ode_algebra(3, 1))


def test_continue_filtration_sl2():
    s = sl2()
    nonpos = [min(x, 0) for x in s.filt]
    out = continue_filtration(s.alg, nonpos)
    assert out.height == 1
    chain = out.positive_chain
    assert len(chain) == 1 and chain[0].dim == 1
    labels = list(s.alg.labels)
    assert chain[0].contains_vector(unit_vec(3, labels.index("E12")))
    assert check_filtered(out)
    assert check_condition_B(out)


def test_continue_filtration_o3():
    o_plus, _, _ = mutation_triple(2)
    out = continue_filtration(o_plus.alg, list(o_plus.filt))
    assert out.height == 0
    assert out.positive_chain == []


def test_continue_filtration_effectivity_error():
    ab = LieAlgebra(["e1", "e2"], {})
    with pytest.raises(EffectivityError):
        continue_filtration(ab, [-1, 0])


def test_normalizer_of_borel_is_borel():
    s = sl2()
    labels = list(s.alg.labels)
    e, h = labels.index("E12"), labels.index("H1")
    borel = Subspace(Matrix.from_cols([unit_vec(3, e), unit_vec(3, h)], ambient=3), check=False)
    norm = normalizer(s.alg, borel)
    assert norm == borel


def test_normalizer_trivial_cases():
    s = sl2()
    assert normalizer(s.alg, Subspace.zero(3)) == Subspace.full(3)
    h = heisenberg(3)
    assert normalizer(h.alg, center(h.alg)) == Subspace.full(3)


def test_center_examples():
    assert center(heisenberg(3).alg).dim == 1
    assert center(sl2().alg).dim == 0
    assert center(abelian(4).alg).dim == 4


def test_remark_consistency_ode():
    f = ode_algebra(3, 1)
    assert remark_consistency_space(f, 1) == f.level_subspace(1)
    assert remark_consistency_space(f, 2).dim == 0


def test_change_basis_round_trip():
    s = sl2().alg
    p = Matrix([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    moved = change_basis(s, p, ["a", "b", "c"])
    assert check_jacobi(moved)
    back = change_basis(moved, __import__("liefilt.exactla", fromlist=["invert"]).invert(p), list(s.labels))
    assert back._table == s._table
