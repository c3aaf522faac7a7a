"""Cross-module property suites tied to the structural invariants."""

import itertools
import random
from fractions import Fraction

from liefilt.cli import run_pipeline
from liefilt.liealg import (
    FilteredLieAlgebra,
    associated_graded,
    check_condition_B,
    check_filtered,
    check_graded,
    check_jacobi,
    remark_consistency_space,
)
from liefilt.models import (
    MODEL_NAMES,
    build_model,
    mutation_triple,
    ode_algebra,
    parabolic_grading,
)
from liefilt.prolong import check_full_prolongation_pair


def catalog_filtered():
    yield parabolic_grading("sl2", [1])
    yield parabolic_grading("sl3", [1, 2])
    yield parabolic_grading("sp4", [1, 2])
    yield ode_algebra(2, 1)
    yield ode_algebra(3, 1)
    for f in mutation_triple(2):
        yield f


def test_associated_graded_well_formed_on_catalog_and_perturbations():
    rng = random.Random(31)
    for f in catalog_filtered():
        gr = associated_graded(f)
        assert check_jacobi(gr.alg)
        assert check_graded(gr)
        # random index perturbations that keep the filtration property
        for _ in range(6):
            filt = [d + rng.choice((-1, 0, 0)) for d in f.filt]
            cand = FilteredLieAlgebra(f.alg, filt)
            if not check_filtered(cand):
                continue
            gr2 = associated_graded(cand)
            assert check_jacobi(gr2.alg)
            assert check_graded(gr2)


def test_higher_level_consistency_across_full_prolongation_grid():
    for k, m in ((3, 1), (2, 2), (3, 2)):
        f = ode_algebra(k, m)
        assert check_full_prolongation_pair(f)
        for j in range(1, f.height + 2):
            expected = f.level_subspace(j)
            assert remark_consistency_space(f, j) == expected


def test_continuation_output_is_admissible_on_catalog():
    from liefilt.liealg import continue_filtration

    for f in catalog_filtered():
        out = continue_filtration(f.alg, [min(x, 0) for x in f.filt])
        assert check_filtered(out)
        assert check_condition_B(out)


def test_every_catalog_model_passes_its_pipeline_profile():
    defaults = {
        "abelian": {"n": 3},
        "heisenberg": {"d": 3},
        "free_nilpotent": {"g": 2, "s": 3},
        "bryant": {},
        "contact": {"n": 4},
        "ode": {"k": 2, "m": 1},
        "sl2": {},
        "sl3": {},
        "sl4": {},
        "sp4": {},
        "mutation_triple": {"n": 2},
        "subriemannian_heisenberg": {"d": 3},
    }
    assert set(defaults) == set(MODEL_NAMES)
    for name, params in defaults.items():
        obj = build_model(name, params)
        report = run_pipeline(obj, {"input": {"model": name, "params": params}})
        assert report["summary"]["passed"], (name, report["stages"])
