"""Command-line front end: algebra files, the verification pipeline, and
deterministic machine-readable reports.

Exit codes: 0 when every executed check passes, 1 on a check failure, 2 on
an input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .exactla import Matrix, Subspace, ZERO, frac, kernel_basis, image_basis, unit_vec, vec
from .liealg import (
    EffectivityError,
    FilteredLieAlgebra,
    GradedLieAlgebra,
    LieAlgebra,
    associated_graded,
    check_condition_B,
    check_filtered,
    check_graded,
    check_jacobi,
    continue_filtration,
    gr0_action_on_m,
    graded_derivations,
    jacobi_witness,
    max_ideal_in,
)
from .cochains import (
    Cochain,
    FilteredHom,
    Splitting,
    cochain_space,
    cohomology_dim,
    gr_of,
    hom_space,
)
from .models import MODEL_NAMES, build_model
from .normcond import (
    Codifferential,
    GROUP_CAVEAT,
    NormalizationCondition,
    adjoint_codifferential,
    check_codifferential,
    check_negligible,
    normalize_pointwise,
    ode_inner_product,
    quotient_dims,
    skew_derivations,
    subriemannian_inner_product,
    kostant_codifferential,
)


class InputError(Exception):
    pass


# -- algebra files ---------------------------------------------------------------


def _parse_rational(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, dict):
        return Fraction(int(x.get("num", 0)), int(x.get("den", 1)))
    raise InputError(f"cannot read rational from {x!r}")


def _format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_algebra(doc: dict):
    """Validate an algebra file; returns a filtered or graded algebra."""
    if not isinstance(doc, dict):
        raise InputError("algebra file must be a JSON object")
    basis = doc.get("basis")
    if not isinstance(basis, list) or not basis:
        raise InputError("field 'basis' must be a nonempty list")
    labels, filt, degrees = [], [], []
    kind = None
    for pos, entry in enumerate(basis):
        if not isinstance(entry, dict) or "label" not in entry:
            raise InputError(f"basis[{pos}] must be an object with a 'label'")
        labels.append(str(entry["label"]))
        if "filtration_index" in entry:
            this = "filtered"
            filt.append(int(entry["filtration_index"]))
        elif "degree" in entry:
            this = "graded"
            degrees.append(int(entry["degree"]))
        else:
            raise InputError(f"basis[{pos}] needs 'filtration_index' or 'degree'")
        if kind is None:
            kind = this
        elif kind != this:
            raise InputError("basis entries mix 'filtration_index' and 'degree'")
    n = len(labels)
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for pos, entry in enumerate(doc.get("brackets", [])):
        try:
            i, j = int(entry["i"]), int(entry["j"])
        except (KeyError, TypeError, ValueError):
            raise InputError(f"brackets[{pos}] needs integer fields 'i' and 'j'")
        if not 0 <= i < j < n:
            raise InputError(f"brackets[{pos}]: need 0 <= i < j < {n}")
        terms = {}
        for tpos, term in enumerate(entry.get("terms", [])):
            try:
                k = int(term["k"])
            except (KeyError, TypeError, ValueError):
                raise InputError(f"brackets[{pos}].terms[{tpos}] needs integer 'k'")
            if not 0 <= k < n:
                raise InputError(f"brackets[{pos}].terms[{tpos}]: k out of range")
            if "num" in term or "den" in term:
                try:
                    coeff = Fraction(int(term.get("num", 0)), int(term.get("den", 1)))
                except (TypeError, ValueError, ZeroDivisionError):
                    raise InputError(f"brackets[{pos}].terms[{tpos}]: malformed fraction")
            else:
                try:
                    coeff = _parse_rational(term.get("coeff"))
                except (InputError, ValueError, ZeroDivisionError):
                    raise InputError(f"brackets[{pos}].terms[{tpos}]: malformed fraction")
            if coeff:
                terms[k] = coeff
        if terms:
            table[(i, j)] = terms
    alg = LieAlgebra(labels, table)
    witness = jacobi_witness(alg)
    if witness is not None:
        raise InputError(f"Jacobi identity fails on basis triple {witness}")
    if kind == "filtered":
        return FilteredLieAlgebra(alg, filt)
    return GradedLieAlgebra(alg, degrees)


def serialize_algebra(obj) -> dict:
    filtered = isinstance(obj, FilteredLieAlgebra)
    marks = obj.filt if filtered else obj.degrees
    key = "filtration_index" if filtered else "degree"
    doc = {
        "name": getattr(obj, "name", "algebra"),
        "basis": [{"label": lbl, key: marks[i]} for i, lbl in enumerate(obj.alg.labels)],
        "brackets": [],
    }
    for (i, j) in sorted(obj.alg._table):
        terms = obj.alg._table[(i, j)]
        doc["brackets"].append({
            "i": i,
            "j": j,
            "terms": [{"k": k, "num": terms[k].numerator, "den": terms[k].denominator}
                      for k in sorted(terms)],
        })
    return doc


def parse_codifferential_file(doc: dict, f: FilteredLieAlgebra) -> Codifferential:
    h1, h2, h3 = (hom_space(f, k).dim for k in (1, 2, 3))

    def read_matrix(name: str, rows: int, cols: int) -> Matrix:
        raw = doc.get(name)
        if not isinstance(raw, list) or len(raw) != rows or any(len(r) != cols for r in raw):
            raise InputError(f"field '{name}' must be a {rows}x{cols} matrix")
        return Matrix([[_parse_rational(x) for x in row] for row in raw], cols=cols)

    return Codifferential(f, read_matrix("d2", h1, h2), read_matrix("d3", h2, h3))


# -- the pipeline -----------------------------------------------------------------


def _sanitize(value):
    if isinstance(value, Fraction):
        return _format_rational(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return str(value)


def _as_filtered(obj):
    if isinstance(obj, FilteredLieAlgebra):
        return obj
    return FilteredLieAlgebra(obj.alg, obj.degrees)


def _gr_dims(g) -> dict[int, int]:
    dims: dict[int, int] = {}
    for d in g.degrees:
        dims[d] = dims.get(d, 0) + 1
    return dims


def _hom_vector_witness(f, coords) -> list[str]:
    return [_format_rational(c) for c in coords]


def run_pipeline(obj, options: dict) -> dict:
    """Execute the verification stages in order; later stages are skipped
    once a prerequisite fails."""
    stages: list[dict] = []
    report = {
        "tool": {"name": "liefilt", "version": __version__},
        "input": options.get("input", {}),
        "options": {k: v for k, v in options.items() if k != "input"},
        "caveats": [GROUP_CAVEAT],
        "stages": stages,
    }

    def stage(name: str, kind: str, status: str, **data):
        entry = {"name": name, "kind": kind, "status": status}
        entry.update(data)
        stages.append(entry)
        return entry

    if isinstance(obj, tuple):  # mutation triple
        _mutation_pipeline(obj, options, stage)
        return _finish(report)

    f = _as_filtered(obj)
    graded_input = isinstance(obj, GradedLieAlgebra)

    ok = check_jacobi(f.alg)
    if not ok:
        stage("jacobi", "check", "fail", witness=list(jacobi_witness(f.alg)))
        _skip_rest(stage)
        return _finish(report)
    stage("jacobi", "check", "pass")

    if graded_input:
        ok = check_graded(obj)
        stage("graded", "check", "pass" if ok else "fail")
    else:
        ok = check_filtered(f)
        stage("filtered", "check", "pass" if ok else "fail")
    if not ok:
        _skip_rest(stage)
        return _finish(report)

    ideal = max_ideal_in(f)
    stage("effectivity", "check", "pass" if ideal.dim == 0 else "fail",
          max_ideal_dim=ideal.dim,
          witness=None if ideal.dim == 0 else _hom_vector_witness(f, ideal.basis.col(0)))

    cond_b = check_condition_B(f)
    stage("condition_B", "check", "pass" if cond_b else "fail")

    try:
        continued = continue_filtration(f.alg, [min(x, 0) for x in f.filt])
        declared = {j: f.level_subspace(j) for j in range(1, f.height + 1)}
        computed = continued.positive_chain
        matches = len(computed) == f.height and all(
            declared[j + 1] == computed[j] for j in range(len(computed))
        )
        stage("filtration_continuation", "check", "pass" if matches else "fail",
              computed_height=len(computed), declared_height=f.height)
    except EffectivityError as exc:
        stage("filtration_continuation", "check", "fail", error=str(exc))

    gr = gr_of(f)
    lo, hi = options.get("degrees", (0, f.depth + f.height))
    h1_table = {ell: cohomology_dim(gr, 1, ell) for ell in range(lo, hi + 1)}
    pair_ok = all(h1_table.get(ell, cohomology_dim(gr, 1, ell)) == 0
                  for ell in range(1, f.depth + f.height + 1))
    of_m_ok = pair_ok and cohomology_dim(gr, 1, 0) == 0
    stage("first_cohomology", "info", "info",
          table={str(k): v for k, v in sorted(h1_table.items())},
          full_prolongation_pair=pair_ok,
          full_prolongation_of_m=of_m_ok)

    if options.get("prolong"):
        from .prolong import tanaka_prolongation

        try:
            m, g0 = gr0_action_on_m(f)
            res = tanaka_prolongation(m, g0, options.get("prolong_cap"))
            consistent = True
            if pair_ok and res.stabilized_at is not None:
                consistent = _gr_dims(res.total) == _gr_dims(gr)
            stage("tanaka_prolongation", "check", "pass" if consistent else "fail",
                  component_dims={str(k): v for k, v in sorted(res.component_dims().items())},
                  stabilized_at=res.stabilized_at,
                  truncated=res.truncated,
                  total_dim=res.total_dim,
                  matches_graded=consistent if pair_ok else None)
        except ValueError as exc:
            stage("tanaka_prolongation", "check", "fail", error=str(exc))

    codiff_kind = options.get("codiff")
    if codiff_kind:
        built = _build_codifferential(codiff_kind, f, options, stage)
        if built is not None:
            codiff, algebra = built
            rep = check_codifferential(codiff)
            stage("codifferential", "check", "pass" if rep["passed"] else "fail",
                  **{k: v for k, v in rep.items() if k != "caveat"})
            if rep["passed"]:
                _normalization_stages(codiff, algebra, options, stage)
            else:
                stage("normalization_condition", "check", "skip", reason="invalid codifferential")

    return _finish(report)


def _skip_rest(stage):
    for name in ("effectivity", "condition_B", "filtration_continuation", "first_cohomology"):
        stage(name, "check", "skip", reason="earlier stage failed")


def _mutation_pipeline(triple, options, stage):
    grs = []
    for idx, f in enumerate(triple):
        ok = check_jacobi(f.alg) and check_filtered(f)
        stage(f"member_{idx}_valid", "check", "pass" if ok else "fail")
        if ok:
            grs.append(associated_graded(f))
    if len(grs) == len(triple):
        same = all(g.alg._table == grs[0].alg._table and g.degrees == grs[0].degrees for g in grs[1:])
        stage("associated_graded_equality", "check", "pass" if same else "fail",
              dims={str(k): v for k, v in sorted(_gr_dims(grs[0]).items())})


def _build_codifferential(kind: str, f: FilteredLieAlgebra, options, stage):
    """Returns (codifferential, algebra-it-lives-on) or None after recording
    a failure stage."""
    try:
        if kind == "kostant":
            return kostant_codifferential(f), f
        if kind == "ode":
            params = options.get("input", {}).get("params", {})
            if options.get("input", {}).get("model") != "ode":
                raise ValueError("the ode codifferential needs the ode model")
            ip = ode_inner_product(int(params.get("k", 3)), int(params.get("m", 1)))
            return adjoint_codifferential(ip), ip.alg
        if kind == "subriem":
            gr = gr_of(f)
            neg = gr.negative_indices()
            from .liealg import subalgebra_on_indices

            m = GradedLieAlgebra(subalgebra_on_indices(gr.alg, neg), [gr.degrees[a] for a in neg])
            ones = len(m.indices_of_degree(-1))
            g0 = skew_derivations(m, Matrix.identity(ones))
            ip = subriemannian_inner_product(m, Matrix.identity(ones), g0)
            stage("subriemannian_extension", "info", "info",
                  note="codifferential built on the skew-derivation extension of the symbol",
                  extension_dim=ip.alg.dim, g0_dim=g0.dim)
            return adjoint_codifferential(ip), ip.alg
        if kind.startswith("file:"):
            with open(kind[5:], "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            return parse_codifferential_file(doc, f), f
        raise ValueError(f"unknown codifferential kind {kind!r}")
    except (ValueError, OSError, json.JSONDecodeError, InputError) as exc:
        stage("codifferential", "check", "fail", error=str(exc))
        return None


def _normalization_stages(codiff, f, options, stage):
    n_sub = kernel_basis(codiff.d2)
    cond = NormalizationCondition(f, n_sub)
    rep = cond.report()
    stage("normalization_condition", "check", "pass" if rep["passed"] else "fail",
          invariant=rep["invariant"],
          per_degree={str(k): v for k, v in rep["per_degree"].items()})
    neg = check_negligible(image_basis(codiff.d3), cond)
    nrep = neg.report()
    neg_ok = nrep["contained"] and nrep["invariant"] and nrep["trivial_intersection"] and nrep["maximal"]
    stage("negligible_submodule", "check", "pass" if neg_ok else "fail",
          **{k: v for k, v in nrep.items() if k != "caveat"})
    if rep["passed"] and neg_ok:
        qd = quotient_dims(cond, neg)
        gr = gr_of(f)
        h2 = {ell: cohomology_dim(gr, 2, ell) for ell in qd}
        stage("quotient_vs_second_cohomology", "check", "pass" if qd == h2 else "fail",
              quotient={str(k): v for k, v in sorted(qd.items())},
              second_cohomology={str(k): v for k, v in sorted(h2.items())})
        if options.get("demo_normalize"):
            seed = options.get("seed", 0)
            rng = random.Random(seed)
            space = hom_space(f, 2)
            coords = [ZERO] * space.dim
            for i in space.coords_of_degree_ge(1):
                coords[i] = Fraction(rng.randint(-3, 3))
            v = FilteredHom.from_coords(f, 2, tuple(coords))
            s = Splitting.standard(f)
            run = normalize_pointwise(v, cond, s)
            normalized = cond.subspace.contains_vector(run.v_norm.to_coords())
            rerun = normalize_pointwise(run.v_norm, cond, s)
            stage("normalize_demo", "check", "pass" if normalized and not rerun.corrections else "fail",
                  seed=seed,
                  corrections_at=[ell for ell, _ in run.corrections],
                  normalized_in_condition=normalized,
                  idempotent=not rerun.corrections)


def _finish(report: dict) -> dict:
    counts = {"pass": 0, "fail": 0, "skip": 0, "info": 0}
    for s in report["stages"]:
        counts[s["status"]] = counts.get(s["status"], 0) + 1
    report["summary"] = {
        "passed": counts["fail"] == 0,
        "counts": counts,
    }
    return report


# -- emission ---------------------------------------------------------------------


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_sanitize(report), sort_keys=True, indent=2) + "\n"
    lines = []
    tool = report["tool"]
    lines.append(f"{tool['name']} {tool['version']}")
    src = report.get("input", {})
    if src:
        lines.append("input: " + json.dumps(_sanitize(src), sort_keys=True))
    for caveat in report.get("caveats", []):
        lines.append(f"note: {caveat}")
    lines.append("")
    for s in report["stages"]:
        head = f"[{s['status'].upper():4}] {s['name']}"
        lines.append(head)
        for key, value in s.items():
            if key in ("name", "status", "kind"):
                continue
            if key == "table" and isinstance(value, dict):
                lines.append("    degree | dim")
                for k in sorted(value, key=lambda x: int(x)):
                    lines.append(f"    {k:>6} | {value[k]}")
            elif key == "per_degree" and isinstance(value, dict):
                lines.append("    degree | complementary | dim gr(N) | dim im(d) | dim C2")
                for k in sorted(value, key=lambda x: int(x)):
                    d = value[k]
                    lines.append(
                        f"    {k:>6} | {str(d['complementary']):>13} | {d['dim_gr_N']:>9}"
                        f" | {d['dim_im_partial']:>9} | {d['dim_C2']:>6}"
                    )
            else:
                lines.append(f"    {key}: {json.dumps(_sanitize(value), sort_keys=True)}")
    summary = report["summary"]
    lines.append("")
    verdict = "PASS" if summary["passed"] else "FAIL"
    lines.append(f"result: {verdict} {json.dumps(summary['counts'], sort_keys=True)}")
    return "\n".join(lines) + "\n"


# -- argument handling --------------------------------------------------------------


def _parse_params(pairs: Optional[Sequence[str]]) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise InputError(f"--param expects name=value, got {pair!r}")
        key, _, value = pair.partition("=")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise InputError(f"--param {key}: integer value required, got {value!r}")
    return out


def _parse_degrees(text: Optional[str]):
    if text is None:
        return None
    try:
        lo, _, hi = text.partition("..")
        return int(lo), int(hi)
    except ValueError:
        raise InputError(f"--degrees expects a..b, got {text!r}")


def _load_input(args):
    if args.model and args.file:
        raise InputError("give either --model or --file, not both")
    if args.model:
        params = _parse_params(args.param)
        try:
            obj = build_model(args.model, params)
        except ValueError as exc:
            raise InputError(str(exc))
        return obj, {"model": args.model, "params": params}
    if args.file:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}")
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.file} is not valid JSON: {exc}")
        return parse_algebra(doc), {"file": args.file, "name": doc.get("name")}
    raise InputError("an input is required: --model NAME or --file PATH")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="liefilt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("report", help="run the verification pipeline")
    rep.add_argument("--model", help="catalog model name")
    rep.add_argument("--param", action="append", help="model parameter name=value")
    rep.add_argument("--file", help="algebra file (JSON)")
    rep.add_argument("--codiff", help="codifferential: kostant | subriem | ode | file:PATH")
    rep.add_argument("--prolong", action="store_true", help="run the prolongation stage")
    rep.add_argument("--prolong-cap", type=int, default=None, help="prolongation level cap")
    rep.add_argument("--degrees", help="degree range a..b for the cohomology table")
    rep.add_argument("--demo-normalize", action="store_true",
                     help="run the pointwise normalization demo (requires --codiff)")
    rep.add_argument("--seed", type=int, default=0, help="seed for random demos")
    rep.add_argument("--format", choices=("text", "json"), default="text")
    rep.add_argument("--out", help="write the report here instead of stdout")

    cat = sub.add_parser("catalog", help="list the built-in models")
    cat.add_argument("--format", choices=("text", "json"), default="text")

    ser = sub.add_parser("serialize", help="write a catalog model as an algebra file")
    ser.add_argument("--model", required=True)
    ser.add_argument("--param", action="append")
    ser.add_argument("--out", help="output path (default stdout)")

    args = parser.parse_args(argv)

    try:
        if args.command == "catalog":
            if args.format == "json":
                text = json.dumps({"models": MODEL_NAMES}, sort_keys=True, indent=2) + "\n"
            else:
                text = "\n".join(MODEL_NAMES) + "\n"
            sys.stdout.write(text)
            return 0
        if args.command == "serialize":
            params = _parse_params(args.param)
            obj = build_model(args.model, params)
            if isinstance(obj, tuple):
                raise InputError("the mutation triple cannot be serialized as a single file")
            doc = serialize_algebra(obj)
            doc["name"] = f"{args.model}" + ("_" + "_".join(f"{k}{v}" for k, v in sorted(params.items())) if params else "")
            text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0

        obj, input_desc = _load_input(args)
        options = {
            "input": input_desc,
            "codiff": args.codiff,
            "prolong": args.prolong,
            "prolong_cap": args.prolong_cap,
            "degrees": _parse_degrees(args.degrees),
            "demo_normalize": args.demo_normalize,
            "seed": args.seed,
            "format": args.format,
        }
        options = {k: v for k, v in options.items() if v is not None and v is not False}
        options.setdefault("seed", args.seed)
        report = run_pipeline(obj, options)
        text = emit(report, args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0 if report["summary"]["passed"] else 1
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
