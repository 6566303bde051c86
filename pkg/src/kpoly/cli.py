"""Command-line front end: JSON documents in, verification reports out.

Exit codes: 0 when every check passes, 1 when a mathematical check fails
(the report carries a witness), 2 for unreadable or schema-invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
from gmpy2 import mpq

from kpoly.conventions import ledger
from kpoly.errors import (
    AxiomError,
    DegenerateError,
    DimensionError,
    HypothesisError,
    KPolyError,
    NotSkewError,
    RejectionError,
    Verdict,
)
from kpoly.liealgebra import LieAlgebra, jacobi_check
from kpoly.liepoisson import (
    AlgebroidPointData,
    coadjoint_leaf_match,
    gstar_k,
    gstar_k_integrability,
    structure_equations_check,
    whitney_commutator_check,
    whitney_generator_fields,
    whitney_point,
)
from kpoly.polypoisson import (
    characteristic_distribution,
    check_axioms,
    dirac_type,
    from_polysymplectic,
    leaf_form,
    pairing_matrix,
)
from kpoly.polysymplectic import (
    PolyForm,
    canonical_covelocity,
    flat,
    is_polysymplectic,
    k_coadjoint_polyform,
)
from kpoly.reduction import (
    ReductionProblem,
    check_hypotheses,
    cotangent_group,
    covelocity_principal_local,
    match_signs,
    random_rational_mus,
    reduce_point,
)
from kpoly.subspaces import (
    Scalar,
    Subspace,
    arrays_equal,
    canonicalize,
    rank,
    to_matrix,
)

EXACT_COMMANDS = {"whitney", "gstar", "integrability", "orbit-form", "cotangent-group",
                  "principal-local", "crosscheck"}
FIXTURE_ALGEBRAS = ("so3", "heisenberg3", "abelian3", "sl2")


class InputError(KPolyError):
    """Malformed, unreadable or schema-invalid input (exit code 2)."""


# ---------------------------------------------------------------- rendering

def to_plain(x):
    """Convert library values to JSON-ready data with deterministic text."""
    if isinstance(x, Verdict):
        return {"name": x.name, "passed": bool(x.passed), "detail": x.detail,
                "witness": to_plain(x.witness)}
    if isinstance(x, Subspace):
        return {"ambient_dim": x.ambient_dim, "dim": x.dim, "basis": to_plain(x.basis)}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (Fraction, type(mpq(0)))):
        return str(x) if x.denominator != 1 else int(x.numerator)
    if isinstance(x, (float, np.floating)):
        v = round(float(x), 12)
        return 0.0 if v == 0 else v
    if isinstance(x, np.ndarray):
        return [to_plain(v) for v in x] if x.ndim else to_plain(x.item())
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if x is None or isinstance(x, str):
        return x
    return str(x)


@dataclass
class Report:
    command: dict
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, verdict: Verdict, name: str | None = None):
        entry = to_plain(verdict)
        if name:
            entry["name"] = name
        self.checks.append(entry)
        return verdict

    def add_bool(self, name: str, passed: bool, detail: str = "", witness=None):
        return self.add(Verdict(name, bool(passed), witness=witness, detail=detail))

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "conventions": ledger(),
            "checks": self.checks,
            "results": to_plain(self.results),
            "notes": self.notes,
            "status": "pass" if self.passed else "fail",
            "exit_code": self.exit_code,
        }

    def render(self, fmt: str) -> str:
        data = self.as_dict()
        if fmt == "json":
            return json.dumps(data, sort_keys=True, indent=2) + "\n"
        return render_text(data)


def render_text(data: dict) -> str:
    cmd = data["command"]
    lines = [f"kpoly {cmd['subcommand']}: {data['status'].upper()} (exit {data['exit_code']})"]
    conv = data["conventions"]
    lines.append(f"conventions: flat {conv['flat']}; ad* {conv['ad_star']}")
    lines.append("sigma: " + ", ".join(f"{k}={v:+d}" for k, v in sorted(conv["sigma"].items())))
    for c in data["checks"]:
        mark = "PASS" if c["passed"] else "FAIL"
        detail = f" - {c['detail']}" if c["detail"] else ""
        lines.append(f"[{mark}] {c['name']}{detail}")
        if c["witness"] is not None:
            lines.append(f"       witness: {json.dumps(c['witness'], sort_keys=True)}")
    for note in data["notes"]:
        lines.append(f"note: {note}")
    if data["results"]:
        lines.append("results:")
        for key in sorted(data["results"]):
            lines.append(f"  {key}: {json.dumps(data['results'][key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------- input

def _schema() -> dict:
    text = resources.files("kpoly").joinpath("schema/input.schema.json").read_text()
    return json.loads(text)


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("kpoly").joinpath(f"fixtures/{name}.json")))


def load_document(source: str) -> tuple[dict, str]:
    """Parse and validate a document; returns it with a display name."""
    if source == "-":
        text, label = sys.stdin.read(), "<stdin>"
    else:
        path = Path(source)
        if not path.exists() and "/" not in source and fixture_path(source).exists():
            path = fixture_path(source)
        label = path.name
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{source}: cannot read input ({exc.strerror})") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{label}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        where = "/".join(str(p) for p in error.absolute_path) or "<document>"
        raise InputError(f"{label}: field {where}: {error.message}")
    return doc, label


def resolve_scalar(args, doc: dict | None) -> Scalar:
    mode = "exact" if args.subcommand in EXACT_COMMANDS else "float"
    epsilon = 1e-9
    if doc and "scalar" in doc:
        mode = doc["scalar"].get("mode", mode)
        epsilon = doc["scalar"].get("epsilon", epsilon)
    if args.scalar:
        mode = args.scalar
    if args.epsilon is not None:
        epsilon = args.epsilon
    try:
        return Scalar(mode, epsilon)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _payload(doc: dict, kind: str, label: str) -> dict:
    if kind not in doc["payload"]:
        found = next(iter(doc["payload"]))
        raise InputError(f"{label}: expected a {kind} payload, found {found}")
    return doc["payload"][kind]


def _matrix(data, scalar: Scalar, what: str) -> np.ndarray:
    try:
        arr = to_matrix(data, scalar)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: {exc}") from exc
    return arr


def parse_rational_matrix(text: str, scalar: Scalar, what: str) -> np.ndarray:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError(f"{what}: expected a list of rows")
    return _matrix(data, scalar, what)


def parse_lie_algebra(obj: dict, scalar: Scalar) -> LieAlgebra:
    try:
        return LieAlgebra.from_brackets(obj["n"], [tuple(t) for t in obj["brackets"]], scalar,
                                        obj.get("name", ""))
    except (DimensionError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"lie_algebra: {exc}") from exc


def load_algebra(ref, scalar: Scalar) -> tuple[LieAlgebra, str]:
    if isinstance(ref, dict):
        return parse_lie_algebra(ref, scalar), ref.get("name", "inline")
    doc, label = load_document(ref)
    obj = _payload(doc, "lie_algebra", label)
    return parse_lie_algebra(obj, scalar), obj.get("name", label)


def parse_polyform(obj: dict, scalar: Scalar) -> PolyForm:
    mats = obj["matrices"]
    if len(mats) != obj["k"]:
        raise InputError(f"polyform: k = {obj['k']} but {len(mats)} matrices given")
    arrs = [_matrix(m, scalar, "polyform.matrices") for m in mats]
    for a, arr in enumerate(arrs):
        if arr.shape != (obj["m"], obj["m"]):
            raise InputError(f"polyform: matrix {a} must be {obj['m']} x {obj['m']}")
    try:
        return PolyForm.from_matrices(arrs, scalar)
    except (NotSkewError, DimensionError) as exc:
        raise InputError(f"polyform: {exc}") from exc


def parse_subspace(rows, ambient: int, scalar: Scalar, what: str) -> Subspace:
    arr = _matrix(rows, scalar, what) if rows else scalar.zeros((0, ambient))
    if arr.shape[1] != ambient:
        raise InputError(f"{what}: vectors must have length {ambient}")
    return canonicalize(list(arr), scalar, ambient)


def parse_algebroid(obj: dict, scalar: Scalar) -> AlgebroidPointData:
    try:
        return AlgebroidPointData.build(obj["m"], obj["n"], obj.get("rho"), obj.get("drho"),
                                        obj.get("C"), obj.get("dC"), scalar)
    except (DimensionError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"algebroid_point: {exc}") from exc


# ---------------------------------------------------------------- commands

def _axioms(report: Report, pp, prefix: str = ""):
    verdict = check_axioms(pp)
    for name in ("i", "antisymmetry", "ii"):
        report.add(verdict.data[name], name=f"{prefix}axiom-{name}")
    return verdict


def _structure(pp) -> dict:
    return {"S": pp.S, "sharp": pp.sharp, "m": pp.m, "k": pp.k,
            "integrability_status": pp.integrability_status}


def cmd_check_polysymplectic(args, report: Report):
    doc, label = load_document(args.input)
    scalar = resolve_scalar(args, doc)
    omega = parse_polyform(_payload(doc, "polyform", label), scalar)
    report.add(is_polysymplectic(omega))
    report.results.update({"m": omega.m, "k": omega.k, "flat": flat(omega),
                           "flat_rank": rank(flat(omega), scalar)})


def cmd_from_polysymplectic(args, report: Report):
    doc, label = load_document(args.input)
    scalar = resolve_scalar(args, doc)
    omega = parse_polyform(_payload(doc, "polyform", label), scalar)
    pp = from_polysymplectic(omega)
    _axioms(report, pp)
    fl = flat(omega)
    report.add_bool("sharp-inverts-flat",
                    arrays_equal(pp.sharp @ np.array([pp.S.coordinates(c) for c in fl.T]).T,
                                 scalar.eye(omega.m), scalar))
    leaf = leaf_form(pp)
    report.results.update(_structure(pp))
    report.results.update({"pairing": pairing_matrix(pp),
                           "characteristic_distribution": characteristic_distribution(pp),
                           "leaf_form": leaf.form.forms})


def cmd_dirac(args, report: Report):
    doc, label = load_document(args.input)
    scalar = resolve_scalar(args, doc)
    obj = _payload(doc, "polyform", label)
    if "distribution" not in obj:
        raise InputError(f"{label}: the dirac command needs polyform.distribution")
    omega = parse_polyform(obj, scalar)
    D = parse_subspace(obj["distribution"], omega.m, scalar, "distribution")
    pp = dirac_type(omega, D)
    _axioms(report, pp)
    r = D.dim
    report.add_bool("rank", pp.S.dim == r + (omega.m - r) * omega.k,
                    detail=f"dim S = {pp.S.dim}, r + (m - r) k = {r + (omega.m - r) * omega.k}")
    report.add_bool("characteristic-distribution", characteristic_distribution(pp) == D)
    report.results.update(_structure(pp))
    report.results["D"] = D


def _fiber_point(args, obj: dict, scalar: Scalar, n: int) -> np.ndarray:
    if args.mu:
        pt = parse_rational_matrix(args.mu, scalar, "--mu")
    elif "point" in obj:
        pt = _matrix(obj["point"], scalar, "algebroid_point.point")
    else:
        k = args.k or 1
        pt = scalar.zeros((k, n))
    if args.k and pt.shape[0] != args.k:
        raise InputError(f"point has {pt.shape[0]} covectors but --k is {args.k}")
    if pt.shape[1] != n:
        raise InputError(f"point covectors must have length {n}")
    return pt


def cmd_whitney(args, report: Report):
    doc, label = load_document(args.input)
    scalar = resolve_scalar(args, doc)
    obj = _payload(doc, "algebroid_point", label)
    d = parse_algebroid(obj, scalar)
    pt = _fiber_point(args, obj, scalar, d.n)
    k = pt.shape[0]
    structure = report.add(structure_equations_check(d))
    if not structure:
        return
    pp = whitney_point(d, pt)
    _axioms(report, pp)
    report.add_bool("rank", pp.S.dim == d.m * k + d.n,
                    detail=f"dim S = {pp.S.dim}, m k + n = {d.m * k + d.n}")
    if scalar.exact:
        report.add(whitney_commutator_check(d, pt))
    fields = whitney_generator_fields(d, pt)
    gens = [f.value for f in fields["vertical"].values()] + \
           [f.value for f in fields["horizontal"].values()]
    span = canonicalize(gens, scalar, pp.m)
    report.add_bool("generators-span-distribution", span == characteristic_distribution(pp))
    report.results.update(_structure(pp))
    if args.crosscheck == "from-polysymplectic":
        tangent = AlgebroidPointData.tangent(d.m, scalar)
        if d.m != d.n or not all(arrays_equal(getattr(d, a), getattr(tangent, a), scalar)
                                 for a in ("rho", "drho", "C", "dC")):
            raise InputError("from-polysymplectic crosscheck needs tangent-bundle data")
        target = from_polysymplectic(canonical_covelocity(d.m, k, scalar))
        _sign_check(report, "crosscheck-from-polysymplectic", pp, target,
                    "whitney_tangent_vs_flat_inverse")
    elif args.crosscheck == "gstar":
        if d.m != 0:
            raise InputError("gstar crosscheck needs an algebroid over a point (m = 0)")
        g = LieAlgebra(d.n, d.C, scalar)
        _sign_check(report, "crosscheck-gstar", pp, gstar_k(g, k, pt), "whitney_algebra_vs_gstar")
    elif args.crosscheck:
        raise InputError(f"unknown crosscheck target {args.crosscheck!r} for whitney")


def _sign_check(report: Report, name: str, left, right, ledger_key: str):
    signs = match_signs(left, right)
    recorded = ledger()["sigma"][ledger_key]
    report.add_bool(name, bool(signs), detail=f"equal S; sharp matches for sigma in {sorted(signs)}"
                    if signs else "structures differ")
    report.results.setdefault("sigma", {})[ledger_key] = {"observed": sorted(signs),
                                                           "recorded": recorded}
    return signs


def _algebra_args(args, doc_ref=None) -> tuple[LieAlgebra, str, Scalar]:
    ref = args.algebra or doc_ref
    if ref is None:
        raise InputError("an algebra is required (--algebra NAME|FILE)")
    scalar = resolve_scalar(args, None)
    g, name = load_algebra(ref, scalar)
    return g, name, scalar


def _mus(args, g: LieAlgebra, scalar: Scalar, k: int | None) -> np.ndarray:
    if args.mu:
        mus = parse_rational_matrix(args.mu, scalar, "--mu")
    else:
        import random
        mus = to_matrix(random_rational_mus(random.Random(args.seed), k or 1, g.n), scalar)
    if k is not None and mus.shape[0] != k:
        raise InputError(f"--mu has {mus.shape[0]} rows but --k is {k}")
    if mus.shape[1] != g.n:
        raise InputError(f"--mu rows must have length {g.n}")
    return mus


def cmd_gstar(args, report: Report):
    if args.input:
        doc, label = load_document(args.input)
        obj = _payload(doc, "gstar", label)
        scalar = resolve_scalar(args, doc)
        g, name = load_algebra(obj["algebra_ref"], scalar)
        k = obj["k"]
        mus = _matrix(obj["mu"], scalar, "gstar.mu")
        if mus.shape != (k, g.n):
            raise InputError(f"gstar.mu must be {k} x {g.n}")
    else:
        g, name, scalar = _algebra_args(args)
        mus = _mus(args, g, scalar, args.k)
        k = mus.shape[0]
    report.command["algebra"] = name
    pp = gstar_k(g, k, mus)
    _axioms(report, pp)
    if report.add(jacobi_check(g)):
        orbit = k_coadjoint_polyform(g, mus)
        report.add_bool("distribution-is-orbit-tangent",
                        characteristic_distribution(pp) == orbit.tangent)
    report.results.update(_structure(pp))
    report.results["mu"] = mus
    report.results["characteristic_distribution"] = characteristic_distribution(pp)
    if args.crosscheck == "integrability":
        report.add(gstar_k_integrability(g, k))
    elif args.crosscheck == "leaf":
        report.add(coadjoint_leaf_match(g, k, mus))
    elif args.crosscheck == "cotangent-group":
        red = cotangent_group(g, k, mus)
        _sign_check(report, "crosscheck-cotangent-group", red.reduced.point, pp,
                    "cotangent_group_vs_gstar")
    elif args.crosscheck == "whitney":
        w = whitney_point(AlgebroidPointData.from_lie_algebra(g), mus)
        _sign_check(report, "crosscheck-whitney", w, pp, "whitney_algebra_vs_gstar")
    elif args.crosscheck:
        raise InputError(f"unknown crosscheck target {args.crosscheck!r} for gstar")


def cmd_integrability(args, report: Report):
    g, name, scalar = _algebra_args(args, args.input)
    if not scalar.exact:
        raise InputError("integrability requires --scalar exact")
    report.command["algebra"] = name
    report.add(jacobi_check(g))
    for k in ([args.k] if args.k else [1, 2, 3]):
        report.add(gstar_k_integrability(g, k), name=f"integrability-k{k}")


def cmd_orbit_form(args, report: Report):
    g, name, scalar = _algebra_args(args, args.input)
    report.command["algebra"] = name
    mus = _mus(args, g, scalar, args.k)
    k = mus.shape[0]
    verdict = jacobi_check(g)
    report.add(verdict)
    if not verdict:
        return
    orbit = k_coadjoint_polyform(g, mus)
    report.add(is_polysymplectic(orbit.form) if orbit.tangent.dim else
               Verdict("polysymplectic", True, detail="orbit is a point"))
    match = coadjoint_leaf_match(g, k, mus)
    report.add(match)
    values = {f"{i},{j}": orbit.on_generators(g.basis(i), g.basis(j))
              for i in range(g.n) for j in range(i + 1, g.n)}
    report.results.update({"mu": mus, "tangent": orbit.tangent, "form": orbit.form.forms,
                           "generator": orbit.generator, "generator_pair_values": values})


def cmd_reduce(args, report: Report):
    doc, label = load_document(args.input)
    scalar = resolve_scalar(args, doc)
    obj = _payload(doc, "reduction", label)
    omega = parse_polyform(obj["polyform"], scalar)
    W = parse_subspace(obj["W"], omega.m, scalar, "W")
    samples = []
    for i, s in enumerate(obj.get("samples", [])):
        om = parse_polyform(s["polyform"], scalar)
        samples.append((om, parse_subspace(s["W"], om.m, scalar, f"samples/{i}/W")))
    try:
        rp = ReductionProblem(omega, W, tuple(samples))
    except DimensionError as exc:
        raise InputError(f"reduction: {exc}") from exc
    hyps = check_hypotheses(rp)
    report.add(hyps.data["hyp_i"])
    report.add(hyps.data["hyp_ii"])
    if not hyps:
        return
    red = reduce_point(rp)
    report.add(red.image_identity)
    _axioms(report, red.point)
    report.results.update({"quotient_coordinates": list(red.quotient.kept),
                           "hatS": red.hatS, "hatsharp": red.hatsharp})


def cmd_cotangent_group(args, report: Report):
    g, name, scalar = _algebra_args(args, args.input)
    report.command["algebra"] = name
    if not report.add(jacobi_check(g)):
        return
    k = args.k or 1
    mus = _mus(args, g, scalar, k)
    result = cotangent_group(g, k, mus, n_random=args.samples, seed=args.seed)
    red = result.reduced
    report.add(red.hypotheses.data["hyp_i"])
    report.add(red.hypotheses.data["hyp_ii"])
    report.add(red.image_identity)
    _axioms(report, red.point)
    for v in result.diagnostics.values():
        report.add(v)
    report.results.update({"mu": mus, "hatS": red.hatS, "hatsharp": red.hatsharp})
    if args.crosscheck == "gstar":
        _sign_check(report, "crosscheck-gstar", red.point, gstar_k(g, k, mus),
                    "cotangent_group_vs_gstar")
    elif args.crosscheck:
        raise InputError(f"unknown crosscheck target {args.crosscheck!r} for cotangent-group")


def cmd_principal_local(args, report: Report):
    g, name, scalar = _algebra_args(args, args.input)
    report.command["algebra"] = name
    if not report.add(jacobi_check(g)):
        return
    k = args.k or 1
    mus = parse_rational_matrix(args.mu, scalar, "--mu") if args.mu else None
    verdict = covelocity_principal_local(g, args.m_base, k, mus=mus, seed=args.seed,
                                         require_frame=args.frame)
    if "image_identity" in verdict.data:
        report.add(verdict.data["image_identity"])
    report.add(verdict)
    report.notes.append("comparison target is the trivialized Atiyah model: anchor = base "
                        "projection, brackets = structure constants of g")
    signs = verdict.data.get("signs", [])
    report.results["sigma"] = {"principal_local_vs_whitney": {
        "observed": signs, "recorded": ledger()["sigma"]["principal_local_vs_whitney"]}}
    if "reduced" in verdict.data:
        red = verdict.data["reduced"]
        report.results.update({"hatS": red.hatS, "hatsharp": red.hatsharp})
    if "group_signs" in verdict.data:
        report.add_bool("base-free-matches-cotangent-group", 1 in verdict.data["group_signs"])


def cmd_crosscheck(args, report: Report):
    """Run every cross-construction comparison and report the observed signs."""
    import random

    scalar = resolve_scalar(args, None)
    names = [args.algebra] if args.algebra else list(FIXTURE_ALGEBRAS)
    ks = [args.k] if args.k else [1, 2, 3]
    rng = random.Random(args.seed)
    observed: dict = {}

    def record(key, signs):
        observed[key] = observed.get(key, {1, -1}) & set(signs)

    for ref in names:
        g, name = load_algebra(ref, scalar)
        for k in ks:
            for _ in range(args.samples):
                mus = to_matrix(random_rational_mus(rng, k, g.n), scalar)
                gs = gstar_k(g, k, mus)
                red = cotangent_group(g, k, mus)
                record("cotangent_group_vs_gstar", match_signs(red.reduced.point, gs))
                w = whitney_point(AlgebroidPointData.from_lie_algebra(g), mus)
                record("whitney_algebra_vs_gstar", match_signs(w, gs))
            v = covelocity_principal_local(g, 1, k, seed=rng.randrange(10**6))
            record("principal_local_vs_whitney", v.data["signs"])
    for m in (1, 2, 3):
        for k in ks:
            pt = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(k)]
            w = whitney_point(AlgebroidPointData.tangent(m, scalar), pt)
            target = from_polysymplectic(canonical_covelocity(m, k, scalar))
            record("whitney_tangent_vs_flat_inverse", match_signs(w, target))
    recorded = ledger()["sigma"]
    for key in sorted(observed):
        signs = sorted(observed[key])
        report.add_bool(f"sign-{key}", recorded[key] in signs,
                        detail=f"observed {signs}, recorded {recorded[key]:+d}")
    report.results["observed_sigma"] = {k: sorted(v) for k, v in observed.items()}
    distinct = {recorded[k] for k in observed}
    report.notes.append("relative signs differ between comparison families"
                        if len(distinct) > 1 else "one relative sign across all comparisons")


COMMANDS = {
    "check-polysymplectic": cmd_check_polysymplectic,
    "from-polysymplectic": cmd_from_polysymplectic,
    "dirac": cmd_dirac,
    "whitney": cmd_whitney,
    "gstar": cmd_gstar,
    "integrability": cmd_integrability,
    "orbit-form": cmd_orbit_form,
    "reduce": cmd_reduce,
    "cotangent-group": cmd_cotangent_group,
    "principal-local": cmd_principal_local,
    "crosscheck": cmd_crosscheck,
}

NEEDS_INPUT = {"check-polysymplectic", "from-polysymplectic", "dirac", "whitney", "reduce"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", nargs="?" if name not in NEEDS_INPUT else None,
                       help="input JSON document, bundled fixture name, or - for stdin")
        p.add_argument("--scalar", choices=["exact", "float"])
        p.add_argument("--epsilon", type=float)
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--crosscheck")
        p.add_argument("--samples", type=int, default=0 if name != "crosscheck" else 2)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--algebra", help="bundled algebra name or lie_algebra JSON file")
        p.add_argument("--k", type=int)
        p.add_argument("--mu", help='JSON rows of covectors, e.g. "[[0,0,1],[1,0,0]]"')
        p.add_argument("--m-base", dest="m_base", type=int, default=0)
        p.add_argument("--frame", action="store_true", help="require a frame point")
    return parser


def _echo(args) -> dict:
    out = {"subcommand": args.subcommand}
    for key in ("input", "algebra", "k", "mu", "crosscheck", "m_base", "samples", "seed",
                "scalar", "frame"):
        value = getattr(args, key, None)
        if value in (None, False):
            continue
        if key in ("input", "algebra") and value != "-":
            value = Path(value).name
        out[key] = value
    return out


def run(argv=None) -> tuple[int, str, str]:
    """Execute a command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), "", ""
    if args.k is not None and args.k < 1:
        return 2, "", "error: --k must be positive\n"
    if args.m_base < 0:
        return 2, "", "error: --m-base must be non-negative\n"
    report = Report(_echo(args))
    try:
        COMMANDS[args.subcommand](args, report)
    except InputError as exc:
        return 2, "", f"error: {exc}\n"
    except (DegenerateError, RejectionError) as exc:
        report.add(Verdict(type(exc).__name__, False, witness=exc.witness, detail=str(exc)))
    except (AxiomError, HypothesisError) as exc:
        report.add(exc.verdict or Verdict(type(exc).__name__, False, detail=str(exc)))
    return report.exit_code, report.render(args.format), ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
