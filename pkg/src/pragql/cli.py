"""Command-line front end.

Exit codes: 0 success, 2 formula/usage error, 3 model error,
4 axiom or internal-consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import axioms as ax
from .errors import ConsistencyError, DimensionError, DomainError, FormulaSyntaxError, ModelError
from .extension import StateRef
from .formula import enumerate_formulas, parse, property_names, to_text
from .model import PropertyModel, classify, load_model, standard_model
from .pragmatics import decide, evaluate, p_invalid, p_valid, pragmatic_extension
from .quotient import build_quotient, check_isomorphism, to_dot, to_json_dict
from .subspace import complement, equals, includes, join, meet

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MODEL = 3
EXIT_FAILURE = 4

MAX_UNIVERSE = 100_000


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    model_path: str = "qubit"
    tolerance: float | None = None
    seed: int = 0
    max_depth: int = 3
    output_format: str = "text"

    def __post_init__(self):
        if self.tolerance is not None and not (0 < self.tolerance <= 1e-3):
            raise UsageError(f"--tol must lie in (0, 1e-3], got {self.tolerance}")
        if not 0 <= self.max_depth <= 6:
            raise UsageError(f"--depth must lie in 0..6, got {self.max_depth}")
        if self.output_format not in ("text", "json", "dot"):
            raise UsageError(f"unknown --format {self.output_format!r}")


def resolve_model(cfg: RunConfig) -> PropertyModel:
    path = Path(cfg.model_path)
    if path.exists():
        m = load_model(path)
    elif cfg.model_path in ("qubit", "qutrit"):
        m = standard_model(cfg.model_path)
    else:
        raise ModelError(f"no model file {cfg.model_path!r} (built-ins: qubit, qutrit)")
    if cfg.tolerance is not None:
        m = PropertyModel(m.dim, m.properties, cfg.tolerance, name=m.name)
    return m


def parse_state(m: PropertyModel, spec: str) -> StateRef:
    """``vector:[re,im;re,im;...]`` or ``ray-of:<property>``."""
    if spec.startswith("ray-of:"):
        return m.ray_state(spec[len("ray-of:"):])
    if spec.startswith("vector:"):
        body = spec[len("vector:"):].strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        entries = []
        try:
            for chunk in body.split(";"):
                parts = [float(x) for x in chunk.split(",")]
                if len(parts) == 1:
                    parts.append(0.0)
                if len(parts) != 2:
                    raise ValueError(chunk)
                entries.append(complex(*parts))
        except ValueError:
            raise UsageError(f"bad vector entry in {spec!r}") from None
        if len(entries) != m.dim:
            raise ModelError(f"state has {len(entries)} entries, model is C^{m.dim}")
        try:
            return StateRef.from_vector(entries)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError(f"state spec must start with 'vector:' or 'ray-of:', got {spec!r}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _vec(v) -> list:
    return [[round(float(z.real), 12), round(float(z.imag), 12)] for z in v]


def cmd_eval(cfg: RunConfig, m: PropertyModel, formula_text: str, state_spec: str) -> tuple[int, str]:
    f = parse(formula_text)
    s = parse_state(m, state_spec)
    value = evaluate(m, f, s)
    ext = pragmatic_extension(m, f)
    cls = classify(m, s)
    statuses = {n: cls.status(n) for n in sorted(property_names(f))}
    if cfg.output_format == "json":
        return EXIT_OK, _dump({
            "formula": to_text(f),
            "state": _vec(s.vector),
            "value": str(value),
            "extension_dims": ext.dims,
            "classification": statuses,
        })
    lines = [f"formula: {to_text(f)}", f"value: {value}",
             f"extension: {len(ext)} component(s), dims {ext.dims}"]
    lines += [f"{n}: {st}" for n, st in statuses.items()]
    return EXIT_OK, "\n".join(lines)


def validity_of(m, f) -> str:
    if p_valid(m, f):
        return "p-valid"
    if p_invalid(m, f):
        return "p-invalid"
    return "contingent"


def cmd_validity(cfg: RunConfig, m: PropertyModel, formula_text: str) -> tuple[int, str]:
    f = parse(formula_text)
    verdict = validity_of(m, f)
    if cfg.output_format == "json":
        return EXIT_OK, _dump({"formula": to_text(f), "validity": verdict})
    return EXIT_OK, verdict


def cmd_decide(cfg: RunConfig, m: PropertyModel, formula_text: str) -> tuple[int, str]:
    f = parse(formula_text)
    rep = decide(m, f)
    if cfg.output_format == "json":
        d = rep.to_dict()
        d["formula"] = to_text(f)
        return EXIT_OK, _dump(d)
    lines = [f"formula: {to_text(f)}",
             f"decidable: {'yes' if rep.decidable else 'no'}",
             f"extension dims: {rep.witness_extension.dims}"]
    for t in rep.criterion_trace:
        crit = t.criterion or "--"
        lines.append(f"  {crit:3} {'closed' if t.decidable else 'open  '} {t.formula}  ({t.note})")
    return EXIT_OK, "\n".join(lines)


def cmd_quotient(cfg: RunConfig, m: PropertyModel, props, fragment: str) -> tuple[int, str]:
    names = props or m.names
    for n in names:
        m.subspace(n)
    universe = enumerate_formulas(names, cfg.max_depth, fragment, limit=MAX_UNIVERSE)
    if fragment == "full":
        universe = [f for f in universe if decide(m, f).decidable]
    q = build_quotient(m, universe, adjoin_elementary=True, require_phi_ad=(fragment == "phi_AD"))
    report = check_isomorphism(m, q)
    if cfg.output_format == "dot":
        out = to_dot(q, name=m.name)
    elif cfg.output_format == "json":
        d = to_json_dict(q)
        d["isomorphism"] = report.to_dict()
        d["universe_size"] = len(universe)
        out = _dump(d)
    else:
        lines = [f"universe: {len(universe)} formulas, {len(q.classes)} classes"]
        for i, c in enumerate(q.classes):
            lines.append(f"  [{i}] dim {c.dim}  {to_text(c.representative)}  ({len(c.members)} members)")
        lines.append(f"isomorphism check: {'passed' if report.passed else 'FAILED'}")
        lines += [f"  {p}" for p in report.problems]
        out = "\n".join(lines)
    return (EXIT_OK if report.passed else EXIT_FAILURE), out


def cmd_axioms(cfg: RunConfig, m: PropertyModel, trials: int) -> tuple[int, str]:
    results = ax.verify_axioms(m, trials=trials, seed=cfg.seed)
    counter = [
        ax.find_tertium_counterexample(m, seed=cfg.seed),
        ax.find_nonclosed_disjunction(m, seed=cfg.seed),
        ax.find_distributivity_counterexample(m),
    ]
    failures = ax.total_failures(results)
    code = EXIT_FAILURE if failures else EXIT_OK
    if cfg.output_format == "json":
        return code, _dump({
            "seed": cfg.seed,
            "trials": trials,
            "model": m.name,
            "schemata": [r.to_dict() for r in results],
            "counterexamples": [c.to_dict() for c in counter],
        })
    lines = [f"seed: {cfg.seed}", f"model: {m.name}"]
    for r in results:
        lines.append(
            f"{r.schema_id}: {r.instances_checked} instances, {r.failure_count} invalid; "
            f"rule reading {r.premise_valid} applicable, {r.rule_failures} failed"
        )
        for fl in r.failures[:1]:
            lines.append(f"    e.g. arguments {', '.join(fl['args'])}; extension dims {fl['extension_dims']}")
    for c in counter:
        if c.found:
            shown = {k: v for k, v in c.witnesses.items() if not isinstance(v, np.ndarray)}
            lines.append(f"counterexample {c.kind}: {shown}")
        else:
            lines.append(f"counterexample {c.kind}: none found")
    return code, "\n".join(lines)


def cmd_model_check(cfg: RunConfig, m: PropertyModel) -> tuple[int, str]:
    """Summarize the model and re-check lattice laws on its properties."""
    tol = m.tolerance
    subs = m.properties
    names = m.names
    problems = []
    for a in names:
        va = subs[a]
        if not equals(complement(complement(va, tol), tol), va, tol):
            problems.append(f"double complement fails for {a}")
        for b in names:
            vb = subs[b]
            lhs = complement(join(va, vb, tol), tol)
            rhs = meet(complement(va, tol), complement(vb, tol), tol)
            if not equals(lhs, rhs, tol):
                problems.append(f"De Morgan fails for {a}, {b}")
            if includes(vb, va, tol):
                if not equals(vb, join(va, meet(vb, complement(va, tol), tol), tol), tol):
                    problems.append(f"orthomodular law fails for {a} <= {b}")
    tertium = ax.find_tertium_counterexample(m, seed=cfg.seed)
    code = EXIT_FAILURE if problems else EXIT_OK
    summary = {
        "model": m.name,
        "dim": m.dim,
        "tolerance": m.tolerance,
        "properties": {n: subs[n].dim for n in names},
        "problems": problems,
        "non_classical": tertium.found,
        "seed": cfg.seed,
    }
    if cfg.output_format == "json":
        return code, _dump(summary)
    lines = [f"model: {m.name} (C^{m.dim}, tolerance {m.tolerance:g})", f"seed: {cfg.seed}"]
    lines += [f"  {n}: dim {subs[n].dim}" for n in names]
    lines.append("lattice laws: " + ("ok" if not problems else f"{len(problems)} problem(s)"))
    lines += [f"  {p}" for p in problems]
    lines.append(f"tertium non datur fails somewhere: {'yes' if tertium.found else 'no'}")
    return code, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="qubit",
                        help="model JSON file, or built-in 'qubit' / 'qutrit' (default qubit)")
    common.add_argument("--tol", type=float, default=None, help="override the model tolerance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--format", default="text", choices=("text", "json", "dot"))

    parser = argparse.ArgumentParser(prog="pragql", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="justification value at a state")
    p.add_argument("formula")
    p.add_argument("--state", required=True, help="vector:[re,im;...] or ray-of:<property>")

    p = sub.add_parser("validity", parents=[common], help="p-valid / p-invalid / contingent")
    p.add_argument("formula")

    p = sub.add_parser("decide", parents=[common], help="p-decidability with criterion trace")
    p.add_argument("formula")

    p = sub.add_parser("quotient", parents=[common], help="quotient lattice of a formula universe")
    p.add_argument("--props", default=None, help="comma-separated property names (default: all)")
    p.add_argument("--fragment", default="phi_AD", choices=("phi_AD", "full"))

    p = sub.add_parser("axioms", parents=[common], help="verify axiom schemata A1-A9")
    p.add_argument("--trials", type=int, default=200)

    sub.add_parser("model-check", parents=[common], help="summarize and sanity-check a model")
    return parser


def run(argv=None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.model, args.tol, args.seed, args.depth, args.format)
        m = resolve_model(cfg)
        if args.command == "eval":
            return cmd_eval(cfg, m, args.formula, args.state)
        if args.command == "validity":
            return cmd_validity(cfg, m, args.formula)
        if args.command == "decide":
            return cmd_decide(cfg, m, args.formula)
        if args.command == "quotient":
            props = [p.strip() for p in args.props.split(",")] if args.props else None
            return cmd_quotient(cfg, m, props, args.fragment)
        if args.command == "axioms":
            return cmd_axioms(cfg, m, args.trials)
        return cmd_model_check(cfg, m)
    except (FormulaSyntaxError, UsageError) as exc:
        return EXIT_USAGE, f"error: {exc}"
    except (ModelError, DimensionError) as exc:
        return EXIT_MODEL, f"model error: {exc}"
    except ConsistencyError as exc:
        return EXIT_FAILURE, f"consistency failure: {exc}"
    except ValueError as exc:
        return EXIT_USAGE, f"error: {exc}"


def main(argv=None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_FAILURE) else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
