"""Command-line surface: analysis, decisions, formula tools, sweeps.

Every subcommand is pure in its inputs: identical invocations produce
byte-identical reports.  Verdicts map to exit codes (0 normal, 1 not
normal, 2 inapplicable or error); nothing is conveyed only as prose.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .act import is_regular_act, regular_part
from .deciders import (
    build_counterexample,
    decide_class,
    idempotent_comparability,
    is_regularly_linearly_ordered,
    normality_criterion,
    regular_part_decomposition,
)
from .errors import SactsError
from .fileio import dumps_act, read_act, read_monoid, write_act
from .formula import (
    eliminate_variable,
    format_formula,
    is_copy_normal,
    parse_formula,
    solution_set,
)
from .monoid import (
    idempotents,
    is_commutative,
    is_linearly_ordered,
    left_ideal_leq_idempotent,
    principal_left_ideal,
    principal_right_ideal,
    right_ideal_leq_idempotent,
)
from .report import (
    act_payload,
    canonical_json,
    envelope,
    formula_payload,
    monoid_payload,
)
from .testkit import (
    ExperimentConfig,
    copy_normality_formula_sweep,
    run_antiadditivity_sweep,
    run_class_decision_sweep,
    run_normality_crossval,
    run_reduction_audit,
)


def _emit(payload: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = canonical_json(payload)
    else:
        lines: list[str] = []

        def render(prefix: str, value) -> None:
            if isinstance(value, dict):
                for key in sorted(value):
                    render(f"{prefix}{key}.", value[key])
            elif isinstance(value, list):
                lines.append(f"{prefix[:-1]}: {json.dumps(value, sort_keys=True)}")
            else:
                lines.append(f"{prefix[:-1]}: {value}")

        render("", payload)
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _remark_shortcut_agreement(m) -> bool:
    for a in range(m.order):
        for e in sorted(idempotents(m)):
            left = left_ideal_leq_idempotent(m, a, e)
            if left != (principal_left_ideal(m, a) <= principal_left_ideal(m, e)):
                return False
            right = right_ideal_leq_idempotent(m, a, e)
            if right != (principal_right_ideal(m, a) <= principal_right_ideal(m, e)):
                return False
    return True


def cmd_analyze(args) -> int:
    m = read_monoid(args.monoid)
    r = sorted(regular_part(m))
    body: dict = {
        "order": m.order,
        "elements": list(m.elements),
        "commutative": is_commutative(m),
        "idempotents": sorted(idempotents(m)),
        "regular_part": r,
        "ideal_shortcut_agrees": _remark_shortcut_agreement(m),
    }
    if r:
        ordered, witness = is_linearly_ordered(m, r)
        body["regular_part_linearly_ordered"] = ordered
        if witness:
            body["incomparable_pair"] = list(witness)
        decomp = regular_part_decomposition(m)
        body["regular_part_decomposition"] = {
            "outcome": decomp.outcome, **(decomp.witness or {})}
        rlo = is_regularly_linearly_ordered(m)
        body["orbit_ideals_chain"] = {"outcome": rlo.outcome,
                                      **(rlo.witness or {})}
        if is_commutative(m):
            idem = idempotent_comparability(m)
            body["idempotent_comparability"] = {"outcome": idem.outcome,
                                                **(idem.witness or {})}
    payload = envelope("analyze", {"monoid": monoid_payload(m)}, body)
    _emit(payload, args.format, args.out)
    return 0


def cmd_decide(args) -> int:
    m = read_monoid(args.monoid)
    verdict = decide_class(m)
    body: dict = {
        "outcome": verdict.outcome,
        "antiadditive": verdict.antiadditive,
        "regular_part": list(verdict.regular_part),
        "witness": verdict.witness,
    }
    if verdict.reason:
        body["reason"] = verdict.reason
    if verdict.counterexample is not None:
        cx = verdict.counterexample
        body["counterexample"] = {
            "kind": cx.kind,
            "act": act_payload(cx.act),
            "formula": formula_payload(cx.formula),
            "params": [list(cx.witness.params1), list(cx.witness.params2)],
        }
    payload = envelope("decide", {"monoid": monoid_payload(m)}, body)
    _emit(payload, args.format, args.out)
    return verdict.exit_code


def cmd_act_check(args) -> int:
    act = read_act(args.act)
    if args.monoid:
        m = read_monoid(args.monoid)
        if m != act.monoid:
            raise SactsError("act file is not over the given monoid")
    body: dict = {"size": act.size, "regular": is_regular_act(act)[0]}
    outcome_ok = True
    if args.oracle in ("criterion", "both"):
        verdict = normality_criterion(act)
        body["criterion"] = {"outcome": verdict.outcome,
                             **(verdict.witness or {})}
        outcome_ok = verdict.ok
    if args.oracle in ("bruteforce", "both"):
        violation = copy_normality_formula_sweep(
            act, object_width=2, param_width=2,
            bound_width=2, max_atoms=args.max_atoms)
        body["bruteforce"] = {
            "outcome": "holds" if violation is None else "fails",
        }
        if violation is not None:
            body["bruteforce"]["formula"] = formula_payload(violation.formula)
            body["bruteforce"]["params"] = [list(violation.params1),
                                            list(violation.params2)]
        outcome_ok = violation is None
    if args.oracle == "both":
        agree = body["criterion"]["outcome"] == body["bruteforce"]["outcome"]
        body["oracles_agree"] = agree
        if not agree:
            payload = envelope("act-check", {"act": act_payload(act)}, body)
            _emit(payload, args.format, args.out)
            return 2
    payload = envelope("act-check", {"act": act_payload(act)}, body)
    _emit(payload, args.format, args.out)
    return 0 if outcome_ok else 1


def _load_formula_text(args) -> str:
    if args.formula is not None:
        return args.formula
    with open(args.formula_file, "r", encoding="utf-8") as fh:
        return fh.read().strip()


def cmd_formula(args) -> int:
    if args.action == "eval":
        act = read_act(args.act)
        f = parse_formula(_load_formula_text(args), act.monoid,
                          free_order=args.free.split(",") if args.free else None)
        params = tuple(act.point(p) for p in args.params.split(",")) \
            if args.params else ()
        sols = solution_set(f, act, params)
        body = {
            "formula": formula_payload(f),
            "params": [act.carrier[p] for p in params],
            "solutions": sorted([act.carrier[i] for i in tup] for tup in sols),
        }
        payload = envelope("formula-eval", {"act": act_payload(act)}, body)
        _emit(payload, args.format, args.out)
        return 0
    if args.action == "normal-check":
        act = read_act(args.act)
        f = parse_formula(_load_formula_text(args), act.monoid,
                          free_order=args.free.split(",") if args.free else None)
        ok, witness = is_copy_normal(f, act, args.object_width)
        body = {"formula": formula_payload(f), "outcome": "holds" if ok else "fails"}
        if witness is not None:
            body["witness"] = {
                "params": [list(witness.params1), list(witness.params2)],
                "shared": list(witness.shared),
                "separating": list(witness.separating),
            }
        payload = envelope("formula-normal-check", {"act": act_payload(act)}, body)
        _emit(payload, args.format, args.out)
        return 0 if ok else 1
    # eliminate
    m = read_monoid(args.monoid)
    f = parse_formula(_load_formula_text(args), m,
                      free_order=args.free.split(",") if args.free else None)
    generator = m.index(args.generator) if args.generator is not None else None
    if generator is None:
        decomp = regular_part_decomposition(m)
        generator = (decomp.witness or {}).get("generator")
        if generator is None:
            raise SactsError("no single idempotent generator; pass --generator")
    result = eliminate_variable(f, args.pivot, m, generator)
    body = {
        "input": formula_payload(f),
        "pivot_variable": args.pivot,
        "kept": [list(a) for a in result.psi],
        "pivot_atom": list(result.pivot) if result.pivot else None,
        "steps": len(result.steps),
    }
    payload = envelope("formula-eliminate", {"monoid": monoid_payload(m)}, body)
    _emit(payload, args.format, args.out)
    return 0


def cmd_counterexample(args) -> int:
    m = read_monoid(args.monoid)
    a, b, c = (m.index(args.a), m.index(args.b), m.index(args.c))
    cx = build_counterexample(m, a, b, c)
    body = {
        "kind": cx.kind,
        "act": act_payload(cx.act),
        "formula": formula_payload(cx.formula),
        "pattern": {
            "positive": [list(p) for p in cx.data["pattern"]["positive"]],
            "negative": list(cx.data["pattern"]["negative"]),
        },
        "params": [list(cx.witness.params1), list(cx.witness.params2)],
    }
    if args.out_act:
        write_act(args.out_act, cx.act)
        body["act_file"] = os.path.basename(args.out_act)
    payload = envelope("counterexample", {"monoid": monoid_payload(m)}, body)
    _emit(payload, args.format, args.out)
    return 0


SWEEPS = {
    "normality": run_normality_crossval,
    "class-decision": run_class_decision_sweep,
    "antiadditivity": run_antiadditivity_sweep,
    "reduction-audit": run_reduction_audit,
}


def cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or "sweeps" not in raw:
        raise SactsError("config must be an object with a 'sweeps' list")
    names = raw["sweeps"]
    unknown = [n for n in names if n not in SWEEPS]
    if unknown:
        raise SactsError(f"unknown sweeps: {unknown}")
    cfg = ExperimentConfig(
        monoid_order_bound=raw.get("monoid_order_bound", 2),
        act_size_bound=raw.get("act_size_bound", 2),
        formula_free=raw.get("formula_free", 4),
        formula_bound_vars=raw.get("formula_bound_vars", 2),
        formula_atoms=raw.get("formula_atoms", 4),
        object_width=raw.get("object_width", 2),
        param_width=raw.get("param_width", 2),
        include_noncommutative=raw.get("include_noncommutative", True),
        seed=raw.get("seed", 0),
        parallelism=raw.get("parallelism",
                            int(os.environ.get("SACTS_PARALLELISM", "1"))),
    )
    body = {}
    clean = True
    for name in names:
        result = SWEEPS[name](cfg)
        body[name] = result
        clean = clean and result["status"] == "ok"
    payload = envelope("sweep", {"config": cfg.payload()}, body)
    _emit(payload, args.format, args.out)
    return 0 if clean else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sacts",
        description="Finite monoid-act workbench: regularity, normality, "
                    "counterexamples, cross-validation sweeps.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", default=None, help="write the report here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural facts about a monoid")
    p.add_argument("monoid")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decide", help="class-level decision for a monoid")
    p.add_argument("monoid")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("act-check", help="per-act normality check")
    p.add_argument("act")
    p.add_argument("--monoid", default=None,
                   help="optional monoid file the act must match")
    p.add_argument("--oracle", choices=("criterion", "bruteforce", "both"),
                   default="criterion")
    p.add_argument("--max-atoms", type=int, default=4)
    p.set_defaults(func=cmd_act_check)

    p = sub.add_parser("formula", help="evaluate, normal-check, or eliminate")
    p.add_argument("action", choices=("eval", "normal-check", "eliminate"))
    p.add_argument("--formula", default=None)
    p.add_argument("--formula-file", default=None)
    p.add_argument("--free", default=None,
                   help="comma-separated free variable order")
    p.add_argument("--act", default=None)
    p.add_argument("--monoid", default=None)
    p.add_argument("--params", default=None,
                   help="comma-separated point names for the parameter suffix")
    p.add_argument("--object-width", type=int, default=1)
    p.add_argument("--pivot", default="x0")
    p.add_argument("--generator", default=None,
                   help="idempotent generating the regular part")
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("counterexample", help="build a violating act")
    p.add_argument("monoid")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--out-act", default=None)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("sweep", help="run harness sweeps from a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "formula":
        if args.formula is None and args.formula_file is None:
            parser.error("need --formula or --formula-file")
        if args.action in ("eval", "normal-check") and args.act is None:
            parser.error("need --act")
        if args.action == "eliminate" and args.monoid is None:
            parser.error("need --monoid")
    try:
        return args.func(args)
    except (SactsError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
