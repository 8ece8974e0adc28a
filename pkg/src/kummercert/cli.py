"""Command-line entry point: compute, certify, report.

Exit codes: 0 all checks passed, 1 a verification failed, 2 bad input or
configuration, 3 an internal invariant was violated.  Reports go to
stdout (text or JSON via --format), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .cohomology import (
    cohomology_closed_form,
    cohomology_snf,
    jordan_type_mod3,
    random_conjugated_block_action,
)
from .jordan import JordanType
from .kummer import (
    CertificateFailure,
    MismatchError,
    build_context,
    build_sigma_h1,
    coefficient_action,
    ell_table,
    ell_table_routes,
    vanishing_certificate,
)
from .ledger import ScriptFormatError, check_script, leaf_facts_from_computation, parse_script
from .linalg import ExactSolveError, kernel_basis
from .proofscript import load_shipped_script

COMMANDS = ("ell-table", "cohomology", "verify-proposition", "check-ledger", "full-cert")

# Published reference values for the block-count table of this action;
# verify-proposition checks both computation routes against them.
REFERENCE_TABLE = {
    1: JordanType(0, 4, 0),
    2: JordanType(10, 0, 6),
    3: JordanType(0, 16, 8),
    4: JordanType(19, 0, 17),
}

CONCLUSION = "Tors H^k(K2(A), Z) = 0 for all k."


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    output_format: str = "text"
    script_path: str | None = None
    seed: int = 0


def _validate(config: RunConfig) -> None:
    if config.command not in COMMANDS:
        raise ConfigError(f"unknown command {config.command!r}")
    if config.output_format not in ("text", "json"):
        raise ConfigError(f"unknown output format {config.output_format!r}")
    if config.command == "check-ledger" and not config.script_path:
        raise ConfigError("check-ledger requires --script")
    if config.command != "check-ledger" and config.script_path:
        raise ConfigError("--script is only meaningful for check-ledger")


def _jordan_row(t: JordanType) -> str:
    return f"l1={t.l1:<3d} l2={t.l2:<3d} l3={t.l3:<3d} (dim {t.dimension})"


def _cmd_ell_table(config: RunConfig):
    table = ell_table()
    payload = {
        "ell_table": {
            str(k): {**t.to_json_dict(), "dimension": t.dimension, "provenance": "computed"}
            for k, t in sorted(table.items())
        }
    }
    lines = ["block counts of the degree-k lattice mod 3 (both routes agree):"]
    lines += [f"  k={k}  {_jordan_row(t)}" for k, t in sorted(table.items())]
    return True, payload, "\n".join(lines)


def _cmd_cohomology(config: RunConfig):
    action = build_sigma_h1()
    rows = []
    ok = True
    lines = ["group cohomology H^p(A3, H^q) of the exterior-power lattices:"]
    for q in range(5):
        coeff = coefficient_action(action, q)
        jtype = jordan_type_mod3(coeff)
        for p in (1, 2):
            group = cohomology_snf(coeff, p)
            closed = cohomology_closed_form(jtype, "odd" if p % 2 else "even")
            agree = group == closed
            ok = ok and agree
            rows.append(
                {
                    "p": p,
                    "q": q,
                    "group": group.to_json_dict(),
                    "closed_form": closed.to_json_dict(),
                    "agree": agree,
                    "provenance": "computed",
                }
            )
            lines.append(
                f"  H^{p}(A3, H^{q}) = {group}  [closed form {closed}: "
                f"{'ok' if agree else 'MISMATCH'}]"
            )
    return ok, {"cohomology": rows}, "\n".join(lines)


def _cmd_verify_proposition(config: RunConfig):
    matrix_route, closed_route = ell_table_routes()
    rows = []
    ok = True
    lines = ["block-count table, both computation routes against the reference:"]
    for k in sorted(REFERENCE_TABLE):
        ref = REFERENCE_TABLE[k]
        good = matrix_route[k] == ref and closed_route[k] == ref
        ok = ok and good
        rows.append(
            {
                "k": k,
                "reference": {**ref.to_json_dict(), "provenance": "reference"},
                "matrix_route": {**matrix_route[k].to_json_dict(), "provenance": "computed"},
                "closed_route": {**closed_route[k].to_json_dict(), "provenance": "computed"},
                "ok": good,
            }
        )
        lines.append(
            f"  k={k}  reference {_jordan_row(ref)}  "
            f"matrix={'ok' if matrix_route[k] == ref else 'MISMATCH'}  "
            f"closed-form={'ok' if closed_route[k] == ref else 'MISMATCH'}"
        )
    lines.append("verdict: " + ("all values reproduced" if ok else "MISMATCH"))
    return ok, {"proposition": rows}, "\n".join(lines)


def _cmd_check_ledger(config: RunConfig):
    with open(config.script_path, "r", encoding="utf-8") as handle:
        script = parse_script(json.load(handle))
    report = check_script(script)
    return report.passed, {"ledger": report.to_json_dict()}, report.to_text()


def _cmd_full_cert(config: RunConfig):
    sections = []
    lines = []

    def section(name: str, passed: bool, detail: str) -> None:
        sections.append({"name": name, "pass": passed, "detail": detail})
        lines.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")

    action = build_sigma_h1()
    jtype = jordan_type_mod3(action)
    fixed = kernel_basis(action.shifted()).cols
    model_ok = (
        action.matrix.mat_pow(3).is_identity()
        and jtype == JordanType(0, 4, 0)
        and fixed == 0
    )
    section(
        "lattice model",
        model_ok,
        f"order 3 on Z^8, mod-3 type {jtype}, fixed rank {fixed} [computed]",
    )

    matrix_route, closed_route = ell_table_routes(action)
    table_ok = all(
        matrix_route[k] == REFERENCE_TABLE[k] and closed_route[k] == REFERENCE_TABLE[k]
        for k in REFERENCE_TABLE
    )
    section(
        "invariant table",
        table_ok,
        "k=1..4 block counts match the reference by both routes [computed vs reference]",
    )

    try:
        vanishing = vanishing_certificate(action)
        section(
            "vanishing certificate",
            True,
            f"{len(vanishing)}/8 groups H^p(A3, H^q) are zero [computed]",
        )
        vanishing_ok = True
    except CertificateFailure as exc:
        section("vanishing certificate", False, str(exc))
        vanishing_ok = False

    report_payload = None
    if vanishing_ok and model_ok and table_ok:
        ctx = build_context()
        shipped = load_shipped_script()
        recomputed = leaf_facts_from_computation(ctx)
        shipped_leafs = {a.id: a.facts for a in shipped.axioms if a.computation}
        rebuilt_leafs = {a.id: a.facts for a in recomputed}
        leafs_ok = shipped_leafs == rebuilt_leafs
        section(
            "computation-backed axioms",
            leafs_ok,
            f"{len(rebuilt_leafs)} recomputed facts match the shipped script "
            f"[computed, tag {ctx.content_tag()}]",
        )
        report = check_script(shipped)
        report_payload = report.to_json_dict()
        goals = f"{sum(1 for g in report.goals if g.established)}/{len(report.goals)}"
        section(
            "ledger replay",
            report.passed,
            f"{goals} goals established from {len(shipped.axioms)} axioms "
            f"and {len(shipped.steps)} steps [axiom/computed provenance in report]",
        )
    else:
        section("computation-backed axioms", False, "skipped: upstream failure")
        section("ledger replay", False, "skipped: upstream failure")

    rng = random.Random(config.seed)
    samples = 20
    cross_ok = True
    for _ in range(samples):
        sampled, counts = random_conjugated_block_action(rng, max_rank=10)
        observed = jordan_type_mod3(sampled)
        if observed != counts:
            cross_ok = False
            break
        for degree in range(1, 5):
            parity = "even" if degree % 2 == 0 else "odd"
            if cohomology_snf(sampled, degree) != cohomology_closed_form(observed, parity):
                cross_ok = False
                break
    section(
        "cross-validation sample",
        cross_ok,
        f"{samples} random conjugated lattices, degrees 1..4, closed form vs "
        f"Smith normal form (seed {config.seed}) [computed]",
    )

    passed = all(s["pass"] for s in sections)
    lines.append(CONCLUSION if passed else "certification FAILED")
    payload = {"sections": sections, "conclusion": lines[-1]}
    if vanishing_ok and model_ok and table_ok:
        payload["context"] = ctx.to_json_dict()
    if report_payload is not None:
        payload["ledger"] = report_payload
    return passed, payload, "\n".join(lines)


_HANDLERS = {
    "ell-table": _cmd_ell_table,
    "cohomology": _cmd_cohomology,
    "verify-proposition": _cmd_verify_proposition,
    "check-ledger": _cmd_check_ledger,
    "full-cert": _cmd_full_cert,
}


def run(config: RunConfig) -> tuple[int, dict, str]:
    """Execute one command; returns (exit code, JSON payload, text report)."""
    _validate(config)
    passed, payload, text = _HANDLERS[config.command](config)
    payload = {"command": config.command, "pass": passed, **payload}
    return (0 if passed else 1), payload, text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kummercert",
        description="Exact-arithmetic torsion certification for the "
        "generalized Kummer fourfold.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--script", default=None, help="proof script path (check-ledger)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        output_format=args.format,
        script_path=args.script,
        seed=args.seed,
    )
    try:
        code, payload, text = run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ScriptFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MismatchError, ExactSolveError, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    except CertificateFailure as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return 1
    if config.output_format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
