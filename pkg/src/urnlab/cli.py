"""Command-line interface: ``urnlab <command> MODEL.json [options]``.

Exit codes: 0 ok, 2 parse error, 3 unbalanced, 4 not tenable, 5 not
linear, 6 enumeration cap exceeded, 7 conformance failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from urnlab.conformance import conform
from urnlab.errors import (
    CapacityError,
    ConformanceError,
    InvalidArgumentError,
    ModelFileError,
    NonIntegralModelError,
    NonpositiveBalanceError,
    NotLinearError,
    TenabilityError,
    UnbalancedModelError,
)
from urnlab.exact import (
    RESOLVED_CONSTANTS,
    MomentState,
    eigen_report,
    enumerated_moments,
    iter_distributions,
    mean_trajectory,
    moment_trajectory,
)
from urnlab.io import (
    distribution_csv,
    dump_model,
    load_model,
    moment_dict,
    moments_csv,
    rational_str,
)
from urnlab.model import UrnModel, check_tenability, classify, embed_unordered_to_ordered, validate_balance
from urnlab.montecarlo import SimulationPlan, run_ensemble

log = logging.getLogger("urnlab")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNBALANCED = 3
EXIT_NOT_TENABLE = 4
EXIT_NOT_LINEAR = 5
EXIT_CAP = 6
EXIT_CONFORMANCE = 7


class _Exit(Exception):
    def __init__(self, code: int, payload: dict | None = None):
        super().__init__(code)
        self.code = code
        self.payload = payload


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _basic(model: UrnModel) -> dict:
    return {"scheme": str(model.scheme), "colors": model.r, "sample_size": model.m, "T0": model.T0}


def _balanced(model: UrnModel) -> int:
    try:
        return validate_balance(model.matrix)
    except (UnbalancedModelError, NonpositiveBalanceError) as exc:
        raise _Exit(EXIT_UNBALANCED, {**_basic(model), "balanced": False, "error": str(exc)}) from exc


def _tenability(model: UrnModel, key: str = "violations") -> dict:
    report = check_tenability(model.matrix)
    return {
        "tenable": report.tenable,
        key: [{"index": list(k), "add": list(a)} for k, a in report.violations],
    }


def cmd_validate(model: UrnModel, args) -> tuple[str, int]:
    sigma = _balanced(model)
    out = {**_basic(model), "balanced": True, "sigma": sigma, **_tenability(model)}
    return _json(out), EXIT_OK if out["tenable"] else EXIT_NOT_TENABLE


def cmd_classify(model: UrnModel, args) -> tuple[str, int]:
    sigma = _balanced(model)
    verdict = classify(model.matrix)
    out = {**_basic(model), "sigma": sigma, "linear": verdict.linear}
    if verdict.linear:
        out["reduced"] = verdict.A.tolist()
        out["eigen"] = eigen_report(verdict.A).to_dict()
    else:
        out["violations"] = [
            {
                "index": list(v.index),
                "actual": [rational_str(x) for x in v.actual],
                "expected": [rational_str(x) for x in v.expected],
            }
            for v in verdict.violations
        ]
    out.update(_tenability(model, "tenability_violations"))
    return _json(out), EXIT_OK if out["tenable"] else EXIT_NOT_TENABLE


def cmd_expand(model: UrnModel, args) -> tuple[str, int]:
    _balanced(model)
    return dump_model(model), EXIT_OK


def cmd_embed(model: UrnModel, args) -> tuple[str, int]:
    _balanced(model)
    if model.scheme.ordered:
        raise _Exit(EXIT_PARSE, {"error": "model is already ordered"})
    return dump_model(model.with_matrix(embed_unordered_to_ordered(model.matrix))), EXIT_OK


def _trajectories(model: UrnModel, method: str, n: int, cap: int | None) -> dict[str, list[MomentState]]:
    out = {}
    if method in ("product", "all"):
        out["product"] = [MomentState(j, mu) for j, mu in enumerate(mean_trajectory(model, n))]
    if method in ("recurrence", "all"):
        out["recurrence"] = moment_trajectory(model, n, cap=cap)
    if method in ("enumerate", "all"):
        out["enumerate"] = enumerated_moments(model, n, cap)
    return out


def cmd_moments(model: UrnModel, args) -> tuple[str, int]:
    _balanced(model)
    trajs = _trajectories(model, args.method, args.steps, args.cap)
    if args.format == "csv":
        return moments_csv(trajs), EXIT_OK
    if args.method != "all":
        return _json([moment_dict(s) for s in trajs[args.method]]), EXIT_OK
    prod, rec, enum_ = trajs["product"], trajs["recurrence"], trajs["enumerate"]
    rows = []
    equal = True
    for p, rc, e in zip(prod, rec, enum_):
        same = p.mu == rc.mu == e.mu and rc.sigma == e.sigma
        equal &= same
        rows.append(
            {
                "step": p.step,
                "product": moment_dict(p),
                "recurrence": moment_dict(rc),
                "enumerate": moment_dict(e),
                "equal": same,
            }
        )
    out = {"constant": RESOLVED_CONSTANTS[model.scheme], "steps": rows, "equal": equal}
    return _json(out), EXIT_OK


def cmd_distribution(model: UrnModel, args) -> tuple[str, int]:
    _balanced(model)
    dists = list(iter_distributions(model, args.steps, args.cap))
    if not args.all_steps:
        dists = dists[-1:]
    if args.format == "json":
        payload = [
            {"step": d.step, "support": [{"x": list(x), "prob": rational_str(p)} for x, p in d.sorted_items()]}
            for d in dists
        ]
        return _json(payload), EXIT_OK
    return distribution_csv(dists, model.r), EXIT_OK


def cmd_simulate(model: UrnModel, args) -> tuple[str, int]:
    _balanced(model)
    plan = SimulationPlan(model, args.steps, args.runs, args.seed, args.workers)
    summary = run_ensemble(plan)
    log.info("simulated %d runs x %d steps in %.1f ms", plan.runs, plan.steps, summary.elapsed * 1000)
    return _json(summary.to_dict(timing=args.timing)), EXIT_OK


def cmd_conform(model: UrnModel, args) -> tuple[str, int]:
    _balanced(model)
    report = conform(model, args.steps, args.cap, strict=False)
    out = report.to_dict()
    out["ok"] = report.ok
    return _json(out), EXIT_OK if report.ok else EXIT_CONFORMANCE


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "expand": cmd_expand,
    "embed": cmd_embed,
    "moments": cmd_moments,
    "distribution": cmd_distribution,
    "simulate": cmd_simulate,
    "conform": cmd_conform,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="urnlab", description="Balanced multicolor urns with multiple drawings.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("model", help="model file (JSON)")
        p.add_argument("--output", "-o", help="write result to this path instead of stdout")
        p.add_argument("--cap", type=int, default=None, help="enumeration state cap (default: $URNLAB_CAP or 1e6)")
        if name in ("moments", "distribution", "simulate", "conform"):
            p.add_argument("--steps", "-n", type=int, default=5 if name != "simulate" else 10)
        if name == "moments":
            p.add_argument("--method", choices=["product", "recurrence", "enumerate", "all"], default="all")
            p.add_argument("--format", choices=["json", "csv"], default="json")
        if name == "distribution":
            p.add_argument("--format", choices=["json", "csv"], default="csv")
            p.add_argument("--all-steps", action="store_true", help="dump every step 0..N")
        if name == "simulate":
            p.add_argument("--runs", type=int, default=10_000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--timing", action="store_true", help="include wall_ms in the summary")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        model = load_model(args.model)
        text, code = COMMANDS[args.command](model, args)
    except _Exit as exc:
        text, code = (_json(exc.payload) if exc.payload else ""), exc.code
    except ModelFileError as exc:
        text, code = _json({"error": "parse", "message": str(exc)}), EXIT_PARSE
    except (UnbalancedModelError, NonpositiveBalanceError) as exc:
        text, code = _json({"error": "unbalanced", "message": str(exc)}), EXIT_UNBALANCED
    except NonIntegralModelError as exc:
        text, code = _json({"error": "non-integral", "message": str(exc)}), EXIT_PARSE
    except TenabilityError as exc:
        text, code = _json({"error": "not-tenable", "message": str(exc)}), EXIT_NOT_TENABLE
    except NotLinearError as exc:
        text, code = _json({"error": "not-linear", "message": str(exc)}), EXIT_NOT_LINEAR
    except CapacityError as exc:
        text, code = _json({"error": "cap", "message": str(exc)}), EXIT_CAP
    except ConformanceError as exc:
        text, code = _json({"error": "conformance", "message": str(exc)}), EXIT_CONFORMANCE
    except InvalidArgumentError as exc:
        text, code = _json({"error": "argument", "message": str(exc)}), EXIT_PARSE
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code:
        log.warning("urnlab %s: exit %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
