"""Command-line front end.

Subcommands: run, list, coherence, beauty, confirm, game. Exit codes:
0 success, 1 module error, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import selflocation
from .coherence import check_coherence
from .errors import BranchlabError, ConfigError
from .numeric import fmt_number, parse_number
from .scenarios import (
    Report,
    Scenario,
    list_scenarios,
    load_scenario,
    run_scenario,
    validate_scenario,
)
from .states import OutcomePartition


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render(report: Report, fmt: str) -> str:
    return report.to_csv() if fmt == "csv" else report.to_json()


def _cmd_run(args) -> int:
    scenarios = [load_scenario(p) for p in args.scenario]
    mode = "exact" if args.exact else None

    def one(sc: Scenario) -> Report:
        return run_scenario(sc, seed_override=args.seed, mode_override=mode)

    if len(scenarios) == 1:
        report = one(scenarios[0])
        _emit(_render(report, args.format), args.out)
        return 0

    if args.out is None:
        raise ConfigError("running multiple scenarios requires --out DIRECTORY")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    worker_count = max(1, args.jobs)
    with ThreadPoolExecutor(max_workers=worker_count) as pool:
        reports = list(pool.map(one, scenarios))
    suffix = "csv" if args.format == "csv" else "json"
    for sc, report in zip(scenarios, reports):
        (out_dir / f"{sc.name}.report.{suffix}").write_text(
            _render(report, args.format), encoding="utf-8"
        )
    return 0


def _cmd_list(args) -> int:
    for name, description in list_scenarios(args.scenario_dir):
        line = f"{name} - {description}" if description else name
        print(line)
    return 0


def _cmd_coherence(args) -> int:
    try:
        doc = json.loads(Path(args.credences).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read credences file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"credences file is not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and "credences" in doc:
        table = doc["credences"]
        partition = OutcomePartition.of(doc.get("partition", list(table)))
        support = doc.get("support")
    elif isinstance(doc, dict):
        table = doc
        partition = OutcomePartition.of(table)
        support = None
    else:
        raise ConfigError("credences file must be a JSON object")
    credences = {label: parse_number(v, True) for label, v in table.items()}
    certificate = check_coherence(credences, partition, support=support)
    _emit(json.dumps(certificate.to_json_dict(partition), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_beauty(args) -> int:
    days = selflocation.make_days(args.days)
    evidence = args.evidence
    if evidence.lower() != selflocation.AWAKE:
        matches = [d for d in days if d.lower() == evidence.lower()]
        if not matches:
            raise ConfigError(f"evidence {evidence!r} is neither 'awake' nor a day name")
        evidence = matches[0]
    else:
        evidence = selflocation.AWAKE
    try:
        scenario = selflocation.BeautyScenario(
            group_probability=parse_number(args.group_probability, True),
            days=days,
            variant=args.variant,
        )
        post = selflocation.posterior(scenario, args.policy, evidence)
        odds = selflocation.posterior_odds(scenario, args.policy, evidence)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    doc = {
        "posterior_T": fmt_number(post),
        "odds_T_to_H": f"{odds.numerator}:{odds.denominator}" if odds is not None else "certain",
        "per_group_day_likelihoods": {
            group: {day: fmt_number(p) for day, p in table.items()}
            for group, table in selflocation.day_likelihoods(scenario).items()
        },
        "metadata": {
            "policy": args.policy,
            "evidence": evidence,
            "variant": args.variant,
            "uniform_weights_assumed": True,
        },
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_confirm(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.kind != "confirmation":
        raise ConfigError("confirm expects a confirmation scenario")
    if args.policy:
        raw = dict(scenario.raw)
        raw["policy"] = args.policy
        scenario = validate_scenario(raw)
    report = run_scenario(scenario, seed_override=args.seed)
    _emit(_render(report, args.format), args.out)
    return 0


def _cmd_game(args) -> int:
    scenario = load_scenario(args.scenario)
    if scenario.kind != "game-comparison":
        raise ConfigError("game expects a game-comparison scenario")
    if args.rule:
        raw = dict(scenario.raw)
        raw["rules"] = [r for r in raw.get("rules", []) if r.get("rule") == args.rule]
        if not raw["rules"]:
            raise ConfigError(f"scenario declares no rule {args.rule!r}")
        scenario = validate_scenario(raw)
    report = run_scenario(scenario, mode_override="exact" if args.exact else None)
    _emit(report.to_json(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchlab",
        description="Scenario-driven simulators for branching-measurement decision problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one or more scenario files")
    run.add_argument("--scenario", action="append", required=True, help="path to a scenario JSON (repeatable)")
    run.add_argument("--out", help="output file (or directory for multiple scenarios)")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--exact", action="store_true", help="force the exact numeric kernel")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--jobs", type=int, default=1, help="run a batch concurrently")
    run.set_defaults(func=_cmd_run)

    lst = sub.add_parser("list", help="list bundled (and optional user) scenarios")
    lst.add_argument("--scenario-dir", help="directory of additional scenario files")
    lst.set_defaults(func=_cmd_list)

    coh = sub.add_parser("coherence", help="emit a Dutch-book certificate for a credence file")
    coh.add_argument("--credences", required=True, help="JSON file of outcome -> credence")
    coh.add_argument("--out")
    coh.set_defaults(func=_cmd_coherence)

    beauty = sub.add_parser("beauty", help="sleeper-experiment posterior")
    beauty.add_argument("--days", type=int, default=5)
    beauty.add_argument("--policy", choices=(selflocation.THIRDER, selflocation.HALFER), default=selflocation.THIRDER)
    beauty.add_argument("--evidence", default="awake", help="'awake' or a day name")
    beauty.add_argument("--variant", choices=(selflocation.CLASSICAL, selflocation.QUANTUM_EVERETT), default=selflocation.CLASSICAL)
    beauty.add_argument("--group-probability", default="1/2")
    beauty.add_argument("--out")
    beauty.set_defaults(func=_cmd_beauty)

    confirm = sub.add_parser("confirm", help="run a confirmation scenario")
    confirm.add_argument("--scenario", required=True)
    confirm.add_argument("--policy", choices=("standard", "naive", "total_evidence"))
    confirm.add_argument("--format", choices=("json", "csv"), default="json")
    confirm.add_argument("--seed", type=int)
    confirm.add_argument("--out")
    confirm.set_defaults(func=_cmd_confirm)

    game = sub.add_parser("game", help="run a game-comparison scenario")
    game.add_argument("--scenario", required=True)
    game.add_argument("--rule", help="evaluate only this credence rule")
    game.add_argument("--exact", action="store_true")
    game.add_argument("--out")
    game.set_defaults(func=_cmd_game)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BranchlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
