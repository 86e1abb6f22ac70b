"""Scenario documents: validation, dispatch, and deterministic reports.

A scenario is a flat JSON object with "schema": 1, a "name", a "kind", and
kind-specific parameters; numbers may be written as "p/q" strings, integers,
or floats (read at decimal face value in exact mode). Reports echo the
scenario, carry the results, and are byte-identical for identical
(scenario, seed, numeric_mode) inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import confirmation, selflocation
from .coherence import check_coherence
from .credence import (
    ORTHODOX,
    CredenceRule,
    Custom,
    Heretic,
    OutcomeEgalitarian,
)
from .errors import BranchlabError, ConfigError
from .games import Game, compare, ssri_outcome_collapse, ssri_verdict
from .numeric import fmt_number, parse_number
from .states import OutcomePartition, StateMap, StateVector

SCHEMA_VERSION = 1
KINDS = ("game-comparison", "ssri", "coherence", "beauty", "confirmation", "one-world")

_version = "0.1.0"


@dataclass
class Scenario:
    name: str
    kind: str
    numeric_mode: str
    seed: int | None
    raw: dict


@dataclass
class Report:
    scenario: dict
    results: dict
    provenance: dict

    def to_json(self) -> str:
        doc = {
            "scenario": self.scenario,
            "results": self.results,
            "provenance": self.provenance,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def csv_rows(self) -> list[tuple]:
        rows = [("step", "hypothesis", "posterior")]
        found = False
        for key in sorted(self.results):
            value = self.results[key]
            if not (isinstance(value, list) and value and isinstance(value[0], dict) and "posteriors" in value[0]):
                continue
            found = True
            for entry in value:
                for name in sorted(entry["posteriors"]):
                    rows.append((entry["step"], name, entry["posteriors"][name]))
        if not found:
            raise ConfigError("this scenario kind has no trajectory to emit as CSV")
        return rows

    def to_csv(self) -> str:
        return "\n".join(",".join(str(c) for c in row) for row in self.csv_rows()) + "\n"


def _require(obj: dict, key: str, kind: str):
    if key not in obj:
        raise ConfigError(f"{kind} scenario is missing required key {key!r}")
    return obj[key]


def validate_scenario(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("scenario document must be a JSON object")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {raw.get('schema')!r}")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ConfigError("scenario needs a nonempty string name")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"unknown scenario kind {kind!r}")
    mode = raw.get("numeric_mode", "exact")
    if mode not in ("exact", "float"):
        raise ConfigError(f"numeric_mode must be 'exact' or 'float', got {mode!r}")
    seed = raw.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    return Scenario(name=name, kind=kind, numeric_mode=mode, seed=seed, raw=raw)


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc}") from exc
    return validate_scenario(raw)


# -- parsing helpers ---------------------------------------------------------


def _parse_state(obj, exact: bool) -> StateVector:
    if not isinstance(obj, dict) or "partition" not in obj:
        raise ConfigError("state must be an object with a 'partition' list")
    try:
        return StateVector.from_json_dict(obj, exact=exact)
    except (BranchlabError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad state: {exc}") from exc


def _parse_map(obj, exact: bool) -> StateMap:
    if not isinstance(obj, dict):
        raise ConfigError("map must be a JSON object")
    if obj.get("identity"):
        return StateMap.identity()
    if "matrix" in obj:
        rows = []
        for row in obj["matrix"]:
            rows.append(
                [complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row]
            )
        try:
            return StateMap.from_matrix(rows)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if "table" in obj:
        pairs = [
            (_parse_state(src, exact), _parse_state(dst, exact)) for src, dst in obj["table"]
        ]
        return StateMap.from_table(pairs)
    raise ConfigError("map needs 'identity', 'matrix', or 'table'")


def _parse_rule(obj, exact: bool) -> CredenceRule:
    if not isinstance(obj, dict) or "rule" not in obj:
        raise ConfigError("rule must be an object with a 'rule' key")
    kind = obj["rule"]
    if kind == "orthodox":
        return ORTHODOX
    if kind == "heretic":
        return Heretic(map=_parse_map(_require(obj, "map", "heretic rule"), exact))
    if kind == "outcome-egalitarian":
        return OutcomeEgalitarian(aggregation=obj.get("aggregation", "sum"))
    if kind == "custom":
        return Custom.of(_require(obj, "weights", "custom rule"))
    raise ConfigError(f"unknown credence rule {kind!r}")


def _parse_payoffs(obj, exact: bool) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError("payoffs must map outcome labels to utilities")
    return {label: parse_number(v, exact) for label, v in obj.items()}


def _parse_game(obj, default_prep: StateVector | None, exact: bool, fallback_name: str) -> Game:
    if not isinstance(obj, dict):
        raise ConfigError("game must be a JSON object")
    prep = _parse_state(obj["preparation"], exact) if "preparation" in obj else default_prep
    if prep is None:
        raise ConfigError("game needs a preparation (own or scenario-level)")
    payoffs = _parse_payoffs(_require(obj, "payoffs", "game"), exact)
    try:
        return Game(prep, payoffs, name=obj.get("name", fallback_name))
    except BranchlabError as exc:
        raise ConfigError(f"bad game: {exc}") from exc


def _parse_hypothesis(obj) -> confirmation.Hypothesis:
    if not isinstance(obj, dict):
        raise ConfigError("hypothesis must be a JSON object")
    name = _require(obj, "name", "hypothesis")
    kind = _require(obj, "kind", "hypothesis")
    weights = {l: parse_number(v, True) for l, v in _require(obj, "weights", "hypothesis").items()}
    try:
        if kind == "branching":
            return confirmation.Hypothesis.branching(
                name, weights, keep_zero_branches=bool(obj.get("keep_zero_branches", False))
            )
        if kind == "one_world":
            return confirmation.Hypothesis.one_world(name, weights)
    except ValueError as exc:
        raise ConfigError(f"bad hypothesis {name!r}: {exc}") from exc
    raise ConfigError(f"unknown hypothesis kind {kind!r}")


def _parse_event(obj):
    if isinstance(obj, str):
        return obj
    if isinstance(obj, list):
        return frozenset(obj)
    raise ConfigError(f"event must be a label or a list of labels, got {obj!r}")


# -- result rendering --------------------------------------------------------


def _verdict_json(v) -> dict:
    return {
        "preference": v.preferred if v.preferred else "indifferent",
        "gap": fmt_number(v.gap),
        "value_a": fmt_number(v.value_a),
        "value_b": fmt_number(v.value_b),
    }


def _trajectory_json(trajectory) -> list[dict]:
    return [
        {
            "step": i,
            "posteriors": {name: fmt_number(p) for name, p in post.as_name_dict().items()},
        }
        for i, post in enumerate(trajectory)
    ]


# -- kind handlers -----------------------------------------------------------


def _run_game_comparison(raw: dict, exact: bool) -> dict:
    prep = _parse_state(raw["preparation"], exact) if "preparation" in raw else None
    game_a = _parse_game(_require(raw, "game_a", "game-comparison"), prep, exact, "game-a")
    game_b = _parse_game(_require(raw, "game_b", "game-comparison"), prep, exact, "game-b")
    verdicts = {}
    for rule_obj in _require(raw, "rules", "game-comparison"):
        rule = _parse_rule(rule_obj, exact)
        verdicts[rule.kind] = _verdict_json(compare(rule, game_a, game_b))
    return {
        "game_a": game_a.name,
        "game_b": game_b.name,
        "verdicts": verdicts,
    }


def _run_ssri(raw: dict, exact: bool) -> dict:
    prep = _parse_state(raw["preparation"], exact) if "preparation" in raw else None
    game_a = _parse_game(_require(raw, "game_a", "ssri"), prep, exact, "game-a")
    game_b = _parse_game(_require(raw, "game_b", "ssri"), prep, exact, "game-b")
    verdict = ssri_verdict(game_a, game_b, compare_erased=bool(raw.get("compare_erased", True)))
    collapses = {}
    for game in (game_a, game_b):
        report = ssri_outcome_collapse(game)
        collapses[game.name] = {
            "outcomes": [[label, fmt_number(tag)] for label, tag in report.outcomes],
            "pairs": len(report.pairs),
            "shared_state": report.shared_state.to_json_dict(),
            "collapsed": report.collapsed,
        }
    return {
        "constrained": verdict.constrained,
        "mandate": verdict.mandate,
        "compared_erased": verdict.compared_erased,
        "state_a": verdict.state_a.to_json_dict(),
        "state_b": verdict.state_b.to_json_dict(),
        "outcome_collapse": collapses,
    }


def _run_coherence(raw: dict, exact: bool) -> dict:
    cases = _require(raw, "cases", "coherence")
    out = {}
    for case in cases:
        name = _require(case, "name", "coherence case")
        credences = {l: parse_number(v, True) for l, v in _require(case, "credences", "coherence case").items()}
        partition = OutcomePartition.of(case.get("partition", list(credences)))
        support = case.get("support")
        cert = check_coherence(credences, partition, support=support)
        out[name] = cert.to_json_dict(partition)
    return {"cases": out}


def _run_beauty(raw: dict, exact: bool) -> dict:
    days = raw.get("days", 5)
    if isinstance(days, int):
        days = selflocation.make_days(days)
    variant = raw.get("variant", selflocation.CLASSICAL)
    try:
        scenario = selflocation.BeautyScenario(
            group_probability=parse_number(raw.get("group_probability", "1/2"), True),
            days=tuple(days),
            variant=variant,
            h_day_weights=raw.get("h_day_weights"),
            t_branch_weights=raw.get("t_branch_weights"),
        )
    except ValueError as exc:
        raise ConfigError(f"bad beauty scenario: {exc}") from exc
    policies = raw.get("policies", [selflocation.THIRDER, selflocation.HALFER])
    evidences = raw.get("evidence", [selflocation.AWAKE])
    if isinstance(evidences, str):
        evidences = [evidences]
    posteriors = {}
    for policy in policies:
        per_evidence = {}
        for evidence in evidences:
            post = selflocation.posterior(scenario, policy, evidence)
            odds = selflocation.posterior_odds(scenario, policy, evidence)
            per_evidence[evidence] = {
                "posterior_T": fmt_number(post),
                "odds_T_to_H": f"{odds.numerator}:{odds.denominator}" if odds is not None else "certain",
            }
        posteriors[policy] = per_evidence
    likelihoods = selflocation.day_likelihoods(scenario)
    return {
        "posteriors": posteriors,
        "per_group_day_likelihoods": {
            group: {day: fmt_number(p) for day, p in table.items()}
            for group, table in likelihoods.items()
        },
        "metadata": {
            "variant": variant,
            "uniform_weights_assumed": scenario.uniform_t_weights,
        },
    }


def _run_confirmation(raw: dict, exact: bool) -> dict:
    hypotheses = [_parse_hypothesis(h) for h in _require(raw, "hypotheses", "confirmation")]
    policy = raw.get("policy", confirmation.NAIVE)
    if policy not in (confirmation.STANDARD, confirmation.NAIVE, confirmation.TOTAL_EVIDENCE):
        raise ConfigError(f"unknown updating policy {policy!r}")
    prior_spec = raw.get("prior", "uniform")
    if prior_spec == "uniform":
        prior = confirmation.Posterior.uniform(hypotheses)
    else:
        by_name = {h.name: h for h in hypotheses}
        try:
            prior = confirmation.Posterior.of(
                {by_name[name]: parse_number(v, True) for name, v in prior_spec.items()}
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad prior: {exc}") from exc
    events = [_parse_event(e) for e in _require(raw, "events", "confirmation")]
    trajectory = confirmation.run_sequence(prior, policy, events)
    return {
        "policy": policy,
        "trajectory": _trajectory_json(trajectory),
        "final": {name: fmt_number(p) for name, p in trajectory[-1].as_name_dict().items()},
    }


def _run_one_world(raw: dict, exact: bool, seed: int | None) -> dict:
    truth = _parse_hypothesis(_require(raw, "truth", "one-world"))
    hypotheses = [_parse_hypothesis(h) for h in _require(raw, "hypotheses", "one-world")]
    branching = [_parse_hypothesis(h) for h in raw.get("branching_hypotheses", [])]
    trials = _require(raw, "trials", "one-world")
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError("trials must be a positive integer")
    if seed is None:
        raise ConfigError("one-world scenario needs a seed (scenario or --seed)")
    run = confirmation.one_world_run(truth, hypotheses, trials, seed)

    counts: dict[str, int] = {}
    for outcome in run.outcomes:
        counts[outcome] = counts.get(outcome, 0) + 1

    stride = max(1, trials // 10)
    sampled_steps = sorted(set(range(0, trials + 1, stride)) | {trials})
    sampled = [
        {
            "step": i,
            "posteriors": {n: fmt_number(p) for n, p in run.trajectory[i].as_name_dict().items()},
        }
        for i in sampled_steps
    ]

    results = {
        "outcome_counts": counts,
        "final": {n: fmt_number(p) for n, p in run.final.as_name_dict().items()},
        "final_approx": {n: float(p) for n, p in run.final.as_name_dict().items()},
        "sampled_trajectory": sampled,
    }

    if branching:
        # The branching view of the same trials: every run realizes the full
        # outcome set, so the total-evidence trajectory cannot move.
        events = [frozenset(truth.labels)] * trials
        te_prior = confirmation.Posterior.uniform(branching)
        te_traj = confirmation.run_sequence(te_prior, confirmation.TOTAL_EVIDENCE, events)
        results["total_evidence_constant"] = all(
            step.as_name_dict() == te_prior.as_name_dict() for step in te_traj
        )
        results["total_evidence_final"] = {
            n: fmt_number(p) for n, p in te_traj[-1].as_name_dict().items()
        }
        results["total_evidence_trajectory"] = [
            {
                "step": i,
                "posteriors": {n: fmt_number(p) for n, p in te_traj[i].as_name_dict().items()},
            }
            for i in sampled_steps
        ]
    return results


def run_scenario(
    scenario: Scenario,
    seed_override: int | None = None,
    mode_override: str | None = None,
) -> Report:
    """Dispatch a validated scenario and wrap the results in a report."""
    mode = mode_override or scenario.numeric_mode
    exact = mode == "exact"
    seed = seed_override if seed_override is not None else scenario.seed
    raw = scenario.raw
    try:
        if scenario.kind == "game-comparison":
            results = _run_game_comparison(raw, exact)
        elif scenario.kind == "ssri":
            results = _run_ssri(raw, exact)
        elif scenario.kind == "coherence":
            results = _run_coherence(raw, exact)
        elif scenario.kind == "beauty":
            results = _run_beauty(raw, exact)
        elif scenario.kind == "confirmation":
            results = _run_confirmation(raw, exact)
        else:
            results = _run_one_world(raw, exact, seed)
    except KeyError as exc:
        raise ConfigError(f"scenario is missing key {exc}") from exc
    provenance = {"version": _version, "seed": seed, "numeric_mode": mode}
    return Report(scenario=raw, results=results, provenance=provenance)


# -- bundled scenarios -------------------------------------------------------


def _bundled_dir():
    return resources.files(__package__) / "scenarios"


def bundled_scenario_names() -> list[str]:
    names = []
    for entry in _bundled_dir().iterdir():
        if entry.name.endswith(".json"):
            names.append(entry.name[: -len(".json")])
    return sorted(names)


def load_bundled(name: str) -> Scenario:
    entry = _bundled_dir() / f"{name}.json"
    try:
        raw = json.loads(entry.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"no bundled scenario named {name!r}") from None
    return validate_scenario(raw)


def list_scenarios(extra_dir: str | Path | None = None) -> list[tuple[str, str]]:
    """(name, one-line description) pairs, bundled plus any user directory."""
    listing = {}
    for name in bundled_scenario_names():
        listing[name] = load_bundled(name).raw.get("description", "")
    if extra_dir is not None:
        for path in sorted(Path(extra_dir).glob("*.json")):
            sc = load_scenario(path)
            listing[sc.name] = sc.raw.get("description", "")
    return sorted(listing.items())


def scenario_games(scenario: Scenario) -> list[Game]:
    """Games declared by a game-comparison or ssri scenario."""
    if scenario.kind not in ("game-comparison", "ssri"):
        return []
    exact = scenario.numeric_mode == "exact"
    raw = scenario.raw
    prep = _parse_state(raw["preparation"], exact) if "preparation" in raw else None
    return [
        _parse_game(raw["game_a"], prep, exact, "game-a"),
        _parse_game(raw["game_b"], prep, exact, "game-b"),
    ]
