"""Credence rules over branching measurements.

Four rule families produce per-outcome decision weights from a prepared
state:

  * Orthodox - squared-modulus weights of the state itself.
  * Heretic - squared-modulus weights of a transformed state. Application is
    refused when the transformed state weights a different outcome set
    (SupportViolation) or when the measurement is extremal for either state
    (HereticNotApplicable): those are the announced limits of the rule.
  * OutcomeEgalitarian - every outcome that occurs in some branch gets weight
    exactly 1, with no normalization; acts are valued by the conjunctive sum
    of payoffs (a min aggregation is available as a config switch).
  * Custom - an explicit weight table, e.g. to feed the coherence checker.

`extremality_preserved` probes whether a map keeps weight-0 outcomes at 0 and
weight-1 outcomes at 1. The probing is empirical, never a proof: callers
supply probe states (typically the partition's eigenstates) and receive the
violations found.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    DomainError,
    HereticNotApplicable,
    SingularMapError,
    SupportViolation,
)
from .numeric import Number, exactify, is_exact, weight_is_one, weight_is_zero
from .states import (
    OutcomePartition,
    StateMap,
    StateVector,
    apply_map,
    born_weights,
)


class CredenceRule:
    """Base marker; concrete rules carry a `kind` string."""

    kind = ""


@dataclass(frozen=True)
class Orthodox(CredenceRule):
    kind = "orthodox"


@dataclass(frozen=True)
class Heretic(CredenceRule):
    map: StateMap
    kind = "heretic"


@dataclass(frozen=True)
class OutcomeEgalitarian(CredenceRule):
    aggregation: str = "sum"
    kind = "outcome-egalitarian"

    def __post_init__(self):
        if self.aggregation not in ("sum", "min"):
            raise ValueError(f"unknown aggregation {self.aggregation!r}")


@dataclass(frozen=True)
class Custom(CredenceRule):
    weights: tuple[tuple[str, Fraction], ...]
    kind = "custom"

    @classmethod
    def of(cls, table: Mapping[str, object]) -> "Custom":
        return cls(tuple((label, exactify(v)) for label, v in table.items()))


ORTHODOX = Orthodox()


@dataclass(frozen=True)
class CredenceAssignment:
    """Per-outcome decision weights plus the aggregation used to value acts."""

    weights: dict[str, Number]
    rule_kind: str
    aggregation: str = "sum"

    def __getitem__(self, label: str) -> Number:
        return self.weights[label]

    def items(self):
        return self.weights.items()

    def total(self) -> Number:
        return sum(self.weights.values())


def support_consistent(state: StateVector, image: StateVector) -> bool:
    """True iff the same outcomes carry nonzero weight in both states."""
    if set(state.partition.labels) != set(image.partition.labels):
        raise DomainError("states live on different partitions")
    return state.support() == image.support()


def heretic_applicable(
    state: StateVector, partition: OutcomePartition, map_: StateMap
) -> bool:
    """False iff some outcome has weight 0 or 1 under the state or its image.

    A map that cannot be applied to the state at all (no table entry, or a
    zero-norm image) is likewise not applicable.
    """
    try:
        weights = born_weights(state, partition)
        image = apply_map(map_, state)
        image_weights = born_weights(image, partition)
    except (DomainError, SingularMapError):
        return False
    for w in list(weights.values()) + list(image_weights.values()):
        if weight_is_zero(w) or weight_is_one(w):
            return False
    return True


def assign(
    rule: CredenceRule, state: StateVector, partition: OutcomePartition
) -> CredenceAssignment:
    """Produce the rule's decision weights for the state on the partition."""
    if isinstance(rule, Orthodox):
        return CredenceAssignment(born_weights(state, partition), rule.kind)
    if isinstance(rule, Heretic):
        image = apply_map(rule.map, state)
        if not support_consistent(state, image):
            raise SupportViolation(
                "transformed state weights a different outcome set than the original"
            )
        if state.has_extremal_weight() or image.has_extremal_weight():
            raise HereticNotApplicable(
                "rule refused: measurement is extremal for the state or its image"
            )
        return CredenceAssignment(born_weights(image, partition), rule.kind)
    if isinstance(rule, OutcomeEgalitarian):
        one: Number = Fraction(1) if state.exact else 1.0
        weights = {
            label: one
            for label, w in born_weights(state, partition).items()
            if not weight_is_zero(w)
        }
        return CredenceAssignment(weights, rule.kind, aggregation=rule.aggregation)
    if isinstance(rule, Custom):
        table = dict(rule.weights)
        if set(table) != set(partition.labels):
            raise DomainError("custom table does not cover the partition")
        if any(w < 0 for w in table.values()):
            raise ValueError("custom credences must be nonnegative")
        return CredenceAssignment({l: table[l] for l in partition}, rule.kind)
    raise TypeError(f"unknown credence rule {rule!r}")


@dataclass(frozen=True)
class ExtremalityViolation:
    """A probe state whose extremal weight the map failed to preserve."""

    state: StateVector
    label: str | None
    kind: str  # "zero" | "one" | "singular"
    observed: float | Fraction | None = None


def extremality_preserved(
    map_: StateMap,
    partition: OutcomePartition,
    probe_states: list[StateVector],
) -> list[ExtremalityViolation]:
    """Check weight-0 stays 0 and weight-1 stays 1 across the probe states.

    Returns every violation found (empty list means the probes saw none).
    """
    if not probe_states:
        raise ValueError("probe set must be nonempty")
    violations: list[ExtremalityViolation] = []
    for s in probe_states:
        weights = born_weights(s, partition)
        try:
            image_weights = born_weights(apply_map(map_, s), partition)
        except (DomainError, SingularMapError):
            violations.append(ExtremalityViolation(s, None, "singular"))
            continue
        for label, w in weights.items():
            iw = image_weights[label]
            if weight_is_zero(w) and not weight_is_zero(iw):
                violations.append(ExtremalityViolation(s, label, "zero", iw))
            elif weight_is_one(w) and not weight_is_one(iw):
                violations.append(ExtremalityViolation(s, label, "one", iw))
    return violations


def eigenstate_probes(partition: OutcomePartition) -> list[StateVector]:
    """One basis state per outcome label - every weight is extremal."""
    probes = []
    for label in partition:
        probes.append(StateVector.from_weights({label: 1}, partition))
    return probes


def evaluate_act(
    assignment: CredenceAssignment, payoffs: Mapping[str, Number]
) -> Number:
    """Value of an act under the assignment.

    Sum aggregation: sum of weight * payoff over weighted outcomes (for the
    egalitarian rule's unit weights this is the conjunctive payoff sum). Min
    aggregation: the worst payoff among weighted outcomes.
    """
    carried = [
        (label, w) for label, w in assignment.items() if not weight_is_zero(w)
    ]
    for label, _ in carried:
        if label not in payoffs:
            raise DomainError(f"no payoff defined for weighted outcome {label!r}")
    if assignment.aggregation == "min":
        return min(payoffs[label] for label, _ in carried)
    zero: Number = Fraction(0) if all(
        is_exact(w) and is_exact(payoffs[l]) for l, w in carried
    ) else 0.0
    return sum((w * payoffs[label] for label, w in carried), zero)
