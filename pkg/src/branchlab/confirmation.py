"""Bayesian updating engines for branching and one-world hypotheses.

A hypothesis assigns rational weights to outcome labels: a one-world
hypothesis reads them as chances, a branching hypothesis as branch weights
(every nonzero-weight outcome occurs). Three updating policies:

  * standard - ordinary conditionalization treating weights as chances;
  * naive - ordinary conditionalization in the regime where a branching
    theory's conditional probabilities go to unity: any possible event has
    likelihood 1 under it;
  * total_evidence - the agent conditions on the full set of outcomes
    realized across branches, which matches a branching hypothesis iff the
    set equals its support, independent of the weight values.

Events are either a single outcome label (str) or a full outcome-set
(set/frozenset of labels). `one_world_run` adds the contrast case where
frequencies exist: sample outcomes from a true one-world measure and watch
standard updating converge.

All posteriors are exact rationals.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ImpossibleEvidence
from .numeric import exactify

BRANCHING = "branching"
ONE_WORLD = "one_world"

STANDARD = "standard"
NAIVE = "naive"
TOTAL_EVIDENCE = "total_evidence"

_POLICIES = (STANDARD, NAIVE, TOTAL_EVIDENCE)


@dataclass(frozen=True)
class Hypothesis:
    """Named weight assignment over outcome labels."""

    name: str
    kind: str
    outcome_weights: tuple[tuple[str, Fraction], ...]
    keep_zero_branches: bool = False

    def __post_init__(self):
        if self.kind not in (BRANCHING, ONE_WORLD):
            raise ValueError(f"unknown hypothesis kind {self.kind!r}")
        weights = tuple((label, exactify(w)) for label, w in self.outcome_weights)
        object.__setattr__(self, "outcome_weights", weights)
        labels = [label for label, _ in weights]
        if len(labels) != len(set(labels)):
            raise ValueError("duplicate outcome label in hypothesis")
        if any(w < 0 for _, w in weights):
            raise ValueError("weights must be nonnegative")
        if sum(w for _, w in weights) != 1:
            raise ValueError("weights must sum to exactly 1")

    @classmethod
    def branching(cls, name: str, weights: Mapping[str, object], keep_zero_branches: bool = False) -> "Hypothesis":
        return cls(name, BRANCHING, tuple(weights.items()), keep_zero_branches)

    @classmethod
    def one_world(cls, name: str, weights: Mapping[str, object]) -> "Hypothesis":
        return cls(name, ONE_WORLD, tuple(weights.items()))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.outcome_weights)

    def weight(self, label: str) -> Fraction:
        for l, w in self.outcome_weights:
            if l == label:
                return w
        raise DomainError(f"outcome {label!r} outside hypothesis {self.name!r}")

    def effective_support(self) -> frozenset[str]:
        """Outcomes that occur in some branch (zero-weight ones too, if kept)."""
        if self.keep_zero_branches:
            return frozenset(self.labels)
        return frozenset(l for l, w in self.outcome_weights if w > 0)


def likelihood(h: Hypothesis, policy: str, event) -> Fraction:
    """P(event | h) under the updating policy. Exact rational."""
    if policy not in _POLICIES:
        raise ValueError(f"unknown policy {policy!r}")

    if isinstance(event, str):
        w = h.weight(event)  # raises DomainError for labels outside the partition
        if h.kind == ONE_WORLD:
            return w
        if policy == STANDARD:
            return w
        # naive / total_evidence on a lone outcome: "this occurred in some branch"
        occurs = event in h.effective_support()
        return Fraction(1) if occurs else Fraction(0)

    if isinstance(event, (set, frozenset, tuple, list)):
        outcome_set = frozenset(event)
        if not outcome_set:
            raise DomainError("empty outcome-set event")
        for label in outcome_set:
            h.weight(label)
        if h.kind == ONE_WORLD:
            # A one-world theory realizes exactly one outcome.
            if len(outcome_set) == 1:
                return h.weight(next(iter(outcome_set)))
            return Fraction(0)
        if policy == NAIVE:
            occurs = outcome_set <= h.effective_support()
            return Fraction(1) if occurs else Fraction(0)
        # standard / total_evidence: the realized outcome-set is the support
        return Fraction(1) if outcome_set == h.effective_support() else Fraction(0)

    raise DomainError(f"unsupported event {event!r}")


@dataclass(frozen=True)
class Posterior:
    """Probability distribution over hypotheses; exact, sums to 1."""

    entries: tuple[tuple[Hypothesis, Fraction], ...]

    def __post_init__(self):
        entries = tuple((h, exactify(p)) for h, p in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("posterior needs at least one hypothesis")
        names = [h.name for h, _ in entries]
        if len(names) != len(set(names)):
            raise ValueError("hypothesis names must be unique")
        if any(p < 0 for _, p in entries):
            raise ValueError("probabilities must be nonnegative")
        if sum(p for _, p in entries) != 1:
            raise ValueError("posterior must sum to exactly 1")

    @classmethod
    def uniform(cls, hypotheses: Sequence[Hypothesis]) -> "Posterior":
        n = len(hypotheses)
        return cls(tuple((h, Fraction(1, n)) for h in hypotheses))

    @classmethod
    def of(cls, mapping: Mapping[Hypothesis, object]) -> "Posterior":
        return cls(tuple((h, exactify(p)) for h, p in mapping.items()))

    def probability(self, key) -> Fraction:
        for h, p in self.entries:
            if h is key or h == key or h.name == key:
                return p
        raise KeyError(key)

    def hypotheses(self) -> tuple[Hypothesis, ...]:
        return tuple(h for h, _ in self.entries)

    def as_name_dict(self) -> dict[str, Fraction]:
        return {h.name: p for h, p in self.entries}


def update(prior: Posterior, policy: str, event) -> Posterior:
    """One Bayes step: posterior(h) proportional to prior(h) * likelihood."""
    weighted = [(h, p * likelihood(h, policy, event)) for h, p in prior.entries]
    total = sum(w for _, w in weighted)
    if total == 0:
        raise ImpossibleEvidence(f"every hypothesis rules out {event!r}")
    return Posterior(tuple((h, w / total) for h, w in weighted))


def run_sequence(prior: Posterior, policy: str, events: Iterable) -> list[Posterior]:
    """Fold updates over the events; trajectory[0] is the prior."""
    trajectory = [prior]
    current = prior
    for event in events:
        current = update(current, policy, event)
        trajectory.append(current)
    return trajectory


@dataclass(frozen=True)
class OneWorldRun:
    outcomes: tuple[str, ...]
    trajectory: tuple[Posterior, ...]
    seed: int

    @property
    def final(self) -> Posterior:
        return self.trajectory[-1]


def one_world_run(
    truth: Hypothesis,
    hypotheses: Sequence[Hypothesis],
    n: int,
    seed: int,
    prior: Posterior | None = None,
) -> OneWorldRun:
    """Sample n outcomes from a true one-world measure and update on each.

    Deterministic for a fixed seed. This is the frequency-driven confirmation
    loop a branching total-evidence agent has no access to.
    """
    if truth.kind != ONE_WORLD:
        raise ValueError("truth must be a one-world hypothesis")
    if n < 1:
        raise ValueError("trial count must be at least 1")
    rng = random.Random(seed)
    labels = truth.labels
    cumulative = []
    running = Fraction(0)
    for label in labels:
        running += truth.weight(label)
        cumulative.append((label, running))
    outcomes = []
    for _ in range(n):
        r = rng.random()
        pick = labels[-1]  # guard against r landing beyond the last boundary
        for label, bound in cumulative:
            if r < bound:
                pick = label
                break
        outcomes.append(pick)
    start = prior if prior is not None else Posterior.uniform(hypotheses)
    trajectory = run_sequence(start, STANDARD, outcomes)
    return OneWorldRun(tuple(outcomes), tuple(trajectory), seed)
