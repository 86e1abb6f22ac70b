"""Measurement games and the indifference arguments built on them.

A game associates a payoff with each outcome of a prepared measurement.
Playing it branches the preparation into payoff-tagged branches; tags carry
only the payoff amount, never the outcome label, which is what licenses
erasing the result afterwards. `compare` values two games under a credence
rule; `ssri_verdict` asks instead whether the two plays produce the same
global state; `ssri_outcome_collapse` exhibits the degenerate consequence of
that criterion within a single game.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .credence import CredenceRule, assign, evaluate_act
from .errors import DomainError
from .numeric import INDIFFERENCE_TOL, Number, is_exact
from .states import (
    GlobalState,
    OutcomePartition,
    StateVector,
    Tag,
    branch,
    erase,
    global_equal,
)


@dataclass(frozen=True)
class Game:
    """A preparation plus a payoff for every outcome label."""

    preparation: StateVector
    payoffs: dict[str, Number]
    name: str = ""

    def __post_init__(self):
        for label in self.partition:
            if label not in self.payoffs:
                raise DomainError(f"game has no payoff for outcome {label!r}")

    @property
    def partition(self) -> OutcomePartition:
        return self.preparation.partition


def reward_game(
    preparation: StateVector,
    reward_labels,
    name: str = "",
    reward: Number = 1,
    no_reward: Number = 0,
) -> Game:
    """Game paying `reward` on the given labels and `no_reward` elsewhere."""
    reward_set = set(reward_labels)
    payoffs = {
        l: reward if l in reward_set else no_reward for l in preparation.partition
    }
    return Game(preparation, payoffs, name=name)


def play(g: Game, keep_zero_branches: bool = False) -> GlobalState:
    """Branch the preparation, tagging each branch with its payoff only."""
    return branch(
        g.preparation,
        g.partition,
        lambda label: g.payoffs[label],
        keep_zero_branches=keep_zero_branches,
    )


@dataclass(frozen=True)
class PreferenceVerdict:
    """Outcome of valuing two games under one rule.

    `preferred` is "a", "b", or None for indifference; `gap` is the absolute
    value difference (exact kernel: indifferent iff the gap is exactly 0).
    """

    preferred: str | None
    gap: Number
    value_a: Number
    value_b: Number

    @property
    def indifferent(self) -> bool:
        return self.preferred is None


def compare(rule: CredenceRule, a: Game, b: Game) -> PreferenceVerdict:
    """Value both games under the rule and report the preference."""
    value_a = evaluate_act(assign(rule, a.preparation, a.partition), a.payoffs)
    value_b = evaluate_act(assign(rule, b.preparation, b.partition), b.payoffs)
    diff = value_a - value_b
    if is_exact(diff):
        indifferent = diff == 0
    else:
        indifferent = abs(float(diff)) <= INDIFFERENCE_TOL
    if indifferent:
        preferred = None
    else:
        preferred = "a" if diff > 0 else "b"
    return PreferenceVerdict(preferred, abs(diff), value_a, value_b)


@dataclass(frozen=True)
class SsriVerdict:
    """Same-state indifference check between two games.

    `constrained` means the (by default erased) post-play global states are
    equal, so the criterion mandates indifference; otherwise it is silent.
    """

    constrained: bool
    state_a: GlobalState
    state_b: GlobalState
    compared_erased: bool

    @property
    def mandate(self) -> str | None:
        return "indifferent" if self.constrained else None


def ssri_verdict(a: Game, b: Game, compare_erased: bool = True) -> SsriVerdict:
    ga, gb = play(a), play(b)
    if compare_erased:
        ga, gb = erase(ga), erase(gb)
    return SsriVerdict(global_equal(ga, gb), ga, gb, compare_erased)


@dataclass(frozen=True)
class OutcomeCollapseReport:
    """Every in-branch outcome of one played game shares the same global state.

    The shared state is the play itself, so a same-state indifference
    criterion ranks all the game's outcomes equally - betting preferences
    between outcomes cannot get off the ground under it.
    """

    game: Game
    shared_state: GlobalState
    outcomes: tuple[tuple[str, Tag], ...]
    pairs: tuple[tuple[tuple[str, Tag], tuple[str, Tag]], ...]

    @property
    def collapsed(self) -> bool:
        return True


def ssri_outcome_collapse(g: Game) -> OutcomeCollapseReport:
    """List the outcome pairs forced into indifference by the shared state."""
    state = play(g)
    outcomes = tuple(b.identity for b in state.branches)
    pairs = tuple(
        (outcomes[i], outcomes[j])
        for i in range(len(outcomes))
        for j in range(i + 1, len(outcomes))
    )
    return OutcomeCollapseReport(g, state, outcomes, pairs)
