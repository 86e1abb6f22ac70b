"""Self-locating credence for the sleeper experiment and its branching twin.

Setup: a subject is assigned by a weighted coin to group H (woken on one
randomly chosen day of the week-long sleep) or group T (an awakening event
on every day). In the classical variant T's awakenings happen sequentially
to one amnesiac subject; in the quantum-branching variant they happen to the
subject's equally real descendants, one per day-branch, with squared
amplitudes supplied as inputs (uniform by default - the uniformity is an
assumption, not a derivation, and reports flag it).

Two self-location policies are implemented:

  * thirder - self-sampling over awakening events, weighted by world
    probability times (in the branching variant) relative branch weight;
  * halfer - world-probability conditioning on "this world contains at least
    one evidence-consistent awakening".

Everything is exact rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .numeric import exactify

CLASSICAL = "classical"
QUANTUM_EVERETT = "quantum_everett"
THIRDER = "thirder"
HALFER = "halfer"
AWAKE = "awake"

DEFAULT_DAYS = ("Monday", "Tuesday", "Wednesday", "Thursday", "Friday")


def make_days(count: int) -> tuple[str, ...]:
    """Weekday names for the default five-day run, day-1..day-N otherwise."""
    if count < 1:
        raise ValueError("need at least one day")
    if count == 5:
        return DEFAULT_DAYS
    return tuple(f"day-{i}" for i in range(1, count + 1))


def _weight_vector(values, days, what: str) -> tuple[Fraction, ...]:
    weights = tuple(exactify(v) for v in values)
    if len(weights) != len(days):
        raise ValueError(f"{what} must give one weight per day")
    if any(w < 0 for w in weights):
        raise ValueError(f"{what} must be nonnegative")
    if sum(weights) != 1:
        raise ValueError(f"{what} must sum to exactly 1")
    return weights


@dataclass(frozen=True)
class BeautyScenario:
    """Experiment description; `group_probability` is the chance of group H."""

    group_probability: Fraction = Fraction(1, 2)
    days: tuple[str, ...] = DEFAULT_DAYS
    variant: str = CLASSICAL
    h_day_weights: tuple[Fraction, ...] | None = None
    t_branch_weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "group_probability", exactify(self.group_probability))
        object.__setattr__(self, "days", tuple(self.days))
        if not self.days or len(set(self.days)) != len(self.days):
            raise ValueError("days must be a nonempty list of distinct labels")
        if not 0 < self.group_probability < 1:
            raise ValueError("group probability must lie strictly between 0 and 1")
        if self.variant not in (CLASSICAL, QUANTUM_EVERETT):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.h_day_weights is not None:
            object.__setattr__(
                self,
                "h_day_weights",
                _weight_vector(self.h_day_weights, self.days, "H day weights"),
            )
        if self.t_branch_weights is not None:
            if self.variant != QUANTUM_EVERETT:
                raise ValueError("branch weights only apply to the branching variant")
            object.__setattr__(
                self,
                "t_branch_weights",
                _weight_vector(self.t_branch_weights, self.days, "T branch weights"),
            )

    def h_weight(self, day: str) -> Fraction:
        if self.h_day_weights is None:
            return Fraction(1, len(self.days))
        return self.h_day_weights[self.days.index(day)]

    def t_weight(self, day: str) -> Fraction:
        if self.t_branch_weights is None:
            return Fraction(1, len(self.days))
        return self.t_branch_weights[self.days.index(day)]

    @property
    def uniform_t_weights(self) -> bool:
        return self.t_branch_weights is None or len(set(self.t_branch_weights)) == 1


@dataclass(frozen=True)
class CenteredWorld:
    """A (world, awakening) pair.

    For H the assignment is the one wake day (centers exist only there); for
    T every day hosts a center of the single T world. `awakening_measure` is
    the thirder's sampling measure; `branch_weight` records the quantum
    weight behind it in the branching variant.
    """

    group: str
    wake_day_assignment: str
    today: str
    world_probability: Fraction
    awakening_measure: Fraction
    branch_weight: Fraction | None = None


def enumerate_centered_worlds(s: BeautyScenario) -> list[CenteredWorld]:
    """All awakening-centers with their world probabilities and measures.

    H yields one center per possible assignment, each a world of probability
    p * h(day). T yields one world of probability (1-p) whose centers carry
    measure (1-p) * |days| * t(day): one full count per awakening, scaled by
    relative branch weight in the branching variant (uniform weights reduce
    to the classical count of 1 per awakening).
    """
    p = s.group_probability
    n = len(s.days)
    centers = []
    for day in s.days:
        centers.append(
            CenteredWorld(
                group="H",
                wake_day_assignment=day,
                today=day,
                world_probability=p * s.h_weight(day),
                awakening_measure=p * s.h_weight(day),
            )
        )
    for day in s.days:
        centers.append(
            CenteredWorld(
                group="T",
                wake_day_assignment=day,
                today=day,
                world_probability=1 - p,
                awakening_measure=(1 - p) * n * s.t_weight(day),
                branch_weight=s.t_weight(day) if s.variant == QUANTUM_EVERETT else None,
            )
        )
    return centers


def _validate_evidence(s: BeautyScenario, evidence: str) -> str:
    if evidence == AWAKE:
        return evidence
    if evidence not in s.days:
        raise DomainError(f"unknown day {evidence!r}")
    return evidence


def posterior(s: BeautyScenario, policy: str, evidence: str = AWAKE) -> Fraction:
    """P(group = T | evidence) under the given self-location policy."""
    if policy not in (THIRDER, HALFER):
        raise ValueError(f"unknown policy {policy!r}")
    evidence = _validate_evidence(s, evidence)

    if policy == THIRDER:
        t_mass = Fraction(0)
        h_mass = Fraction(0)
        for c in enumerate_centered_worlds(s):
            if evidence != AWAKE and c.today != evidence:
                continue
            if c.group == "T":
                t_mass += c.awakening_measure
            else:
                h_mass += c.awakening_measure
        return t_mass / (t_mass + h_mass)

    p = s.group_probability
    if evidence == AWAKE:
        h_mass = p  # every H world wakes its subject once
        t_mass = 1 - p
    else:
        h_mass = p * s.h_weight(evidence)
        t_mass = (1 - p) if s.t_weight(evidence) > 0 else Fraction(0)
    return t_mass / (t_mass + h_mass)


def day_likelihoods(s: BeautyScenario) -> dict[str, dict[str, Fraction]]:
    """Per-group probability of each day conditional on being awake."""
    centers = enumerate_centered_worlds(s)
    out: dict[str, dict[str, Fraction]] = {"H": {}, "T": {}}
    for group in ("H", "T"):
        group_centers = [c for c in centers if c.group == group]
        total = sum(c.awakening_measure for c in group_centers)
        for c in group_centers:
            out[group][c.today] = c.awakening_measure / total
    return out


def posterior_odds(s: BeautyScenario, policy: str, evidence: str = AWAKE) -> Fraction | None:
    """Odds of T against H; None when the posterior is certainty."""
    post = posterior(s, policy, evidence)
    if post == 1:
        return None
    return post / (1 - post)
