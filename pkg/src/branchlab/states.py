"""Branching-measurement state core.

Implements:
  * OutcomePartition / StateVector - normalized states over labeled outcomes,
    with two kernels: exact (squared-modulus weights kept as rationals, enough
    for every weight-level operation) and float (complex amplitudes, 1e-9
    normalization tolerance).
  * StateMap / apply_map - identity, dense-matrix, and table maps; images are
    renormalized and zero-norm images raise SingularMapError. Matrix maps
    compute in the float kernel; table maps preserve whatever kernel their
    output states carry.
  * branch / GlobalState - measurement splits a state into one tagged branch
    per outcome label; branch identity is (label, tag) and duplicate
    identities merge by adding squared-modulus weights.
  * erase / global_equal - replace every branch label with the distinguished
    "erased" label, preserving tags and weights; equality compares the
    (label, tag) -> weight tables and ignores phases.

Branches are (label, tag, weight) records, not Hilbert-space factors: all
downstream consumers work from branch identity plus squared-modulus weight,
and no branch-counting structure is modeled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .errors import DomainError, SingularMapError
from .numeric import (
    NORM_TOL,
    SINGULAR_TOL,
    Number,
    exactify,
    fmt_number,
    is_exact,
    numbers_equal,
    weight_is_one,
    weight_is_zero,
)

ERASED = "erased"

Tag = Hashable


@dataclass(frozen=True)
class OutcomePartition:
    """Ordered, duplicate-free collection of outcome labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("a partition needs at least one outcome label")
        seen = set()
        for label in self.labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"outcome labels must be nonempty strings, got {label!r}")
            if label in seen:
                raise ValueError(f"duplicate outcome label {label!r}")
            seen.add(label)

    @classmethod
    def of(cls, labels: Iterable[str]) -> "OutcomePartition":
        return cls(tuple(labels))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown outcome label {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class StateVector:
    """Normalized state over a labeled outcome partition.

    Exactly one of `amplitudes` (float kernel, complex entries aligned with
    the partition order) or `exact_weights` (exact kernel, rational squared
    moduli summing to exactly 1) is set. In the exact kernel the amplitude of
    a label is taken to be the nonnegative real root of its weight; phases
    carry no meaning anywhere in this package.
    """

    partition: OutcomePartition
    amplitudes: tuple[complex, ...] | None = None
    exact_weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if (self.amplitudes is None) == (self.exact_weights is None):
            raise ValueError("give exactly one of amplitudes= or exact_weights=")
        n = len(self.partition)
        if self.amplitudes is not None:
            amps = tuple(complex(a) for a in self.amplitudes)
            object.__setattr__(self, "amplitudes", amps)
            if len(amps) != n:
                raise ValueError("amplitude count does not match partition size")
            if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amps):
                raise ValueError("amplitudes must be finite")
            total = sum(abs(a) ** 2 for a in amps)
            if abs(total - 1.0) > NORM_TOL:
                raise ValueError(f"state not normalized: sum of squared moduli is {total!r}")
        else:
            weights = tuple(exactify(w) for w in self.exact_weights)
            object.__setattr__(self, "exact_weights", weights)
            if len(weights) != n:
                raise ValueError("weight count does not match partition size")
            if any(w < 0 for w in weights):
                raise ValueError("weights must be nonnegative")
            if sum(weights) != 1:
                raise ValueError("exact-kernel weights must sum to exactly 1")

    @classmethod
    def from_amplitudes(
        cls, amplitudes: Mapping[str, complex], partition: OutcomePartition | None = None
    ) -> "StateVector":
        part = partition if partition is not None else OutcomePartition.of(amplitudes)
        for label in amplitudes:
            if label not in part:
                raise DomainError(f"amplitude given for unknown label {label!r}")
        return cls(part, amplitudes=tuple(complex(amplitudes.get(l, 0.0)) for l in part))

    @classmethod
    def from_weights(
        cls,
        weights: Mapping[str, object],
        partition: OutcomePartition | None = None,
        exact: bool | None = None,
    ) -> "StateVector":
        """Build a state from squared-modulus weights.

        `exact=None` infers the kernel: exact unless any value is a float.
        """
        part = partition if partition is not None else OutcomePartition.of(weights)
        for label in weights:
            if label not in part:
                raise DomainError(f"weight given for unknown label {label!r}")
        values = [weights.get(l, 0) for l in part]
        if exact is None:
            exact = not any(isinstance(v, float) for v in values)
        if exact:
            return cls(part, exact_weights=tuple(exactify(v) for v in values))
        return cls(part, amplitudes=tuple(math.sqrt(float(v)) + 0j for v in values))

    @property
    def exact(self) -> bool:
        return self.exact_weights is not None

    def weight(self, label: str) -> Number:
        i = self.partition.index(label)
        if self.exact_weights is not None:
            return self.exact_weights[i]
        return abs(self.amplitudes[i]) ** 2

    def weights(self) -> dict[str, Number]:
        return {label: self.weight(label) for label in self.partition}

    def amplitude(self, label: str) -> complex:
        i = self.partition.index(label)
        if self.amplitudes is not None:
            return self.amplitudes[i]
        return complex(math.sqrt(float(self.exact_weights[i])))

    def support(self) -> frozenset[str]:
        return frozenset(l for l in self.partition if not weight_is_zero(self.weight(l)))

    def has_extremal_weight(self) -> bool:
        """True when some outcome carries weight exactly 0 or exactly 1."""
        return any(
            weight_is_zero(w) or weight_is_one(w) for w in self.weights().values()
        )

    def to_json_dict(self) -> dict:
        if self.exact:
            return {
                "partition": list(self.partition.labels),
                "weights": {l: fmt_number(w) for l, w in self.weights().items()},
            }
        return {
            "partition": list(self.partition.labels),
            "amplitudes": {
                l: [self.amplitude(l).real, self.amplitude(l).imag] for l in self.partition
            },
        }

    @classmethod
    def from_json_dict(cls, obj: Mapping, exact: bool = True) -> "StateVector":
        part = OutcomePartition.of(obj["partition"])
        if "weights" in obj:
            return cls.from_weights(obj["weights"], part, exact=exact)
        raw = obj["amplitudes"]
        amps = {l: complex(re, im) for l, (re, im) in raw.items()}
        return cls.from_amplitudes(amps, part)


def state_equal(a: StateVector, b: StateVector, tol: float = NORM_TOL) -> bool:
    """Weight-level (phase-blind) equality over the same label set."""
    if set(a.partition.labels) != set(b.partition.labels):
        return False
    return all(numbers_equal(a.weight(l), b.weight(l), tol) for l in a.partition)


def born_weights(state: StateVector, partition: OutcomePartition) -> dict[str, Number]:
    """Squared-modulus weight of each outcome label; sums to 1 by construction."""
    if set(state.partition.labels) != set(partition.labels):
        raise DomainError("state domain does not match the given partition")
    return {label: state.weight(label) for label in partition}


@dataclass(frozen=True)
class StateMap:
    """A state-to-state recipe: identity, dense matrix, or explicit table.

    Matrix maps act on amplitudes in the partition's basis order and are
    evaluated in the float kernel. Table maps match inputs by weight-level
    state equality and return their output states unchanged.
    """

    kind: str
    matrix: tuple[tuple[complex, ...], ...] | None = None
    table: tuple[tuple[StateVector, StateVector], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("identity", "matrix", "table"):
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.kind == "matrix" and self.matrix is None:
            raise ValueError("matrix map needs matrix entries")
        if self.kind == "table" and not self.table:
            raise ValueError("table map needs at least one entry")

    @classmethod
    def identity(cls) -> "StateMap":
        return cls(kind="identity")

    @classmethod
    def from_matrix(cls, rows: Iterable[Iterable[complex]]) -> "StateMap":
        matrix = tuple(tuple(complex(x) for x in row) for row in rows)
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise ValueError("matrix must be square and nonempty")
        return cls(kind="matrix", matrix=matrix)

    @classmethod
    def from_table(
        cls, pairs: Iterable[tuple[StateVector, StateVector]]
    ) -> "StateMap":
        return cls(kind="table", table=tuple(pairs))


def apply_map(m: StateMap, state: StateVector) -> StateVector:
    """Apply a state map and renormalize the image."""
    if m.kind == "identity":
        return state
    if m.kind == "table":
        for src, dst in m.table:
            if state_equal(src, state):
                return dst
        raise DomainError("no table entry matches the given state")
    n = len(state.partition)
    if len(m.matrix) != n:
        raise DomainError("matrix dimension does not match the partition")
    amps = [state.amplitude(l) for l in state.partition]
    image = [sum(m.matrix[i][j] * amps[j] for j in range(n)) for i in range(n)]
    norm_sq = sum(abs(z) ** 2 for z in image)
    if norm_sq <= SINGULAR_TOL:
        raise SingularMapError("map image has zero norm and cannot be renormalized")
    scale = 1.0 / math.sqrt(norm_sq)
    return StateVector(state.partition, amplitudes=tuple(z * scale for z in image))


@dataclass(frozen=True)
class Branch:
    """One branch of a post-measurement global state.

    `weight` is the squared amplitude modulus; `amplitude` exposes the
    nonnegative real root for callers that want one.
    """

    label: str
    tag: Tag
    weight: Number

    def __post_init__(self):
        w = self.weight
        if is_exact(w):
            if w < 0:
                raise ValueError("branch weight must be nonnegative")
        else:
            if not math.isfinite(float(w)) or float(w) < -NORM_TOL:
                raise ValueError(f"branch weight must be finite and nonnegative, got {w!r}")

    @property
    def amplitude(self) -> float:
        return math.sqrt(float(self.weight))

    @property
    def identity(self) -> tuple[str, Tag]:
        return (self.label, self.tag)


@dataclass(frozen=True)
class GlobalState:
    """Multiset of tagged branches with unit total weight.

    Construction merges branches sharing the same (label, tag) identity by
    adding their weights, so the erased-state merge rule holds everywhere.
    """

    branches: tuple[Branch, ...]

    def __post_init__(self):
        merged: dict[tuple[str, Tag], Number] = {}
        for b in self.branches:
            key = b.identity
            merged[key] = merged[key] + b.weight if key in merged else b.weight
        object.__setattr__(
            self, "branches", tuple(Branch(l, t, w) for (l, t), w in merged.items())
        )
        total = sum(b.weight for b in self.branches)
        if all(is_exact(b.weight) for b in self.branches):
            if total != 1:
                raise ValueError(f"branch weights must sum to exactly 1, got {total}")
        elif abs(float(total) - 1.0) > NORM_TOL:
            raise ValueError(f"branch weights must sum to 1, got {float(total)!r}")

    @classmethod
    def of(cls, branches: Iterable[Branch]) -> "GlobalState":
        return cls(tuple(branches))

    @property
    def exact(self) -> bool:
        return all(is_exact(b.weight) for b in self.branches)

    def weight_table(self) -> dict[tuple[str, Tag], Number]:
        return {b.identity: b.weight for b in self.branches}

    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.branches)

    def to_json_dict(self) -> dict:
        def render_tag(tag):
            if is_exact(tag) or isinstance(tag, float):
                return fmt_number(tag)
            return tag

        return {
            "branches": [
                {"label": b.label, "tag": render_tag(b.tag), "weight": fmt_number(b.weight)}
                for b in self.branches
            ]
        }


def branch(
    state: StateVector,
    partition: OutcomePartition,
    tagger: Callable[[str], Tag],
    keep_zero_branches: bool = False,
) -> GlobalState:
    """Split a normalized state into one tagged branch per outcome label.

    Zero-weight labels are dropped unless `keep_zero_branches` is set, in
    which case they appear as explicit zero-weight branches.
    """
    if set(state.partition.labels) != set(partition.labels):
        raise DomainError("state domain does not match the given partition")
    out = []
    for label in partition:
        w = state.weight(label)
        if weight_is_zero(w) and not keep_zero_branches:
            continue
        out.append(Branch(label, tagger(label), w))
    return GlobalState.of(out)


def erase(g: GlobalState) -> GlobalState:
    """Forget which outcome each branch recorded; keep tags and weights.

    Branches that become identical merge by weight addition. Idempotent.
    """
    return GlobalState.of(Branch(ERASED, b.tag, b.weight) for b in g.branches)


def global_equal(a: GlobalState, b: GlobalState) -> bool:
    """Phase-blind equality: the (label, tag) -> weight tables agree."""
    ta, tb = a.weight_table(), b.weight_table()
    if set(ta) != set(tb):
        return False
    return all(numbers_equal(ta[key], tb[key]) for key in ta)
