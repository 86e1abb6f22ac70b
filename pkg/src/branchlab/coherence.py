"""Dutch-book coherence checking over a finite outcome partition.

Betting semantics: an agent whose credence in outcome L is q will buy or
sell a unit bet on L (pays 1 if L) at price q. Bets settle per branch -
each branch's occupant is paid according to that branch's outcome - so an
incoherent agent is one who can be made strictly worse off in every branch
that actually occurs.

The verdict is exact: credences are coerced to rationals (floats at decimal
face value), and a vector is coherent iff it is a finitely additive
probability measure on the partition that puts no weight outside the given
support. Incoherent verdicts ship an explicit certificate whose sure loss
can be re-derived from the bets alone; the certificate is found analytically
(buy everything when the quotients over-cover, sell everything when they
under-cover, buy the impossible outcomes when the mass sits off-support),
which covers every measure-violating vector. A bounded integer-stake search
is also provided as an independent cross-check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .credence import CredenceAssignment
from .errors import DomainError, InvalidCredence
from .numeric import exactify, fmt_number
from .states import OutcomePartition


@dataclass(frozen=True)
class Bet:
    """`stake` signed copies of a unit bet: positive bought, negative sold."""

    outcome: str
    payout: Fraction
    price: Fraction
    stake: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "payout", exactify(self.payout))
        object.__setattr__(self, "price", exactify(self.price))
        object.__setattr__(self, "stake", exactify(self.stake))
        if self.payout <= 0:
            raise ValueError("bet payout must be positive")


@dataclass(frozen=True)
class Book:
    bets: tuple[Bet, ...]

    def per_branch_net(self, partition: OutcomePartition) -> dict[str, Fraction]:
        """Agent's net in each branch: stake * (payout if it fires, minus price)."""
        net = {label: Fraction(0) for label in partition}
        for bet in self.bets:
            if bet.outcome not in net:
                raise DomainError(f"bet on unknown outcome {bet.outcome!r}")
            for label in net:
                fired = bet.payout if label == bet.outcome else Fraction(0)
                net[label] += bet.stake * (fired - bet.price)
        return net

    def to_json_dict(self) -> dict:
        return {
            "bets": [
                {
                    "outcome": b.outcome,
                    "payout": fmt_number(b.payout),
                    "price": fmt_number(b.price),
                    "stake": fmt_number(b.stake),
                }
                for b in self.bets
            ]
        }


@dataclass(frozen=True)
class CoherenceCertificate:
    coherent: bool
    book: Book | None = None
    guaranteed_loss: Fraction | None = None

    def to_json_dict(self, partition: OutcomePartition | None = None) -> dict:
        if self.coherent:
            return {"verdict": "coherent"}
        out = {
            "verdict": "incoherent",
            "guaranteed_loss": fmt_number(self.guaranteed_loss),
            "book": self.book.to_json_dict(),
        }
        if partition is not None:
            out["book"]["per_branch_net"] = {
                l: fmt_number(v) for l, v in self.book.per_branch_net(partition).items()
            }
        return out


def _exact_credences(
    credences: CredenceAssignment | Mapping[str, object],
    partition: OutcomePartition,
) -> dict[str, Fraction]:
    table = credences.weights if isinstance(credences, CredenceAssignment) else credences
    if set(table) != set(partition.labels):
        raise DomainError("credences do not cover the partition")
    out = {}
    for label in partition:
        q = exactify(table[label])
        if q < 0:
            raise InvalidCredence(f"negative credence {q} on {label!r}")
        out[label] = q
    return out


def check_coherence(
    credences: CredenceAssignment | Mapping[str, object],
    partition: OutcomePartition,
    support: Iterable[str] | None = None,
    stake_cap: int = 10,
) -> CoherenceCertificate:
    """Coherent iff the credences are a probability measure on the live branches.

    `support` names the outcomes whose branches actually occur (default: all
    of them); only those branches need to lose for a book to count. Branch
    weights beyond zero/nonzero never enter the verdict.
    """
    q = _exact_credences(credences, partition)
    live = tuple(partition) if support is None else tuple(support)
    for label in live:
        if label not in partition:
            raise DomainError(f"support label {label!r} not in partition")
    if not live:
        raise DomainError("support must contain at least one outcome")
    dead_mass = [label for label in partition if label not in live and q[label] > 0]
    total = sum(q.values())

    if total == 1 and not dead_mass:
        return CoherenceCertificate(coherent=True)

    if total > 1:
        # Over-covering quotients: buy one unit bet on every outcome. The agent
        # pays `total` and collects exactly 1 whichever branch settles it.
        bets = [Bet(label, Fraction(1), q[label], Fraction(1)) for label in partition]
    elif total < 1:
        # Under-covering: sell every unit bet instead.
        bets = [Bet(label, Fraction(1), q[label], Fraction(-1)) for label in partition]
    else:
        # Measure-like totals but mass on branches that never occur: buying
        # those bets costs the dead mass and pays nothing in any live branch.
        bets = [Bet(label, Fraction(1), q[label], Fraction(1)) for label in dead_mass]

    book = Book(tuple(bets))
    if any(abs(b.stake) > stake_cap for b in book.bets):
        raise ValueError("analytic book exceeded the stake cap")
    net = book.per_branch_net(partition)
    loss = min(-net[label] for label in live)
    assert loss > 0, "analytic construction must yield a strict all-branch loss"
    return CoherenceCertificate(coherent=False, book=book, guaranteed_loss=loss)


def search_book(
    credences: CredenceAssignment | Mapping[str, object],
    partition: OutcomePartition,
    support: Iterable[str] | None = None,
    stake_cap: int = 3,
) -> Book | None:
    """Brute-force integer-stake search for an all-branch losing book.

    Independent of the analytic construction; intended for cross-checks on
    small partitions (the space is (2*cap+1)^n).
    """
    q = _exact_credences(credences, partition)
    live = tuple(partition) if support is None else tuple(support)
    labels = tuple(partition)
    stakes_range = range(-stake_cap, stake_cap + 1)
    for stakes in itertools.product(stakes_range, repeat=len(labels)):
        if all(s == 0 for s in stakes):
            continue
        book = Book(
            tuple(
                Bet(label, Fraction(1), q[label], Fraction(s))
                for label, s in zip(labels, stakes)
                if s != 0
            )
        )
        net = book.per_branch_net(partition)
        if all(net[label] < 0 for label in live):
            return book
    return None
