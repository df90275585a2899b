"""Market model: bidders, auctions, values, user costs, allocations.

Bidder i has value values[i][j] and imposes user cost costs[i][j] when it
wins auction j. Bidders are ROI-constrained value maximizers: they maximize
won value subject to total payment not exceeding total won value. Welfare
counts value minus user cost, so an allocation can destroy welfare even
though every bid is nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .rationals import as_fraction

Matrix = tuple[tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def _check_matrix(name: str, rows: Matrix, num_rows: int, num_cols: int) -> None:
    if len(rows) != num_rows:
        raise ValueError(f"{name} has {len(rows)} rows, expected {num_rows}")
    for i, row in enumerate(rows):
        if len(row) != num_cols:
            raise ValueError(f"{name} row {i} has {len(row)} entries, expected {num_cols}")
        for j, entry in enumerate(row):
            if not isinstance(entry, Fraction):
                raise TypeError(f"{name}[{i}][{j}] is {type(entry).__name__}, expected Fraction")
            if entry < 0:
                raise ValueError(f"{name}[{i}][{j}] is negative: {entry}")


@dataclass(frozen=True, slots=True)
class Instance:
    """One market: values[i][j] and costs[i][j] for bidder i, auction j."""

    values: Matrix
    costs: Matrix

    def __post_init__(self) -> None:
        n = len(self.values)
        if n == 0:
            raise ValueError("instance needs at least one bidder")
        m = len(self.values[0])
        if m == 0:
            raise ValueError("instance needs at least one auction")
        _check_matrix("values", self.values, n, m)
        _check_matrix("costs", self.costs, n, m)

    @property
    def num_bidders(self) -> int:
        return len(self.values)

    @property
    def num_auctions(self) -> int:
        return len(self.values[0])

    @staticmethod
    def from_rows(values: Iterable[Iterable[int | str | Fraction]],
                  costs: Iterable[Iterable[int | str | Fraction]]) -> Instance:
        """Build an instance from exact entries (ints, "p/q" text, Fractions)."""
        conv = lambda rows: tuple(tuple(as_fraction(x) for x in row) for row in rows)
        return Instance(conv(values), conv(costs))


@dataclass(frozen=True, slots=True)
class MultiplierProfile:
    """Per-bidder uniform bid multipliers; bidder i bids multipliers[i] * value."""

    multipliers: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.multipliers:
            raise ValueError("profile needs at least one bidder")
        for i, theta in enumerate(self.multipliers):
            if not isinstance(theta, Fraction):
                raise TypeError(f"multiplier {i} is {type(theta).__name__}, expected Fraction")
            if theta < 1:
                raise ValueError(f"multiplier {i} is {theta}, must be >= 1")

    @staticmethod
    def uniform(num_bidders: int, theta: int | str | Fraction = 1) -> MultiplierProfile:
        return MultiplierProfile((as_fraction(theta),) * num_bidders)

    @staticmethod
    def of(multipliers: Iterable[int | str | Fraction]) -> MultiplierProfile:
        return MultiplierProfile(tuple(as_fraction(t) for t in multipliers))


@dataclass(frozen=True, slots=True)
class Outcome:
    """Allocation and payments across all auctions.

    allocation[i][j] is 0/1, payments[i][j] is 0 for losers, and winners[j]
    names the (at most one) winner of auction j.
    """

    allocation: tuple[tuple[int, ...], ...]
    payments: Matrix
    winners: tuple[int | None, ...]

    def __post_init__(self) -> None:
        m = len(self.winners)
        for j in range(m):
            column = [i for i in range(len(self.allocation)) if self.allocation[i][j]]
            if len(column) > 1:
                raise ValueError(f"auction {j} has multiple winners: {column}")
            winner = column[0] if column else None
            if winner != self.winners[j]:
                raise ValueError(f"auction {j}: winners[{j}]={self.winners[j]} "
                                 f"but allocation says {winner}")
            for i, row in enumerate(self.payments):
                if i != winner and row[j] != 0:
                    raise ValueError(f"auction {j}: loser {i} has nonzero payment {row[j]}")


def bids_from(profile: MultiplierProfile, inst: Instance) -> Matrix:
    """Uniform bids: bidder i bids multipliers[i] * values[i][j] everywhere."""
    if len(profile.multipliers) != inst.num_bidders:
        raise ValueError(f"profile has {len(profile.multipliers)} bidders, "
                         f"instance has {inst.num_bidders}")
    rows = []
    for theta, vrow in zip(profile.multipliers, inst.values):
        if theta == 1:
            rows.append(vrow)
        else:
            rows.append(tuple(v if not v else theta * v for v in vrow))
    return tuple(rows)


def welfare(inst: Instance, outcome: Outcome) -> Fraction:
    """Total value minus user cost of the allocation. Can be negative."""
    total = ZERO
    for i, row in enumerate(outcome.allocation):
        for j, won in enumerate(row):
            if won:
                total += inst.values[i][j] - inst.costs[i][j]
    return total


def optimal_welfare(inst: Instance) -> Fraction:
    """Best possible welfare: per auction, the largest value-minus-cost if
    positive, else leave the auction unallocated."""
    total = ZERO
    for j in range(inst.num_auctions):
        best = max(inst.values[i][j] - inst.costs[i][j] for i in range(inst.num_bidders))
        if best > 0:
            total += best
    return total


def bidder_value(inst: Instance, outcome: Outcome, bidder: int) -> Fraction:
    return sum((inst.values[bidder][j] for j, won in enumerate(outcome.allocation[bidder]) if won),
               ZERO)


def bidder_payment(outcome: Outcome, bidder: int) -> Fraction:
    return sum(outcome.payments[bidder], ZERO)


def roi_satisfied(inst: Instance, outcome: Outcome, bidder: int) -> bool:
    """True when the bidder's total won value covers its total payment."""
    return bidder_value(inst, outcome, bidder) >= bidder_payment(outcome, bidder)
