"""Round-robin best-response dynamics and equilibrium accounting.

Starting from a profile (all multipliers 1 unless configured otherwise),
bidders update to their exact best response in index order. The dynamics
converge when a full pass changes nobody. Convergence is then re-checked
independently (`verified`): every bidder's best-response value may exceed its
achieved value by at most `value_tolerance`, and every bidder's ROI
constraint must hold in the realized outcome. Non-convergence within
`max_rounds` is reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bestresponse import best_response_against_bids
from .mechanisms import (BidderDependent, MechanismSpec, bidder_dep_required, run_all)
from .model import (Instance, MultiplierProfile, Outcome, ZERO, bidder_payment,
                    bidder_value, optimal_welfare, welfare)
from .rationals import Infinity


@dataclass(frozen=True, slots=True)
class DynamicsConfig:
    max_rounds: int = 50
    value_tolerance: Fraction = ZERO
    initial_profile: MultiplierProfile | None = None

    def __post_init__(self) -> None:
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.value_tolerance < 0:
            raise ValueError("value_tolerance must be >= 0")


@dataclass(frozen=True, slots=True)
class Diagnostics:
    """Welfare accounting for the bidder-dependent mechanism.

    `core_auctions[i]` holds the rightful-winner auctions of i whose value
    survives i's own prescreen level. Bidders split by multiplier against
    their calibrated one: `aggressive` bid at or above it, `conservative`
    below (an infinite calibration is never reached, so those bidders are
    conservative). `core_welfare` adds up allocated value minus cost on
    conservative bidders' core auctions; `payment_surplus` adds payments
    minus winner costs over aggressive bidders' rightful auctions and over
    core auctions lost by their conservative owner. At a verified
    equilibrium each is a welfare lower bound.
    """

    core_auctions: tuple[frozenset[int], ...]
    aggressive: frozenset[int]
    conservative: frozenset[int]
    core_welfare: Fraction
    payment_surplus: Fraction


@dataclass(frozen=True, slots=True)
class EquilibriumReport:
    profile: MultiplierProfile
    converged: bool
    rounds_used: int
    verified: bool
    outcome: Outcome
    welfare: Fraction
    opt: Fraction
    poa: Fraction | None
    diagnostics: Diagnostics | None


def run_dynamics(inst: Instance, spec: MechanismSpec,
                 config: DynamicsConfig = DynamicsConfig()) -> EquilibriumReport:
    """Run round-robin best responses until a silent pass or max_rounds."""
    n = inst.num_bidders
    if config.initial_profile is not None:
        if len(config.initial_profile.multipliers) != n:
            raise ValueError("initial profile size does not match the instance")
        theta = list(config.initial_profile.multipliers)
    else:
        theta = [Fraction(1)] * n

    bid_rows = [[t * v if v else v for v in inst.values[i]] for i, t in enumerate(theta)]
    converged = False
    rounds_used = 0
    for _ in range(config.max_rounds):
        rounds_used += 1
        changed = False
        for i in range(n):
            reply = best_response_against_bids(inst, spec, i, bid_rows)
            if reply.multiplier != theta[i]:
                theta[i] = reply.multiplier
                bid_rows[i] = [theta[i] * v if v else v for v in inst.values[i]]
                changed = True
        if not changed:
            converged = True
            break

    profile = MultiplierProfile(tuple(theta))
    outcome = run_all(spec, inst, profile)

    verified = True
    for i in range(n):
        reply = best_response_against_bids(inst, spec, i, bid_rows)
        achieved = bidder_value(inst, outcome, i)
        if reply.total_value - achieved > config.value_tolerance:
            verified = False
            break
        if bidder_value(inst, outcome, i) < bidder_payment(outcome, i):
            verified = False
            break

    total = welfare(inst, outcome)
    opt = optimal_welfare(inst)
    poa = total / opt if opt > 0 else None
    diag = diagnostics(inst, spec, profile, outcome) if isinstance(spec, BidderDependent) else None
    return EquilibriumReport(profile, converged, rounds_used, verified, outcome,
                             total, opt, poa, diag)


def poa_ratio(inst: Instance, outcome: Outcome) -> Fraction:
    """Welfare of the outcome over optimal welfare; optimum must be positive."""
    opt = optimal_welfare(inst)
    if opt <= 0:
        raise ValueError("optimal welfare is zero; the ratio is undefined")
    return welfare(inst, outcome) / opt


def diagnostics(inst: Instance, spec: BidderDependent, profile: MultiplierProfile,
                outcome: Outcome) -> Diagnostics:
    """Accounting described on `Diagnostics`; `outcome` must come from `spec`."""
    n = inst.num_bidders
    core: list[frozenset[int]] = []
    for i in range(n):
        alpha = spec.cost_multiplier[i]
        members = set()
        for j in spec.rightful_auctions[i]:
            required = bidder_dep_required(alpha, inst.costs[i][j])
            if not isinstance(required, Infinity) and inst.values[i][j] >= required:
                members.add(j)
        core.append(frozenset(members))

    aggressive = frozenset(
        i for i in range(n)
        if not isinstance(spec.cost_multiplier[i], Infinity)
        and profile.multipliers[i] >= spec.cost_multiplier[i]
    )
    conservative = frozenset(range(n)) - aggressive

    # Per auction: total payment minus the winner's cost.
    paid_minus_cost = []
    for j in range(inst.num_auctions):
        total = ZERO
        for i in range(n):
            total += outcome.payments[i][j]
            if outcome.allocation[i][j]:
                total -= inst.costs[i][j]
        paid_minus_cost.append(total)

    core_welfare = ZERO
    for i in conservative:
        for j in core[i]:
            if outcome.allocation[i][j]:
                core_welfare += inst.values[i][j] - inst.costs[i][j]

    payment_surplus = ZERO
    for i in aggressive:
        for j in spec.rightful_auctions[i]:
            payment_surplus += paid_minus_cost[j]
    for i in conservative:
        for j in core[i]:
            own = outcome.payments[i][j]
            if outcome.allocation[i][j]:
                own -= inst.costs[i][j]
            payment_surplus += paid_minus_cost[j] - own
    return Diagnostics(tuple(core), aggressive, conservative, core_welfare, payment_surplus)
