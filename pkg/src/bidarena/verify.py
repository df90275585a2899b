"""Seeded property checks shared by the CLI verifier and the test suite.

Every check here is exact: violations compare Fractions, never floats. Each
function returns counts plus a list of violation strings that embed the seed
and instance JSON, so any failure can be replayed directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bestresponse import (ResponseProblem, best_response, best_response_oracle,
                           quasilinear_best_bid_check)
from .equilibrium import DynamicsConfig, diagnostics, run_dynamics
from .instances import RandomFamilyParams, instance_to_json, random_instance
from .mechanisms import (GlobalCostMultiplier, MechanismSpec, SecondPrice,
                         bidder_dep_required, compute_auction_params,
                         compute_bidder_params, calibrate_single_bidder,
                         mechanism_label, min_winning_bid, run_all, run_auction)
from .model import (Instance, MultiplierProfile, ZERO, bids_from, optimal_welfare,
                    roi_satisfied, welfare)
from .rationals import Infinity

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def family_instance(seed: int, *, zero_cost_probability: Fraction = Fraction(1, 8),
                    num_bidders: int | None = None,
                    grid_denominator: int = 4) -> Instance:
    """Small seeded instance; shape (1..4 x 1..4) is derived from the seed."""
    n = num_bidders if num_bidders is not None else 1 + seed % 4
    m = 1 + (seed // 4) % 4
    return random_instance(RandomFamilyParams(
        num_bidders=n, num_auctions=m, seed=seed,
        grid_denominator=grid_denominator,
        zero_cost_probability=zero_cost_probability))


def probe_profile(seed: int, num_bidders: int) -> MultiplierProfile:
    """Deterministic rival multipliers cycling through 1, 3/2, 2."""
    choices = (Fraction(1), Fraction(3, 2), Fraction(2))
    return MultiplierProfile(tuple(choices[(seed + i) % 3] for i in range(num_bidders)))


def standard_specs(inst: Instance) -> list[MechanismSpec]:
    specs: list[MechanismSpec] = [
        SecondPrice(),
        GlobalCostMultiplier(Fraction(1)),
        GlobalCostMultiplier(Fraction(1, 2)),
        compute_auction_params(inst),
        compute_bidder_params(inst),
    ]
    if inst.num_bidders == 1:
        specs.append(calibrate_single_bidder(inst))
    return specs


def build_spec(kind: str, inst: Instance) -> MechanismSpec:
    if kind == "second-price":
        return SecondPrice()
    if kind == "auction-dep":
        return compute_auction_params(inst)
    if kind == "bidder-dep":
        return compute_bidder_params(inst)
    if kind == "single-bidder":
        return calibrate_single_bidder(inst)
    if kind.startswith("global:"):
        from .rationals import parse_rational
        return GlobalCostMultiplier(parse_rational(kind.split(":", 1)[1]))
    raise ValueError(f"unknown mechanism kind {kind!r}")


def _describe(seed: int, inst: Instance, detail: str) -> str:
    return f"seed={seed} {detail} instance={json.dumps(instance_to_json(inst))}"


@dataclass
class FamilyStats:
    runs: int = 0
    converged: int = 0
    verified: int = 0
    bound_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def convergence_rate(self) -> Fraction:
        return Fraction(self.converged, self.runs) if self.runs else Fraction(0)


def equilibrium_family(kind: str, seeds: Iterable[int], *, welfare_floor: Fraction,
                       zero_cost_probability: Fraction = Fraction(1, 8),
                       max_rounds: int = 50) -> FamilyStats:
    """Run dynamics per seed; converged-and-verified runs must reach
    welfare >= welfare_floor * opt, exactly."""
    stats = FamilyStats()
    for seed in seeds:
        inst = family_instance(seed, zero_cost_probability=zero_cost_probability)
        spec = build_spec(kind, inst)
        report = run_dynamics(inst, spec, DynamicsConfig(max_rounds=max_rounds))
        stats.runs += 1
        if report.converged:
            stats.converged += 1
        if report.verified:
            stats.verified += 1
        if report.converged and report.verified:
            stats.bound_checked += 1
            if report.welfare < welfare_floor * report.opt:
                stats.violations.append(_describe(
                    seed, inst,
                    f"{kind}: welfare {report.welfare} < {welfare_floor} * opt {report.opt}"))
    return stats


def single_bidder_family(count: int, *, max_rounds: int = 50,
                         start_seed: int = 0, seed_limit: int = 100000) -> FamilyStats:
    """Calibrated single-bidder markets with positive optimum: dynamics must
    converge to a verified equilibrium with welfare exactly optimal."""
    stats = FamilyStats()
    seed = start_seed
    while stats.runs < count:
        if seed >= start_seed + seed_limit:
            raise RuntimeError("could not find enough positive-optimum seeds")
        inst = family_instance(seed, num_bidders=1)
        seed += 1
        if optimal_welfare(inst) <= 0:
            continue
        spec = calibrate_single_bidder(inst)
        report = run_dynamics(inst, spec, DynamicsConfig(max_rounds=max_rounds))
        stats.runs += 1
        if report.converged:
            stats.converged += 1
        if report.verified:
            stats.verified += 1
        if not (report.converged and report.verified):
            stats.violations.append(_describe(seed - 1, inst, "single-bidder: did not settle"))
            continue
        stats.bound_checked += 1
        if report.poa != 1:
            stats.violations.append(_describe(
                seed - 1, inst, f"single-bidder: poa {report.poa} != 1"))
    return stats


@dataclass
class CheckStats:
    checks: int = 0
    violations: list[str] = field(default_factory=list)


def accounting_checks(seeds: Iterable[int], *, max_rounds: int = 50) -> CheckStats:
    """Bidder-dependent welfare accounting on seeded instances.

    Per instance (bid-independent): each bidder's core auctions retain at
    least half the value-minus-cost of its rightful auctions. Per tested
    ROI-feasible profile (truthful, plus the converged equilibrium when there
    is one): max(core_welfare, payment_surplus) <= realized welfare.
    """
    stats = CheckStats()
    for seed in seeds:
        inst = family_instance(seed)
        spec = compute_bidder_params(inst)

        for i in range(inst.num_bidders):
            alpha = spec.cost_multiplier[i]
            rightful = spec.rightful_auctions[i]
            core_total = ZERO
            full_total = ZERO
            for j in rightful:
                margin = inst.values[i][j] - inst.costs[i][j]
                full_total += margin
                required = bidder_dep_required(alpha, inst.costs[i][j])
                if not isinstance(required, Infinity) and inst.values[i][j] >= required:
                    core_total += margin
            stats.checks += 1
            if 2 * core_total < full_total:
                stats.violations.append(_describe(
                    seed, inst, f"bidder {i}: core value {core_total} < half of {full_total}"))

        profiles = [MultiplierProfile.uniform(inst.num_bidders)]
        report = run_dynamics(inst, spec, DynamicsConfig(max_rounds=max_rounds))
        if report.converged and report.verified:
            profiles.append(report.profile)
        for profile in profiles:
            outcome = run_all(spec, inst, profile)
            if not all(roi_satisfied(inst, outcome, i) for i in range(inst.num_bidders)):
                continue  # the accounting bounds only apply to ROI-feasible play
            diag = diagnostics(inst, spec, profile, outcome)
            realized = welfare(inst, outcome)
            stats.checks += 1
            if diag.core_welfare > realized or diag.payment_surplus > realized:
                stats.violations.append(_describe(
                    seed, inst,
                    f"profile {[str(t) for t in profile.multipliers]}: "
                    f"bounds ({diag.core_welfare}, {diag.payment_surplus}) "
                    f"exceed welfare {realized}"))
    return stats


def truthfulness_probes(seeds: Iterable[int], *, single_bidder: bool = False) -> CheckStats:
    """Bidding the true value must be a per-auction quasilinear best response
    against fixed rival bids, for every mechanism and every probe."""
    stats = CheckStats()
    for seed in seeds:
        inst = family_instance(seed, num_bidders=1 if single_bidder else None)
        bids = bids_from(probe_profile(seed, inst.num_bidders), inst)
        specs = ([calibrate_single_bidder(inst)] if single_bidder
                 else standard_specs(inst))
        for spec in specs:
            for j in range(inst.num_auctions):
                column = [bids[i][j] for i in range(inst.num_bidders)]
                for i in range(inst.num_bidders):
                    stats.checks += 1
                    if not quasilinear_best_bid_check(inst, spec, j, i, column):
                        stats.violations.append(_describe(
                            seed, inst,
                            f"{mechanism_label(spec)}: auction {j} bidder {i} "
                            f"prefers deviating from its value"))
    return stats


def myerson_checks(seeds: Iterable[int]) -> CheckStats:
    """Winner's payment must equal the threshold value, the winning bid must
    clear the threshold, and raising a winning bid must keep winning."""
    stats = CheckStats()
    for seed in seeds:
        inst = family_instance(seed)
        for profile in (MultiplierProfile.uniform(inst.num_bidders),
                        probe_profile(seed, inst.num_bidders)):
            bids = bids_from(profile, inst)
            for spec in standard_specs(inst):
                outcome = run_all(spec, inst, profile)
                for j, winner in enumerate(outcome.winners):
                    if winner is None:
                        continue
                    column = [bids[i][j] for i in range(inst.num_bidders)]
                    t = min_winning_bid(spec, inst, j, winner, column)
                    stats.checks += 1
                    if t.value != outcome.payments[winner][j] or not t.admits(column[winner]):
                        stats.violations.append(_describe(
                            seed, inst,
                            f"{mechanism_label(spec)}: auction {j} payment "
                            f"{outcome.payments[winner][j]} vs threshold {t}"))
                        continue
                    for raised in (column[winner] + 1, 2 * column[winner] + 1):
                        bumped = list(column)
                        bumped[winner] = raised
                        if run_auction(spec, inst, j, bumped).winner != winner:
                            stats.violations.append(_describe(
                                seed, inst,
                                f"{mechanism_label(spec)}: auction {j} winner {winner} "
                                f"lost after raising its bid to {raised}"))
                            break
    return stats


def oracle_agreement(seeds: Iterable[int], *, grid_size: int = 40) -> CheckStats:
    """The exact best response and the brute-force oracle must attain the
    same total value (the chosen multipliers may differ)."""
    stats = CheckStats()
    for seed in seeds:
        inst = family_instance(seed)
        profile = probe_profile(seed, inst.num_bidders)
        bidder = seed % inst.num_bidders
        for spec in standard_specs(inst):
            problem = ResponseProblem(bidder, inst, spec, profile)
            exact = best_response(problem)
            sampled = best_response_oracle(problem, grid_size=grid_size)
            stats.checks += 1
            if exact.total_value != sampled.total_value:
                stats.violations.append(_describe(
                    seed, inst,
                    f"{mechanism_label(spec)}: bidder {bidder} exact value "
                    f"{exact.total_value} (theta {exact.multiplier}) vs sampled "
                    f"{sampled.total_value} (theta {sampled.multiplier})"))
    return stats


def welfare_cap_checks(seeds: Iterable[int]) -> CheckStats:
    """No outcome may exceed the optimal welfare."""
    stats = CheckStats()
    for seed in seeds:
        inst = family_instance(seed)
        cap = optimal_welfare(inst)
        for spec in standard_specs(inst):
            for profile in (MultiplierProfile.uniform(inst.num_bidders),
                            probe_profile(seed, inst.num_bidders)):
                outcome = run_all(spec, inst, profile)
                stats.checks += 1
                if welfare(inst, outcome) > cap:
                    stats.violations.append(_describe(
                        seed, inst, f"{mechanism_label(spec)}: welfare exceeds optimum"))
    return stats


@dataclass
class VerifySummary:
    lines: list[str]
    violations: list[str]


def run_verify_suite(seed_count: int, *, kinds: Sequence[str] = ("second-price",
                     "auction-dep", "bidder-dep"), max_rounds: int = 50) -> VerifySummary:
    """The full property sweep behind `arena verify`."""
    lines: list[str] = []
    violations: list[str] = []
    seeds = range(seed_count)

    for kind in kinds:
        if kind == "second-price":
            stats = equilibrium_family(kind, seeds, welfare_floor=HALF,
                                       zero_cost_probability=Fraction(1),
                                       max_rounds=max_rounds)
            label = "second-price (zero-cost family), floor 1/2"
        elif kind == "auction-dep":
            stats = equilibrium_family(kind, seeds, welfare_floor=HALF,
                                       max_rounds=max_rounds)
            label = "auction-dep, floor 1/2"
        elif kind == "bidder-dep":
            stats = equilibrium_family(kind, seeds, welfare_floor=QUARTER,
                                       max_rounds=max_rounds)
            label = "bidder-dep, floor 1/4"
        elif kind == "single-bidder":
            stats = single_bidder_family(seed_count, max_rounds=max_rounds)
            label = "single-bidder, exact optimum"
        else:
            stats = equilibrium_family(kind, seeds, welfare_floor=ZERO,
                                       max_rounds=max_rounds)
            label = f"{kind}, no floor"
        lines.append(f"equilibria [{label}]: runs={stats.runs} converged={stats.converged} "
                     f"verified={stats.verified} floor-checked={stats.bound_checked} "
                     f"violations={len(stats.violations)}")
        violations.extend(stats.violations)

    for name, stats in (
        ("welfare accounting", accounting_checks(seeds, max_rounds=max_rounds)),
        ("truthfulness", truthfulness_probes(range(min(seed_count, 150)))),
        ("single-bidder truthfulness", truthfulness_probes(range(min(seed_count, 150)),
                                                           single_bidder=True)),
        ("payment = threshold", myerson_checks(range(min(seed_count, 150)))),
        ("oracle agreement", oracle_agreement(range(min(seed_count, 120)))),
        ("welfare cap", welfare_cap_checks(seeds)),
    ):
        lines.append(f"{name}: checks={stats.checks} violations={len(stats.violations)}")
        violations.extend(stats.violations)

    return VerifySummary(lines, violations)
