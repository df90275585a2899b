"""Auction rules: scoring, winner selection, payments, and win thresholds.

Five rules share one shape: each bidder gets a score from its bid (possibly
adjusted by user cost), the highest eligible score wins, and the winner pays
the smallest bid that still wins. All ties break toward the lowest bidder
index, so every outcome is deterministic.

`run_auction` applies each rule's payment formula directly; `min_winning_bid`
derives the same number by analyzing the competition. The two paths are kept
separate on purpose and cross-checked in tests: the winner's payment must
always equal the threshold value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import Instance, MultiplierProfile, Outcome, ZERO, bids_from
from .rationals import INF, ExtRational, Infinity, format_ratio, parse_rational


@dataclass(frozen=True, slots=True)
class SecondPrice:
    """Highest bid wins and pays the second-highest bid. Costs are ignored."""


@dataclass(frozen=True, slots=True)
class GlobalCostMultiplier:
    """Second-price over cost-adjusted scores bid - gamma * cost.

    Bidders with negative scores are discarded. The winner pays gamma times
    its own cost plus the best surviving rival score (floored at zero), which
    is exactly the smallest bid that still wins. gamma = 0 recovers plain
    second price.
    """

    gamma: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.gamma, Fraction):
            raise TypeError("gamma must be a Fraction")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True, slots=True)
class SingleBidderCalibrated:
    """One-bidder market with per-auction reserve alpha * cost.

    The multiplier alpha is calibrated on the instance so that, over the
    auctions where value covers cost, total value equals alpha times total
    cost. The bidder wins auction j iff its bid reaches alpha * cost, and
    pays exactly that reserve.
    """

    cost_multiplier: ExtRational

    def __post_init__(self) -> None:
        if isinstance(self.cost_multiplier, Infinity):
            return
        if self.cost_multiplier < 1:
            raise ValueError(f"cost multiplier must be >= 1, got {self.cost_multiplier}")


@dataclass(frozen=True, slots=True)
class AuctionDependent:
    """Cost-adjusted auction with a per-auction multiplier.

    Auction j is sized around its rightful winner (the lowest-index bidder
    maximizing value minus cost, absent when that maximum is negative): the
    multiplier solves value = (1 + 2 * alpha) * cost for that bidder, every
    score is bid - (1 + alpha) * cost, and the top score wins if nonnegative.
    A zero-cost rightful winner makes alpha infinite; the infinite multiplier
    times a zero cost resolves to half the rightful winner's value, and times
    a positive cost stays infinite (such bidders can never win).
    """

    rightful_winner: tuple[int | None, ...]
    cost_multiplier: tuple[ExtRational | None, ...]


@dataclass(frozen=True, slots=True)
class BidderDependent:
    """Cost-adjusted auction with per-bidder prescreening multipliers.

    Bidder i's multiplier is calibrated on the auctions where i is the
    rightful winner: total value = (1 + 2 * alpha_i) * total cost there.
    In every auction, bidders whose bid falls short of (1 + alpha_i) * cost
    are discarded; survivors compete on bid minus cost. An infinite alpha_i
    discards every positive-cost bid of i but lets zero-cost bids through
    with required bid 0.
    """

    rightful_auctions: tuple[frozenset[int], ...]
    cost_multiplier: tuple[ExtRational, ...]


MechanismSpec = (SecondPrice | GlobalCostMultiplier | SingleBidderCalibrated
                 | AuctionDependent | BidderDependent)


@dataclass(frozen=True, slots=True)
class AuctionResult:
    """Winner (None when nobody clears), its payment, and the runner-up."""

    winner: int | None
    payment: Fraction
    runner_up: int | None


@dataclass(frozen=True, slots=True)
class Threshold:
    """Minimum bid that wins one auction, holding rival bids fixed.

    `inclusive` says whether bidding exactly `value` wins (it does not when a
    lower-index rival holds the same score). The winner's payment always
    equals `value`, inclusive or not.
    """

    value: ExtRational
    inclusive: bool

    def admits(self, bid: Fraction) -> bool:
        if isinstance(self.value, Infinity):
            return False
        return bid > self.value or (bid == self.value and self.inclusive)


NEVER = Threshold(INF, False)


# ---------------------------------------------------------------------------
# Parameter calibration


def rightful_winners(inst: Instance) -> tuple[int | None, ...]:
    """Per auction, the lowest-index maximizer of value minus cost, or None
    when even the best allocation would destroy welfare."""
    out: list[int | None] = []
    for j in range(inst.num_auctions):
        best: Fraction | None = None
        best_i = 0
        for i in range(inst.num_bidders):
            s = inst.values[i][j] - inst.costs[i][j]
            if best is None or s > best:
                best, best_i = s, i
        out.append(best_i if best is not None and best >= 0 else None)
    return tuple(out)


def compute_auction_params(inst: Instance) -> AuctionDependent:
    rws = rightful_winners(inst)
    alphas: list[ExtRational | None] = []
    for j, rw in enumerate(rws):
        if rw is None:
            alphas.append(None)
            continue
        cost = inst.costs[rw][j]
        if cost == 0:
            alphas.append(INF)
        else:
            alphas.append((inst.values[rw][j] - cost) / (2 * cost))
    return AuctionDependent(rws, tuple(alphas))


def compute_bidder_params(inst: Instance) -> BidderDependent:
    rws = rightful_winners(inst)
    sets: list[set[int]] = [set() for _ in range(inst.num_bidders)]
    for j, rw in enumerate(rws):
        if rw is not None:
            sets[rw].add(j)
    alphas: list[ExtRational] = []
    for i, owned in enumerate(sets):
        total_value = sum((inst.values[i][j] for j in owned), ZERO)
        total_cost = sum((inst.costs[i][j] for j in owned), ZERO)
        if not owned or total_value == 0:
            # Nothing to calibrate on; an all-zero set also means no slack.
            alphas.append(ZERO)
        elif total_cost == 0:
            alphas.append(INF)
        else:
            alphas.append((total_value - total_cost) / (2 * total_cost))
    return BidderDependent(tuple(frozenset(s) for s in sets), tuple(alphas))


def calibrate_single_bidder(inst: Instance) -> SingleBidderCalibrated:
    if inst.num_bidders != 1:
        raise ValueError(f"single-bidder calibration needs 1 bidder, got {inst.num_bidders}")
    good = [j for j in range(inst.num_auctions) if inst.values[0][j] >= inst.costs[0][j]]
    total_value = sum((inst.values[0][j] for j in good), ZERO)
    total_cost = sum((inst.costs[0][j] for j in good), ZERO)
    if not good or total_value == 0:
        alpha: ExtRational = Fraction(1)
    elif total_cost == 0:
        alpha = INF
    else:
        alpha = total_value / total_cost
    return SingleBidderCalibrated(alpha)


# ---------------------------------------------------------------------------
# Required-bid conventions (shared by payments, thresholds, and diagnostics)


def auction_dep_required(alpha: ExtRational, cost: Fraction, rw_value: Fraction) -> ExtRational:
    """(1 + alpha) * cost, with the infinite-alpha convention: infinite on
    positive cost, half the rightful winner's value on zero cost."""
    if isinstance(alpha, Infinity):
        return INF if cost else rw_value / 2
    return cost + alpha * cost


def bidder_dep_required(alpha: ExtRational, cost: Fraction) -> ExtRational:
    """(1 + alpha) * cost, with infinite alpha discarding any positive cost
    and letting zero-cost bids through at 0."""
    if isinstance(alpha, Infinity):
        return INF if cost else ZERO
    return cost + alpha * cost


def single_required(alpha: ExtRational, cost: Fraction) -> ExtRational:
    if isinstance(alpha, Infinity):
        return INF if cost else ZERO
    return alpha * cost


# ---------------------------------------------------------------------------
# Running one auction


def run_auction(spec: MechanismSpec, inst: Instance, auction: int,
                bids: Sequence[Fraction]) -> AuctionResult:
    """Resolve auction `auction` under `spec` for the given bid column."""
    if len(bids) != inst.num_bidders:
        raise ValueError(f"expected {inst.num_bidders} bids, got {len(bids)}")

    if isinstance(spec, SecondPrice):
        best = 0
        runner: int | None = None
        for i in range(1, len(bids)):
            if bids[i] > bids[best]:
                runner = best
                best = i
            elif runner is None or bids[i] > bids[runner]:
                runner = i
        payment = bids[runner] if runner is not None else ZERO
        return AuctionResult(best, payment, runner)

    if isinstance(spec, GlobalCostMultiplier):
        gamma = spec.gamma
        best = runner = None
        best_s = runner_s = ZERO
        for i, bid in enumerate(bids):
            cost = inst.costs[i][auction]
            score = bid - gamma * cost if cost else bid
            if score < 0:
                continue
            if best is None or score > best_s:
                runner, runner_s = best, best_s
                best, best_s = i, score
            elif runner is None or score > runner_s:
                runner, runner_s = i, score
        if best is None:
            return AuctionResult(None, ZERO, None)
        payment = spec.gamma * inst.costs[best][auction] + (runner_s if runner is not None else ZERO)
        return AuctionResult(best, payment, runner)

    if isinstance(spec, SingleBidderCalibrated):
        required = single_required(spec.cost_multiplier, inst.costs[0][auction])
        if isinstance(required, Infinity) or bids[0] < required:
            return AuctionResult(None, ZERO, None)
        return AuctionResult(0, required, None)

    if isinstance(spec, AuctionDependent):
        rw = spec.rightful_winner[auction]
        if rw is None:
            return AuctionResult(None, ZERO, None)
        alpha = spec.cost_multiplier[auction]
        assert alpha is not None
        rw_value = inst.values[rw][auction]
        best = runner = None
        best_s = runner_s = ZERO
        for i, bid in enumerate(bids):
            required = auction_dep_required(alpha, inst.costs[i][auction], rw_value)
            if isinstance(required, Infinity):
                continue
            score = bid - required
            if best is None or score > best_s:
                runner, runner_s = best, best_s
                best, best_s = i, score
            elif runner is None or score > runner_s:
                runner, runner_s = i, score
        if best is None or best_s < 0:
            return AuctionResult(None, ZERO, None)
        required = auction_dep_required(alpha, inst.costs[best][auction], rw_value)
        assert isinstance(required, Fraction)
        rival = runner_s if runner is not None and runner_s > 0 else ZERO
        return AuctionResult(best, required + rival, runner)

    if isinstance(spec, BidderDependent):
        best = runner = None
        best_s = runner_s = ZERO
        for i, bid in enumerate(bids):
            required = bidder_dep_required(spec.cost_multiplier[i], inst.costs[i][auction])
            if isinstance(required, Infinity) or bid < required:
                continue
            score = bid - inst.costs[i][auction]
            if best is None or score > best_s:
                runner, runner_s = best, best_s
                best, best_s = i, score
            elif runner is None or score > runner_s:
                runner, runner_s = i, score
        if best is None:
            return AuctionResult(None, ZERO, None)
        required = bidder_dep_required(spec.cost_multiplier[best], inst.costs[best][auction])
        assert isinstance(required, Fraction)
        if runner is not None:
            required = max(required, runner_s + inst.costs[best][auction])
        return AuctionResult(best, required, runner)

    raise TypeError(f"unknown mechanism: {spec!r}")


# ---------------------------------------------------------------------------
# Win thresholds


def min_winning_bid(spec: MechanismSpec, inst: Instance, auction: int, bidder: int,
                    bids: Sequence[Fraction]) -> Threshold:
    """Smallest bid with which `bidder` wins `auction`, rivals' bids fixed.

    Entry `bidder` of `bids` is ignored. The value is infinite when the
    bidder can never win; `inclusive` follows the lowest-index tie-break.
    """
    if isinstance(spec, SecondPrice):
        best: Fraction | None = None
        best_i = 0
        for i, bid in enumerate(bids):
            if i == bidder:
                continue
            if best is None or bid > best:
                best, best_i = bid, i
        if best is None:
            return Threshold(ZERO, True)
        return Threshold(best, bidder < best_i)

    if isinstance(spec, GlobalCostMultiplier):
        gamma = spec.gamma
        own = gamma * inst.costs[bidder][auction]
        best = None
        best_i = 0
        for i, bid in enumerate(bids):
            if i == bidder:
                continue
            cost = inst.costs[i][auction]
            score = bid - gamma * cost if cost else bid
            if score < 0:
                continue
            if best is None or score > best:
                best, best_i = score, i
        if best is None:
            return Threshold(own, True)
        return Threshold(own + best, bidder < best_i)

    if isinstance(spec, SingleBidderCalibrated):
        required = single_required(spec.cost_multiplier, inst.costs[0][auction])
        if isinstance(required, Infinity):
            return NEVER
        return Threshold(required, True)

    if isinstance(spec, AuctionDependent):
        rw = spec.rightful_winner[auction]
        if rw is None:
            return NEVER
        alpha = spec.cost_multiplier[auction]
        assert alpha is not None
        rw_value = inst.values[rw][auction]
        own = auction_dep_required(alpha, inst.costs[bidder][auction], rw_value)
        if isinstance(own, Infinity):
            return NEVER
        best = None
        best_i = 0
        for i, bid in enumerate(bids):
            if i == bidder:
                continue
            required = auction_dep_required(alpha, inst.costs[i][auction], rw_value)
            if isinstance(required, Infinity):
                continue
            score = bid - required
            if best is None or score > best:
                best, best_i = score, i
        if best is None or best < 0:
            return Threshold(own, True)
        return Threshold(own + best, bidder < best_i)

    if isinstance(spec, BidderDependent):
        own = bidder_dep_required(spec.cost_multiplier[bidder], inst.costs[bidder][auction])
        if isinstance(own, Infinity):
            return NEVER
        best = None
        best_i = 0
        for i, bid in enumerate(bids):
            if i == bidder:
                continue
            required = bidder_dep_required(spec.cost_multiplier[i], inst.costs[i][auction])
            if isinstance(required, Infinity) or bid < required:
                continue
            score = bid - inst.costs[i][auction]
            if best is None or score > best:
                best, best_i = score, i
        if best is None:
            return Threshold(own, True)
        rival = best + inst.costs[bidder][auction]
        if own > rival:
            return Threshold(own, True)
        return Threshold(rival, bidder < best_i)

    raise TypeError(f"unknown mechanism: {spec!r}")


# ---------------------------------------------------------------------------
# Running every auction


def run_all(spec: MechanismSpec, inst: Instance, profile: MultiplierProfile) -> Outcome:
    """Run every auction under uniform bids derived from `profile`."""
    bids = bids_from(profile, inst)
    n, m = inst.num_bidders, inst.num_auctions
    allocation = [[0] * m for _ in range(n)]
    payments = [[ZERO] * m for _ in range(n)]
    winners: list[int | None] = []
    for j in range(m):
        column = [bids[i][j] for i in range(n)]
        result = run_auction(spec, inst, j, column)
        winners.append(result.winner)
        if result.winner is not None:
            allocation[result.winner][j] = 1
            payments[result.winner][j] = result.payment
    return Outcome(tuple(tuple(row) for row in allocation),
                   tuple(tuple(row) for row in payments),
                   tuple(winners))


# ---------------------------------------------------------------------------
# Labels and serialization


def mechanism_label(spec: MechanismSpec) -> str:
    if isinstance(spec, SecondPrice):
        return "second-price"
    if isinstance(spec, GlobalCostMultiplier):
        return f"global:{format_rational_label(spec.gamma)}"
    if isinstance(spec, SingleBidderCalibrated):
        return "single-bidder"
    if isinstance(spec, AuctionDependent):
        return "auction-dep"
    if isinstance(spec, BidderDependent):
        return "bidder-dep"
    raise TypeError(f"unknown mechanism: {spec!r}")


def format_rational_label(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def mechanism_from_label(label: str, inst: Instance) -> MechanismSpec:
    """Build a mechanism from its CLI spelling, calibrating on the instance."""
    if label == "second-price":
        return SecondPrice()
    if label.startswith("global:"):
        return GlobalCostMultiplier(parse_rational(label.split(":", 1)[1]))
    if label == "single-bidder":
        return calibrate_single_bidder(inst)
    if label == "auction-dep":
        return compute_auction_params(inst)
    if label == "bidder-dep":
        return compute_bidder_params(inst)
    raise ValueError(f"unknown mechanism {label!r}; expected second-price, global:<gamma>, "
                     f"single-bidder, auction-dep, or bidder-dep")


def mechanism_to_json(spec: MechanismSpec) -> dict:
    if isinstance(spec, SecondPrice):
        return {"kind": "second-price"}
    if isinstance(spec, GlobalCostMultiplier):
        return {"kind": "global", "gamma": format_ratio(spec.gamma)}
    if isinstance(spec, SingleBidderCalibrated):
        return {"kind": "single-bidder", "alpha": format_ratio(spec.cost_multiplier)}
    if isinstance(spec, AuctionDependent):
        return {"kind": "auction-dep"}
    if isinstance(spec, BidderDependent):
        return {"kind": "bidder-dep"}
    raise TypeError(f"unknown mechanism: {spec!r}")


def mechanism_from_json(obj: dict, inst: Instance) -> MechanismSpec:
    """Rebuild a mechanism from JSON. Calibrated parameters are recomputed
    from the instance and validated against the stored ones, never trusted."""
    kind = obj.get("kind")
    if kind == "second-price":
        return SecondPrice()
    if kind == "global":
        return GlobalCostMultiplier(parse_rational(obj["gamma"]))
    if kind == "single-bidder":
        spec = calibrate_single_bidder(inst)
        stored = obj.get("alpha")
        if stored is not None and stored != format_ratio(spec.cost_multiplier):
            raise ValueError(f"stored alpha {stored!r} does not match the instance "
                             f"({format_ratio(spec.cost_multiplier)})")
        return spec
    if kind == "auction-dep":
        return compute_auction_params(inst)
    if kind == "bidder-dep":
        return compute_bidder_params(inst)
    raise ValueError(f"unknown mechanism kind {obj!r}")
