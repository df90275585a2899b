"""Deterministic simulator for autobidding ad auctions with user costs.

Exact rational arithmetic throughout: allocations, payments, best responses,
and welfare ratios are computed with `fractions.Fraction`, so every reported
number is an exact fact about the instance, not an approximation.
"""

from .bestresponse import (ResponseProblem, ResponseResult, best_response,
                           best_response_oracle, quasilinear_best_bid_check, thresholds)
from .equilibrium import (Diagnostics, DynamicsConfig, EquilibriumReport, diagnostics,
                          poa_ratio, run_dynamics)
from .instances import (CounterexampleParams, RandomFamilyParams, counterexample,
                        load, random_instance, save)
from .mechanisms import (AuctionDependent, AuctionResult, BidderDependent,
                         GlobalCostMultiplier, MechanismSpec, SecondPrice,
                         SingleBidderCalibrated, Threshold, calibrate_single_bidder,
                         compute_auction_params, compute_bidder_params,
                         mechanism_from_label, min_winning_bid, rightful_winners,
                         run_all, run_auction)
from .model import (Instance, MultiplierProfile, Outcome, bids_from, optimal_welfare,
                    roi_satisfied, welfare)
from .rationals import INF, ExtRational, Infinity, as_fraction, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AuctionDependent", "AuctionResult", "BidderDependent", "CounterexampleParams",
    "Diagnostics", "DynamicsConfig", "EquilibriumReport", "ExtRational",
    "GlobalCostMultiplier", "INF", "Infinity", "Instance", "MechanismSpec",
    "MultiplierProfile", "Outcome", "RandomFamilyParams", "ResponseProblem",
    "ResponseResult", "SecondPrice", "SingleBidderCalibrated", "Threshold",
    "as_fraction", "best_response", "best_response_oracle", "bids_from",
    "calibrate_single_bidder", "compute_auction_params", "compute_bidder_params",
    "counterexample", "diagnostics", "load", "mechanism_from_label",
    "min_winning_bid", "optimal_welfare", "parse_rational", "poa_ratio",
    "quasilinear_best_bid_check", "random_instance", "rightful_winners",
    "roi_satisfied", "run_all", "run_auction", "run_dynamics", "save",
    "thresholds", "welfare",
]
