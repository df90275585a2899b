from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st

from bidarena import Instance, MultiplierProfile
from bidarena.mechanisms import (GlobalCostMultiplier, MechanismSpec, SecondPrice,
                                 calibrate_single_bidder, compute_auction_params,
                                 compute_bidder_params)

# Entries live on the quarter grid like the seeded random family.
grid_rationals = st.fractions(min_value=0, max_value=3, max_denominator=4)
thetas = st.sampled_from([Fraction(1), Fraction(5, 4), Fraction(3, 2),
                          Fraction(2), Fraction(3)])


@st.composite
def small_instances(draw, max_side: int = 3):
    n = draw(st.integers(1, max_side))
    m = draw(st.integers(1, max_side))
    values = tuple(tuple(draw(grid_rationals) for _ in range(m)) for _ in range(n))
    costs = tuple(tuple(draw(grid_rationals) for _ in range(m)) for _ in range(n))
    return Instance(values, costs)


@st.composite
def instances_with_profiles(draw, max_side: int = 3):
    inst = draw(small_instances(max_side))
    profile = MultiplierProfile(tuple(draw(thetas) for _ in range(inst.num_bidders)))
    return inst, profile


def all_specs(inst: Instance) -> list[MechanismSpec]:
    specs: list[MechanismSpec] = [
        SecondPrice(),
        GlobalCostMultiplier(Fraction(0)),
        GlobalCostMultiplier(Fraction(1)),
        GlobalCostMultiplier(Fraction(3, 2)),
        compute_auction_params(inst),
        compute_bidder_params(inst),
    ]
    if inst.num_bidders == 1:
        specs.append(calibrate_single_bidder(inst))
    return specs
