from fractions import Fraction

import pytest
from hypothesis import given

from bidarena.model import (Instance, MultiplierProfile, Outcome, bidder_payment,
                            bidder_value, bids_from, optimal_welfare, roi_satisfied,
                            welfare)

from conftest import instances_with_profiles, small_instances


def inst_2x2():
    return Instance.from_rows([[4, 1], [2, 3]], [[1, 1], [1, 1]])


def test_from_rows_converts_text_exactly():
    inst = Instance.from_rows([["0.25", "1/2"]], [["0", 2]])
    assert inst.values[0] == (Fraction(1, 4), Fraction(1, 2))
    assert inst.costs[0] == (Fraction(0), Fraction(2))


def test_instance_shape_properties():
    inst = inst_2x2()
    assert inst.num_bidders == 2
    assert inst.num_auctions == 2


def test_instance_rejects_ragged_rows():
    with pytest.raises(ValueError, match="row 1"):
        Instance.from_rows([[1, 2], [3]], [[0, 0], [0, 0]])


def test_instance_rejects_negative_entries():
    with pytest.raises(ValueError, match="negative"):
        Instance.from_rows([[1]], [["-1/2"]])


def test_instance_rejects_mismatched_matrices():
    with pytest.raises(ValueError):
        Instance.from_rows([[1, 2]], [[1]])


def test_instance_rejects_empty():
    with pytest.raises(ValueError):
        Instance((), ())
    with pytest.raises(ValueError):
        Instance(((),), ((),))


def test_instance_rejects_floats():
    with pytest.raises(TypeError):
        Instance.from_rows([[0.5]], [[0]])


def test_profile_requires_multiplier_at_least_one():
    with pytest.raises(ValueError):
        MultiplierProfile.of(["1/2"])
    MultiplierProfile.of(["1"])  # boundary is fine


def test_bids_scale_values():
    inst = Instance.from_rows([[2, 1, 1]], [[1, 1, 2]])
    assert bids_from(MultiplierProfile.of(["3/2"]), inst) == \
        ((Fraction(3), Fraction(3, 2), Fraction(3, 2)),)


def test_bids_at_one_are_the_values():
    inst = inst_2x2()
    assert bids_from(MultiplierProfile.uniform(2), inst) == inst.values


def test_bids_reject_wrong_profile_size():
    with pytest.raises(ValueError):
        bids_from(MultiplierProfile.uniform(3), inst_2x2())


@given(instances_with_profiles())
def test_bids_dominate_values(pair):
    inst, profile = pair
    bids = bids_from(profile, inst)
    for i in range(inst.num_bidders):
        for j in range(inst.num_auctions):
            assert bids[i][j] >= inst.values[i][j]


def outcome_single_winner(inst, winner, auction, payment):
    n, m = inst.num_bidders, inst.num_auctions
    allocation = tuple(tuple(1 if (i == winner and j == auction) else 0 for j in range(m))
                       for i in range(n))
    payments = tuple(tuple(payment if (i == winner and j == auction) else Fraction(0)
                           for j in range(m)) for i in range(n))
    winners = tuple(winner if j == auction else None for j in range(m))
    return Outcome(allocation, payments, winners)


def test_welfare_counts_value_minus_cost():
    inst = Instance.from_rows([[5], [3], [4]], [[1], [2], [1]])
    out = outcome_single_winner(inst, 0, 0, Fraction(4))
    assert welfare(inst, out) == 4


def test_welfare_can_be_negative():
    inst = Instance.from_rows([[0]], [[1]])
    out = outcome_single_winner(inst, 0, 0, Fraction(0))
    assert welfare(inst, out) == -1


def test_welfare_of_empty_allocation_is_zero():
    inst = inst_2x2()
    empty = Outcome(((0, 0), (0, 0)),
                    ((Fraction(0),) * 2,) * 2, (None, None))
    assert welfare(inst, empty) == 0


def test_optimal_welfare_takes_best_nonnegative_per_auction():
    assert optimal_welfare(Instance.from_rows([[3, 7]], [[2, 2]])) == 6
    assert optimal_welfare(Instance.from_rows([[1]], [[5]])) == 0
    assert optimal_welfare(inst_2x2()) == 5


@given(small_instances())
def test_optimal_welfare_is_invariant_under_bidder_order(inst):
    flipped = Instance(inst.values[::-1], inst.costs[::-1])
    assert optimal_welfare(inst) == optimal_welfare(flipped)


def test_roi_compares_value_to_payment():
    inst = Instance.from_rows([[2, 1, 1]], [[0, 0, 0]])
    out = Outcome(((1, 1, 0),),
                  ((Fraction(3), Fraction(1), Fraction(0)),),
                  (0, 0, None))
    assert bidder_value(inst, out, 0) == 3
    assert bidder_payment(out, 0) == 4
    assert not roi_satisfied(inst, out, 0)


def test_roi_holds_on_boundary_and_without_wins():
    inst = Instance.from_rows([[2]], [[0]])
    assert roi_satisfied(inst, outcome_single_winner(inst, 0, 0, Fraction(2)), 0)
    empty = Outcome(((0,),), ((Fraction(0),),), (None,))
    assert roi_satisfied(inst, empty, 0)


def test_outcome_rejects_two_winners():
    with pytest.raises(ValueError, match="multiple winners"):
        Outcome(((1,), (1,)), ((Fraction(0),), (Fraction(0),)), (0,))


def test_outcome_rejects_paying_loser():
    with pytest.raises(ValueError, match="nonzero payment"):
        Outcome(((1,), (0,)), ((Fraction(0),), (Fraction(2),)), (0,))


def test_outcome_rejects_winner_mismatch():
    with pytest.raises(ValueError):
        Outcome(((1,),), ((Fraction(0),),), (None,))


def test_public_api_exports_resolve():
    import bidarena
    for name in bidarena.__all__:
        assert hasattr(bidarena, name)
    assert bidarena.__version__
