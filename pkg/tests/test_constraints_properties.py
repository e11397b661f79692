"""Algebraic properties of the constraint checker on random data, checked
against the nested-loop oracle."""

import random

from hypothesis import given, settings, strategies as st

import bruteforce
from mdolap import constraints as cons
from randgen import random_constellation, random_inter_pair, random_intra_pair

seeds = st.integers(min_value=0, max_value=2**48)


def build(seed: int):
    rng = random.Random(seed)
    c = random_constellation(rng, max_instances=20, max_fact_instances=50)
    return rng, c


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_partition_is_totality_plus_exclusion_intra(seed):
    rng, c = build(seed)
    dim, h1, h2 = random_intra_pair(rng, c)
    partition = cons.check_intra(c, cons.intra("PARTITION", dim, h1, h2))
    totality = cons.check_intra(c, cons.intra("TOTALITY", dim, h1, h2))
    exclusion = cons.check_intra(c, cons.intra("EXCLUSION", dim, h1, h2))
    assert partition.holds == (totality.holds and exclusion.holds)
    assert set(partition.witnesses) == set(totality.witnesses) | set(exclusion.witnesses)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_partition_is_totality_plus_exclusion_inter(seed):
    rng, c = build(seed)
    fact, left, right = random_inter_pair(rng, c)
    args = (fact, *left, *right)
    partition = cons.check_inter(c, cons.inter("PARTITION", *args))
    totality = cons.check_inter(c, cons.inter("TOTALITY", *args))
    exclusion = cons.check_inter(c, cons.inter("EXCLUSION", *args))
    assert partition.holds == (totality.holds and exclusion.holds)
    assert set(partition.witnesses) == set(totality.witnesses) | set(exclusion.witnesses)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_simultaneity_is_double_inclusion_intra(seed):
    rng, c = build(seed)
    dim, h1, h2 = random_intra_pair(rng, c)
    simultaneity = cons.check_intra(c, cons.intra("SIMULTANEITY", dim, h1, h2))
    forward = cons.check_intra(c, cons.intra("INCLUSION", dim, h1, h2))
    backward = cons.check_intra(c, cons.intra("INCLUSION", dim, h2, h1))
    assert simultaneity.holds == (forward.holds and backward.holds)
    assert set(simultaneity.witnesses) == set(forward.witnesses) | set(backward.witnesses)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_simultaneity_is_double_inclusion_inter(seed):
    rng, c = build(seed)
    fact, left, right = random_inter_pair(rng, c)
    simultaneity = cons.check_inter(c, cons.inter("SIMULTANEITY", fact, *left, *right))
    forward = cons.check_inter(c, cons.inter("INCLUSION", fact, *left, *right))
    backward = cons.check_inter(c, cons.inter("INCLUSION", fact, *right, *left))
    assert simultaneity.holds == (forward.holds and backward.holds)
    assert set(simultaneity.witnesses) == set(forward.witnesses) | set(backward.witnesses)


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_symmetric_kinds_are_invariant_under_swap(seed):
    rng, c = build(seed)
    dim, h1, h2 = random_intra_pair(rng, c)
    for kind in ("EXCLUSION", "SIMULTANEITY", "TOTALITY", "PARTITION"):
        one = cons.check_intra(c, cons.intra(kind, dim, h1, h2))
        two = cons.check_intra(c, cons.intra(kind, dim, h2, h1))
        assert one.holds == two.holds
        assert set(one.witnesses) == set(two.witnesses)


def test_inclusion_is_not_symmetric(trio):
    # Concrete counterexample: the French geography is included in the
    # zone hierarchy but not the other way round.
    forward = cons.check_intra(trio, cons.intra("INCLUSION", "AGENCES", "geo_fr", "geo_zn"))
    backward = cons.check_intra(trio, cons.intra("INCLUSION", "AGENCES", "geo_zn", "geo_fr"))
    assert forward.holds and not backward.holds


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_intra_checker_agrees_with_oracle(seed):
    rng, c = build(seed)
    dim, h1, h2 = random_intra_pair(rng, c)
    for kind in cons.KINDS:
        result = cons.check_intra(c, cons.intra(kind, dim, h1, h2))
        expected = bruteforce.intra_witnesses(c.dimensions[dim], kind, h1, h2)
        assert result.holds == (not expected)
        assert set(result.witnesses) == expected


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_inter_checker_agrees_with_oracle(seed):
    rng, c = build(seed)
    fact, left, right = random_inter_pair(rng, c)
    for kind in cons.KINDS:
        result = cons.check_inter(c, cons.inter(kind, fact, *left, *right))
        expected = bruteforce.inter_witnesses(c, kind, fact, left, right)
        assert result.holds == (not expected)
        assert set(result.witnesses) == expected


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_membership_agrees_with_oracle(seed):
    rng, c = build(seed)
    for dim in c.dimensions.values():
        for h in dim.hierarchies:
            from mdolap import model

            assert model.hierarchy_members(dim, h) == bruteforce.members(dim, h)
