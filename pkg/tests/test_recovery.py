import numpy as np
import pytest

from hspsim.engine import PipelineConfig, run_pipeline, sample
from hspsim.errors import ResourceCapError
from hspsim.groups import all_subgroups, group_from_spec, subgroup_from_generators
from hspsim.oracle import build_instance
from hspsim.recovery import (
    SampleSet,
    character_sieve,
    continued_fraction_period,
    period_from_samples,
    simon_solve,
    subgroup_consistency_rank,
)
from hspsim.representations import fourier_operator
from hspsim.transversals import PeriodicInstance, shor_pipeline, shor_transversal

from oracles import reference_period_denominator


def test_simon_solve_single_sample():
    group = group_from_spec("Z2^2")
    result = simon_solve(SampleSet(group, (3,)))
    assert result.candidate.elements == (0, 3)
    assert result.samples_used == 1


def test_simon_solve_full_rank():
    group = group_from_spec("Z2^2")
    result = simon_solve(SampleSet(group, (1, 2)))
    assert result.candidate.elements == (0,)


def test_simon_solve_empty_samples():
    group = group_from_spec("Z2^3")
    result = simon_solve(SampleSet(group, ()))
    assert result.candidate.elements == tuple(range(8))
    assert not result.confirmed


def test_simon_solve_confirmation_against_full_support():
    group = group_from_spec("Z2^3")
    hidden = subgroup_from_generators(group, [5])
    dist = run_pipeline(build_instance(group, hidden, seed=0), fourier_operator(group))
    support = tuple(dist.support(1e-10))
    partial = simon_solve(SampleSet(group, support[:1]), full_support=support)
    full = simon_solve(SampleSet(group, support), full_support=support)
    assert full.candidate.elements == hidden.elements
    assert full.confirmed
    assert not partial.confirmed


def test_simon_solve_requires_bit_vector_group():
    with pytest.raises(ValueError, match="Z2"):
        simon_solve(SampleSet(group_from_spec("Z4"), (1,)))


def test_character_sieve_z12_examples():
    z12 = group_from_spec("Z12")
    assert character_sieve(SampleSet(z12, (6,))).candidate.elements == (0, 2, 4, 6, 8, 10)
    trivial = character_sieve(SampleSet(z12, (0,)))
    assert trivial.candidate.elements == tuple(range(12))
    assert not trivial.confirmed
    assert character_sieve(SampleSet(z12, (4, 6))).candidate.elements == (0, 6)


@pytest.mark.parametrize("spec", ["Z4", "Z6", "Z8", "Z12", "Z16", "Z2^3", "Z2^5", "Z2xZ4", "Z2^2xZ4"])
def test_sieve_on_full_support_recovers_every_subgroup(spec):
    group = group_from_spec(spec)
    fop = fourier_operator(group)
    for hidden in all_subgroups(group):
        dist = run_pipeline(build_instance(group, hidden, seed=0), fop)
        support = tuple(dist.support(1e-10))
        result = character_sieve(SampleSet(group, support), full_support=support)
        assert result.candidate.elements == hidden.elements
        assert result.confirmed


@pytest.mark.parametrize("n", range(1, 7))
def test_simon_solve_agrees_with_character_sieve(n):
    group = group_from_spec(f"Z2^{n}")
    rng = np.random.default_rng(n)
    for _ in range(25):
        outcomes = tuple(int(x) for x in rng.integers(0, group.order, rng.integers(0, 5)))
        a = simon_solve(SampleSet(group, outcomes))
        b = character_sieve(SampleSet(group, outcomes))
        assert a.candidate.elements == b.candidate.elements


def test_continued_fraction_examples():
    assert continued_fraction_period(12, 16, 15) == 4
    assert continued_fraction_period(0, 16, 15) is None
    assert continued_fraction_period(13, 16, 15) == 5
    with pytest.raises(ValueError):
        continued_fraction_period(3, 0, 15)


@pytest.mark.parametrize("big_q,n", [(16, 15), (64, 21), (512, 21), (128, 33)])
def test_continued_fraction_matches_reference_oracle(big_q, n):
    for y in range(big_q):
        assert continued_fraction_period(y, big_q, n) == reference_period_denominator(
            y, big_q, n
        )


def test_period_from_samples_examples():
    est = period_from_samples([12, 8], 16, 15, 7)
    assert est.period == 4 and est.confirmed
    est = period_from_samples([8], 16, 15, 7)
    assert est.period == 2 and not est.confirmed
    est = period_from_samples([0, 0, 0], 16, 15, 7)
    assert est.period is None and not est.confirmed


@pytest.mark.parametrize("r,big_q", [(2, 16), (4, 16), (8, 16), (16, 256)])
def test_period_recovered_from_ideal_support(r, big_q):
    # big_q is large enough that no convergent below r slips into the
    # 1/(2Q) window, so the smallest-denominator rule is sound
    support = [j * (big_q // r) for j in range(r)]
    base, modulus = {2: (4, 15), 4: (7, 15), 8: (2, 17), 16: (3, 17)}[r]
    est = period_from_samples(support, big_q, modulus, base)
    assert est.period == r
    assert est.confirmed


def test_trivial_period_support_is_uninformative():
    # r = 1 puts all mass on outcome 0, which carries no denominator
    est = period_from_samples([0], 16, 15, 1)
    assert est.period is None and not est.confirmed


def test_period_from_pipeline_samples_end_to_end():
    inst = PeriodicInstance(15, 7, 16)
    dist = shor_pipeline(inst, shor_transversal(16))
    draws = sample(dist, 16, seed=5)
    est = period_from_samples(draws, 16, 15, 7)
    assert est.period == 4 and est.confirmed


def test_consistency_rank_assigns_zero_to_true_subgroup():
    group = group_from_spec("D4")
    hidden = subgroup_from_generators(group, [2])
    fop = fourier_operator(group)
    dist = run_pipeline(build_instance(group, hidden, seed=0), fop)
    ranking = subgroup_consistency_rank(dist, group, fop)
    by_elements = {sub.elements: tv for sub, tv in ranking.entries}
    assert by_elements[hidden.elements] < 1e-10
    top_group, top_tv = ranking.entries[0]
    assert top_tv < 1e-10


def test_consistency_rank_orders_and_reports_ties():
    group = group_from_spec("Z2^2")
    hidden = subgroup_from_generators(group, [3])
    fop = fourier_operator(group)
    dist = run_pipeline(build_instance(group, hidden, seed=0), fop)
    ranking = subgroup_consistency_rank(dist, group, fop)
    tvs = [tv for _, tv in ranking.entries]
    assert tvs == sorted(tvs)
    assert ranking.entries[0][0].elements == hidden.elements
    # every position appears in at most one tie class
    flat = [p for cls in ranking.tie_classes for p in cls]
    assert len(flat) == len(set(flat))
    for cls in ranking.tie_classes:
        assert len(cls) >= 2
        base = ranking.entries[cls[0]][1]
        for pos in cls[1:]:
            assert abs(ranking.entries[pos][1] - base) < 1e-10


def test_consistency_rank_respects_order_cap():
    group = group_from_spec("Z64")
    dist = run_pipeline(
        build_instance(group, subgroup_from_generators(group, [1]), seed=0),
        fourier_operator(group),
    )
    with pytest.raises(ResourceCapError):
        subgroup_consistency_rank(dist, group)


def test_consistency_rank_with_coarse_measurement():
    group = group_from_spec("D4")
    hidden = subgroup_from_generators(group, [2])
    fop = fourier_operator(group)
    cfg = PipelineConfig("forward", "irrep_label_only")
    dist = run_pipeline(build_instance(group, hidden, seed=0), fop, cfg)
    ranking = subgroup_consistency_rank(dist, group, fop, cfg)
    by_elements = {sub.elements: tv for sub, tv in ranking.entries}
    assert by_elements[hidden.elements] < 1e-10
