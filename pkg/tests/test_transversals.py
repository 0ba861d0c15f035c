import numpy as np
import pytest

from hspsim.engine import OutcomeDistribution
from hspsim.errors import ResourceCapError
from hspsim.groups import group_from_spec, subgroup_from_generators
from hspsim.transversals import (
    PeriodicInstance,
    Transversal,
    approximate_function,
    finite_transversal,
    offset_transversal,
    peak_mass,
    shor_pipeline,
    shor_transversal,
    transversal_quality_sweep,
)

from oracles import direct_fourier_probs, multiplicative_order


def test_shor_transversal_is_identity_section():
    tau = shor_transversal(4)
    assert tau.table == (0, 1, 2, 3)
    assert all(tau(q) % 4 == q for q in range(4))


def test_composition_with_modular_exponentiation():
    inst = PeriodicInstance(15, 7, 16)
    values = approximate_function(inst, shor_transversal(16)).values
    assert values == (1, 7, 4, 13) * 4


def test_offset_transversal_with_bound_one_is_canonical():
    for seed in range(5):
        assert offset_transversal(16, 1, seed).table == shor_transversal(16).table


@pytest.mark.parametrize("seed", range(5))
def test_offset_transversal_section_property(seed):
    tau = offset_transversal(16, 7, seed)
    assert all(tau(q) % 16 == q for q in range(16))
    assert tau.provenance == f"offset(seed={seed}, bound=7)"


def test_offsets_are_invisible_when_period_divides_q():
    # a^Q = 1 when r | Q, so every offset transversal composes to the same table
    inst = PeriodicInstance(15, 7, 16)
    reference = approximate_function(inst, shor_transversal(16)).values
    for seed in range(5):
        tau = offset_transversal(16, 4, seed=seed)
        assert approximate_function(inst, tau).values == reference


def test_offset_transversal_breaks_periodicity():
    # r = 6 does not divide Q = 16, so varying offsets destroy the period
    inst = PeriodicInstance(21, 2, 16)
    r = inst.period
    values = approximate_function(inst, offset_transversal(16, 4, seed=1)).values
    assert any(values[q] != values[q + r] for q in range(16 - r))


def test_transversal_validation_rejects_bad_tables():
    with pytest.raises(ValueError, match="injective"):
        Transversal(4, (0, 1, 2, 2), None, None, "custom")
    with pytest.raises(ValueError, match="reduce"):
        Transversal(4, (0, 1, 2, 5), None, None, "custom")
    with pytest.raises(ValueError):
        offset_transversal(16, 0, seed=0)


def test_finite_transversal_least_index():
    z12 = group_from_spec("Z12")
    k = subgroup_from_generators(z12, [4])
    tau = finite_transversal(z12, k)
    assert tau.table == (0, 1, 2, 3)
    assert all(tau.quotient.project(tau(q)) == q for q in range(4))


def test_finite_transversal_seeded_random_still_section():
    z12 = group_from_spec("Z12")
    k = subgroup_from_generators(z12, [4])
    tau = finite_transversal(z12, k, policy="seeded_random", seed=9)
    assert all(tau.quotient.project(tau(q)) == q for q in range(4))


def test_finite_transversal_dihedral_center():
    d4 = group_from_spec("D4")
    center = subgroup_from_generators(d4, [2])
    tau = finite_transversal(d4, center)
    assert len(tau.table) == 4
    assert all(tau.quotient.project(tau(q)) == q for q in range(4))


def test_finite_transversal_refuses_non_normal():
    d3 = group_from_spec("D3")
    refl = subgroup_from_generators(d3, [3])
    with pytest.raises(ValueError, match="normal"):
        finite_transversal(d3, refl)


def test_periodic_instance_validation_and_period():
    inst = PeriodicInstance(15, 7, 16)
    assert inst.period == 4 == multiplicative_order(7, 15)
    assert PeriodicInstance(21, 2, 512).period == 6
    with pytest.raises(ValueError, match="coprime"):
        PeriodicInstance(15, 5, 16)
    with pytest.raises(ValueError, match="power of two"):
        PeriodicInstance(15, 7, 12)
    assert PeriodicInstance(15, 7, 12, allow_any_q=True).q == 12


def test_exact_case_support_and_probabilities():
    inst = PeriodicInstance(15, 7, 16)
    dist = shor_pipeline(inst, shor_transversal(16))
    expected = {y: (0.25 if y % 4 == 0 else 0.0) for y in range(16)}
    for label, p in zip(dist.labels, dist.probs):
        assert abs(p - expected[label]) < 1e-12
    assert peak_mass(dist, 4, 16) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "modulus,base,big_q", [(15, 7, 16), (15, 4, 16), (17, 4, 16), (21, 2, 64)]
)
def test_pipeline_matches_direct_summation(modulus, base, big_q):
    inst = PeriodicInstance(modulus, base, big_q)
    for tau in (shor_transversal(big_q), offset_transversal(big_q, modulus, seed=3)):
        values = approximate_function(inst, tau).values
        for forward in (True, False):
            dist = shor_pipeline(inst, tau, "forward" if forward else "inverse")
            expected = direct_fourier_probs(values, big_q, forward=forward)
            assert np.abs(np.asarray(dist.probs) - np.asarray(expected)).max() < 1e-12


@pytest.mark.parametrize("modulus,base", [(15, 4), (17, 4), (15, 7)])
def test_uniform_peaks_when_period_divides_q(modulus, base):
    big_q = 16
    inst = PeriodicInstance(modulus, base, big_q)
    r = inst.period
    assert big_q % r == 0
    dist = shor_pipeline(inst, shor_transversal(big_q))
    for label, p in zip(dist.labels, dist.probs):
        if label % (big_q // r) == 0:
            assert abs(p - 1 / r) < 1e-10
        else:
            assert p < 1e-12


def test_constant_approximation_gives_point_mass():
    inst = PeriodicInstance(15, 1, 16)
    assert inst.period == 1
    dist = shor_pipeline(inst, shor_transversal(16))
    assert dist.probs[0] == pytest.approx(1.0, abs=1e-12)
    assert dist.probs[1:].max() < 1e-12


def test_offset_transversal_degrades_peak_mass():
    # offsets only matter when r does not divide Q; there they smear the
    # probability away from the multiples of Q/r
    inst = PeriodicInstance(21, 2, 512)
    r, big_q = inst.period, 512
    reference = peak_mass(shor_pipeline(inst, shor_transversal(big_q)), r, big_q)
    for seed in range(3):
        dist = shor_pipeline(inst, offset_transversal(big_q, 21, seed=seed))
        smeared = peak_mass(dist, r, big_q)
        assert smeared < 0.5 * reference
        assert len(dist.support(1e-12)) > r


def test_shift_covariance_of_the_distribution():
    inst = PeriodicInstance(15, 7, 16)
    base = shor_pipeline(inst, shor_transversal(16))
    for shift in range(1, 6):
        table = tuple(q + shift * 16 for q in range(16))
        shifted = Transversal(16, table, None, None, "custom")
        dist = shor_pipeline(inst, shifted)
        assert np.abs(np.asarray(dist.probs) - np.asarray(base.probs)).max() < 1e-12


def test_peak_mass_windows():
    uniform = OutcomeDistribution(tuple(range(512)), np.full(512, 1 / 512))
    r = 6
    qualifying = 0
    for y in range(512):
        j0 = round(r * y / 512)
        best = min(abs(r * y - j * 512) for j in (j0 - 1, j0, j0 + 1))
        qualifying += 2 * best <= r
    assert peak_mass(uniform, r, 512) == pytest.approx(qualifying / 512, abs=1e-15)
    assert qualifying in (r, r + 1)
    with pytest.raises(ValueError):
        peak_mass(uniform, 0, 512)


def test_pipeline_caps_and_mismatches():
    with pytest.raises(ResourceCapError):
        shor_pipeline(PeriodicInstance(8191, 2, 1 << 12), shor_transversal(1 << 12))
    inst = PeriodicInstance(15, 7, 16)
    with pytest.raises(ValueError, match="quotient order"):
        shor_pipeline(inst, shor_transversal(8))
    z12 = group_from_spec("Z12")
    k = subgroup_from_generators(z12, [4])
    with pytest.raises(ValueError, match="integer line"):
        shor_pipeline(inst, finite_transversal(z12, k))


def test_quality_sweep_prefers_canonical_transversal():
    inst = PeriodicInstance(21, 2, 512)
    rows = transversal_quality_sweep(inst, 21, range(10))
    assert len(rows) == 10
    wins = sum(1 for _, pm_shor, pm_offset in rows if pm_shor > pm_offset)
    assert wins >= 8
