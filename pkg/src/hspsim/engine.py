"""Exact two-register state-vector execution of the measurement pipeline.

The run initializes |0>|identity>, Fourier-transforms the left register,
applies the blackbox permutation, transforms the left register again
(forward by default, inverse by configuration), and returns the exact
Born distribution of the left register, marginalized (never collapsed)
over the right register.  Exact distributions are first class; sampling
is a seeded layer on top.  State sizes are capped at |G|*|H| <= 65536.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError, ResourceCapError
from .oracle import HspInstance, OracleUnitary
from .representations import FourierOperator

STATE_SIZE_CAP = 65536
NORM_TOL = 1e-12
PROB_CLAMP = 1e-15
PROB_SUM_TOL = 1e-10

SECOND_TRANSFORMS = ("forward", "inverse")
MEASURE_GRANULARITIES = ("full_triple", "irrep_label_only")


@dataclass(frozen=True)
class PipelineConfig:
    second_transform: str = "forward"
    measure_granularity: str = "full_triple"

    def __post_init__(self):
        if self.second_transform not in SECOND_TRANSFORMS:
            raise ValueError(f"second_transform must be one of {SECOND_TRANSFORMS}")
        if self.measure_granularity not in MEASURE_GRANULARITIES:
            raise ValueError(f"measure_granularity must be one of {MEASURE_GRANULARITIES}")


@dataclass
class QuantumState:
    """Amplitudes over the G x H basis, index = g_index * |H| + h_index."""

    dims: tuple[int, int]
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


@dataclass
class OutcomeDistribution:
    """Exact left-register Born probabilities keyed by outcome label.

    Labels are plain irrep labels when every Fourier row is a character
    row (abelian case) or when measuring the irrep label only; otherwise
    they are (irrep label, row, column) triples.
    """

    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        if len(self.labels) != len(self.probs):
            raise ValueError("labels and probabilities differ in length")

    def support(self, threshold: float = 0.0) -> list:
        return [lab for lab, p in zip(self.labels, self.probs) if p > threshold]

    def as_mapping(self) -> dict:
        return dict(zip(self.labels, (float(p) for p in self.probs)))

    def total_variation(self, other: "OutcomeDistribution") -> float:
        mine, theirs = self.as_mapping(), other.as_mapping()
        keys = set(mine) | set(theirs)
        return 0.5 * sum(abs(mine.get(k, 0.0) - theirs.get(k, 0.0)) for k in keys)


def finalize_distribution(labels: tuple, probs: np.ndarray) -> OutcomeDistribution:
    """Clamp float dust to zero and check normalization."""
    probs = np.where(probs < PROB_CLAMP, 0.0, probs)
    total = float(probs.sum())
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise IntegrityError(f"outcome probabilities sum to {total!r}, not 1")
    probs.flags.writeable = False
    return OutcomeDistribution(labels, probs)


def _check_dims(instance: HspInstance, fourier: FourierOperator) -> tuple[int, int]:
    n_g, n_h = instance.group.order, instance.codomain.order
    if fourier.matrix.shape[0] != n_g or fourier.group.name != instance.group.name:
        raise ValueError(
            f"Fourier operator for {fourier.group.name} does not match "
            f"instance group {instance.group.name} of order {n_g}"
        )
    if n_g * n_h > STATE_SIZE_CAP:
        raise ResourceCapError(
            f"state size {n_g}*{n_h} exceeds the cap {STATE_SIZE_CAP}"
        )
    return n_g, n_h


def _check_norm(matrix: np.ndarray, step: str) -> None:
    norm = float(np.linalg.norm(matrix))
    if abs(norm - 1.0) > NORM_TOL:
        raise IntegrityError(f"state norm drifted to {norm!r} after {step}")


def _evolve(
    instance: HspInstance, fourier: FourierOperator, cfg: PipelineConfig
) -> list[np.ndarray]:
    n_g, n_h = _check_dims(instance, fourier)
    psi0 = np.zeros((n_g, n_h), dtype=np.complex128)
    psi0[0, 0] = 1.0
    psi1 = fourier.matrix @ psi0
    _check_norm(psi1, "the first Fourier transform")
    psi2 = OracleUnitary(instance).permute(psi1)
    _check_norm(psi2, "the blackbox application")
    second = fourier.matrix if cfg.second_transform == "forward" else fourier.matrix.conj().T
    psi3 = second @ psi2
    _check_norm(psi3, "the second Fourier transform")
    return [psi0, psi1, psi2, psi3]


def _labelled_probs(
    fourier: FourierOperator, cfg: PipelineConfig, probs: np.ndarray
) -> tuple[tuple, np.ndarray]:
    if cfg.measure_granularity == "irrep_label_only":
        labels = tuple(dict.fromkeys(i for i, _, _ in fourier.row_index))
        agg = {lab: 0.0 for lab in labels}
        for (i, _, _), p in zip(fourier.row_index, probs):
            agg[i] += float(p)
        return labels, np.array([agg[lab] for lab in labels])
    if fourier.abelian_rows:
        return tuple(i for i, _, _ in fourier.row_index), probs
    return fourier.row_index, probs


def run_pipeline(
    instance: HspInstance,
    fourier: FourierOperator,
    cfg: PipelineConfig = PipelineConfig(),
) -> OutcomeDistribution:
    """Exact left-register outcome distribution p(x) = sum_h |<x,h|psi3>|^2."""
    psi3 = _evolve(instance, fourier, cfg)[3]
    probs = np.abs(psi3) ** 2
    labels, probs = _labelled_probs(fourier, cfg, probs.sum(axis=1))
    return finalize_distribution(labels, probs)


def step_trace(
    instance: HspInstance,
    fourier: FourierOperator,
    cfg: PipelineConfig = PipelineConfig(),
) -> list[QuantumState]:
    """Snapshots psi0..psi3 of the pipeline, for inspection and testing."""
    n_h = instance.codomain.order
    return [
        QuantumState((instance.group.order, n_h), m.reshape(-1))
        for m in _evolve(instance, fourier, cfg)
    ]


def sample(dist: OutcomeDistribution, n: int, seed: int) -> list:
    """n i.i.d. draws by inverse CDF over the fixed label order; seed-reproducible."""
    if n < 0:
        raise ValueError(f"sample count must be non-negative, got {n}")
    if n == 0:
        return []
    cum = np.cumsum(dist.probs)
    rng = np.random.default_rng(seed)
    u = rng.random(n) * cum[-1]
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, len(dist.probs) - 1)
    return [dist.labels[i] for i in idx]
