"""Transversal maps tau: Q -> G and period-finding over the finite image Z_Q.

A transversal picks one representative per fiber of an epimorphism
nu: G -> Q, so nu . tau = id_Q.  For period finding the domain is the
integer line, never materialized: only the representative table and the
composed table f~(q) = a^tau(q) mod N exist.  The canonical transversal
maps q to its least non-negative representative; the adversarial family
adds per-point offsets q + Q*m_q, which keeps the section property while
generically destroying the periodicity of f~.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .engine import OutcomeDistribution, finalize_distribution
from .errors import ResourceCapError
from .groups import FiniteGroup, QuotientGroup, Subgroup, quotient_group

PERIOD_STATE_CAP = 1 << 22


@dataclass(frozen=True)
class Transversal:
    """Section table of an epimorphism; target None means the integer line."""

    quotient_order: int
    table: tuple[int, ...]
    target: FiniteGroup | None
    quotient: QuotientGroup | None
    kind: str
    seed: int | None = None
    bound: int | None = None

    def __post_init__(self):
        q = self.quotient_order
        if len(self.table) != q:
            raise ValueError(f"transversal table has {len(self.table)} entries, expected {q}")
        if len(set(self.table)) != q:
            raise ValueError("transversal table is not injective")
        if self.target is None:
            for i, rep in enumerate(self.table):
                if rep < 0 or rep % q != i:
                    raise ValueError(
                        f"representative {rep} does not reduce to {i} modulo {q}"
                    )
        else:
            if self.quotient is None or self.quotient.order != q:
                raise ValueError("finite-target transversal needs its quotient group")
            for i, rep in enumerate(self.table):
                if self.quotient.project(rep) != i:
                    raise ValueError(
                        f"representative {self.target.label(rep)} lies in coset "
                        f"{self.quotient.project(rep)}, expected {i}"
                    )

    def __call__(self, q: int) -> int:
        return self.table[q]

    @property
    def provenance(self) -> str:
        if self.kind == "offset":
            return f"offset(seed={self.seed}, bound={self.bound})"
        return self.kind


def shor_transversal(q: int) -> Transversal:
    """Least non-negative representatives of Z_q inside the integers."""
    if q < 1:
        raise ValueError(f"quotient order must be positive, got {q}")
    return Transversal(q, tuple(range(q)), None, None, "shor")


def offset_transversal(q: int, bound: int, seed: int) -> Transversal:
    """tau(i) = i + q*m_i with m_i drawn uniformly from [0, bound)."""
    if q < 1:
        raise ValueError(f"quotient order must be positive, got {q}")
    if bound < 1:
        raise ValueError(f"offset bound must be at least 1, got {bound}")
    rng = np.random.default_rng(seed)
    offsets = rng.integers(0, bound, size=q)
    table = tuple(i + q * int(m) for i, m in enumerate(offsets))
    return Transversal(q, table, None, None, "offset", seed=int(seed), bound=int(bound))


def finite_transversal(
    group: FiniteGroup, hidden: Subgroup, policy: str = "least_index", seed: int | None = None
) -> Transversal:
    """One representative per coset of a normal subgroup; least-index or seeded."""
    if policy not in ("least_index", "seeded_random"):
        raise ValueError(f"unknown transversal policy {policy!r}")
    quotient = quotient_group(group, hidden)
    if policy == "least_index":
        reps = quotient.coset_reps
    else:
        rng = np.random.default_rng(seed)
        reps = tuple(int(coset[rng.integers(len(coset))]) for coset in quotient.cosets)
    return Transversal(quotient.order, reps, group, quotient, policy, seed=seed)


@dataclass(frozen=True)
class PeriodicInstance:
    """Modular exponentiation x -> a^x mod N approximated over Z_Q."""

    modulus: int
    base: int
    q: int
    allow_any_q: bool = False

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {self.modulus}")
        if not 1 <= self.base < self.modulus:
            raise ValueError(f"base {self.base} not in [1, {self.modulus})")
        if math.gcd(self.base, self.modulus) != 1:
            raise ValueError(
                f"base {self.base} is not coprime to the modulus {self.modulus}"
            )
        if self.q < 1:
            raise ValueError(f"Q must be positive, got {self.q}")
        if not self.allow_any_q and self.q & (self.q - 1):
            raise ValueError(f"Q = {self.q} is not a power of two (set allow_any_q to override)")

    @cached_property
    def period(self) -> int:
        r, value = 1, self.base % self.modulus
        while value != 1:
            value = (value * self.base) % self.modulus
            r += 1
        return r


@dataclass(frozen=True)
class ApproximateFunction:
    """Composed table f~(q) = f(tau(q)) with the provenance of tau."""

    transversal: Transversal
    values: tuple[int, ...]
    provenance: str


def approximate_function(instance: PeriodicInstance, tau: Transversal) -> ApproximateFunction:
    if tau.target is not None:
        raise ValueError("period finding needs a transversal into the integer line")
    if tau.quotient_order != instance.q:
        raise ValueError(
            f"transversal has quotient order {tau.quotient_order}, instance expects {instance.q}"
        )
    values = tuple(pow(instance.base, rep, instance.modulus) for rep in tau.table)
    return ApproximateFunction(tau, values, tau.provenance)


def shor_pipeline(
    instance: PeriodicInstance, tau: Transversal, second_transform: str = "forward"
) -> OutcomeDistribution:
    """Exact left-register distribution over Z_Q for the composed table f~.

    Identical to running the two-register pipeline on domain Z_Q with right
    register Z_N; computed per distinct f~ value with an orthonormal FFT,
    which is the Z_Q Fourier operator applied column by column.
    """
    if second_transform not in ("forward", "inverse"):
        raise ValueError("second_transform must be 'forward' or 'inverse'")
    q, n = instance.q, instance.modulus
    if q * n > PERIOD_STATE_CAP:
        raise ResourceCapError(f"state size {q}*{n} exceeds the cap {PERIOD_STATE_CAP}")
    values = np.array(approximate_function(instance, tau).values, dtype=np.int64)
    transform = np.fft.fft if second_transform == "forward" else np.fft.ifft
    probs = np.zeros(q)
    for value in np.unique(values):
        column = (values == value).astype(np.complex128) / math.sqrt(q)
        probs += np.abs(transform(column, norm="ortho")) ** 2
    return finalize_distribution(tuple(range(q)), probs)


def peak_mass(dist: OutcomeDistribution, r: int, q: int) -> float:
    """Total probability within half-integer windows of the multiples j*Q/r.

    An integer outcome y qualifies when min_j |y - j*Q/r| <= 1/2, evaluated
    in exact integer arithmetic as 2*|r*y - j*Q| <= r.
    """
    if r < 1:
        raise ValueError(f"period must be positive, got {r}")
    if q < 1:
        raise ValueError(f"Q must be positive, got {q}")
    total = 0.0
    for label, p in zip(dist.labels, dist.probs):
        y = int(label)
        j0 = round(r * y / q)
        best = min(abs(r * y - j * q) for j in (j0 - 1, j0, j0 + 1))
        if 2 * best <= r:
            total += float(p)
    return total


def transversal_quality_sweep(
    instance: PeriodicInstance, bound: int, seeds
) -> list[tuple[int, float, float]]:
    """Peak mass of the canonical transversal versus seeded offset transversals."""
    r, q = instance.period, instance.q
    reference = peak_mass(shor_pipeline(instance, shor_transversal(q)), r, q)
    rows = []
    for seed in seeds:
        tau = offset_transversal(q, bound, seed)
        pm = peak_mass(shor_pipeline(instance, tau), r, q)
        rows.append((int(seed), reference, pm))
    return rows
