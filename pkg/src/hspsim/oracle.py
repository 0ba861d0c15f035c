"""Hidden-subgroup instances and the two-register blackbox permutation.

An instance fixes a group G, a hidden subgroup K, and a map f: G -> H
that factors through the coset space: f is constant on each left coset
of K and injective across cosets.  The codomain defaults to Z_M with
M = |G|/|K|; its group structure never influences the left-register
statistics.  The blackbox acts on the G x H basis by
|g>|h> -> |g>|f(g) h^-1>, a pure permutation of amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import IntegrityError
from .groups import CyclicGroup, FiniteGroup, Subgroup, left_cosets

if TYPE_CHECKING:
    from .engine import QuantumState


@dataclass(frozen=True)
class HspInstance:
    group: FiniteGroup
    hidden: Subgroup
    codomain: CyclicGroup
    injection: tuple[int, ...]
    f_table: np.ndarray
    seed: int

    def f(self, g: int) -> int:
        self.group.check_index(g)
        return int(self.f_table[g])


def build_instance(
    group: FiniteGroup, hidden: Subgroup, seed: int, codomain_order: int | None = None
) -> HspInstance:
    """Instance with a seed-chosen injection of the coset space into Z_M."""
    cosets = left_cosets(group, hidden)
    m = len(cosets)
    big_m = m if codomain_order is None else int(codomain_order)
    if big_m < m:
        raise ValueError(f"codomain order {big_m} is below the coset count {m}")
    rng = np.random.default_rng(seed)
    injection = tuple(int(v) for v in rng.permutation(big_m)[:m])
    f_table = np.empty(group.order, dtype=np.int64)
    for idx, coset in enumerate(cosets):
        for g in coset:
            f_table[g] = injection[idx]
    f_table.flags.writeable = False
    return HspInstance(group, hidden, CyclicGroup(big_m), injection, f_table, int(seed))


class OracleUnitary:
    """Basis permutation |g>|h> -> |g>|f(g) h^-1> on the G x H register pair."""

    def __init__(self, instance: HspInstance):
        self.instance = instance
        h_group = instance.codomain
        hs = np.arange(h_group.order, dtype=np.int64)
        inv_h = (-hs) % h_group.order
        # target right index per (g, h): f(g) * h^-1 in the codomain
        self.target = (instance.f_table[:, None] + inv_h[None, :]) % h_group.order
        self.target.flags.writeable = False

    def permute(self, amplitudes: np.ndarray) -> np.ndarray:
        """Apply the permutation to a (|G|, |H|) amplitude array."""
        n_g, n_h = self.target.shape
        if amplitudes.shape != (n_g, n_h):
            raise ValueError(
                f"state shape {amplitudes.shape} does not match registers {(n_g, n_h)}"
            )
        out = np.empty_like(amplitudes)
        out[np.arange(n_g)[:, None], self.target] = amplitudes
        return out


def apply_oracle(oracle: OracleUnitary, state: "QuantumState") -> "QuantumState":
    """Blackbox application; preserves the l2 norm bit-exactly."""
    n_g, n_h = state.dims
    permuted = oracle.permute(state.amplitudes.reshape(n_g, n_h))
    return type(state)(state.dims, permuted.reshape(-1))


def classical_brute_force_hsp(instance: HspInstance) -> Subgroup:
    """Ground-truth recovery: the stabilizer set {g : f(g) = f(e)}.

    Validates that the set is a subgroup and that f is constant on its
    left cosets with distinct values across cosets.
    """
    f = instance.f_table
    group = instance.group
    members = [g for g in range(group.order) if f[g] == f[0]]
    try:
        candidate = Subgroup.from_elements(group, members)
    except ValueError as exc:
        raise IntegrityError(f"f-stabilizer is not a subgroup: {exc}") from exc
    values = []
    for coset in left_cosets(group, candidate):
        vals = {int(f[g]) for g in coset}
        if len(vals) != 1:
            raise IntegrityError("f is not constant on a left coset of its stabilizer")
        values.append(vals.pop())
    if len(set(values)) != len(values):
        raise IntegrityError("f repeats a value across distinct cosets")
    return candidate
