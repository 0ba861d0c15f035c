"""Irreducible representations and the block Fourier unitary.

Cyclic and product groups get their 1-dimensional characters; dihedral
groups get the closed-form family (two or four characters plus 2-dim
rotation blocks rho_k(r) = diag(w^k, w^-k), rho_k(s) = antidiag(1, 1)).
The Fourier operator stacks the entrywise-conjugated irrep entries row
by row with per-block scaling sqrt(d/|G|), the unique scaling that makes
the stacked matrix unitary.  Phases are computed from exact reduced
angles 2*pi*(t mod M)/M so residuals stay near machine precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError
from .groups import CyclicGroup, DihedralGroup, FiniteGroup, ProductGroup

CONTRAGREDIENT_UNITARITY_TOL = 1e-10


class BasisOrdering(str, enum.Enum):
    """Row ordering of the Fourier operator; blocks are row-major in (j, k)."""

    DIM_THEN_LABEL = "dim_then_label"
    LABEL = "label"
    DIM_DESC_THEN_LABEL = "dim_desc_then_label"


@dataclass(frozen=True)
class Irrep:
    """A unitary irreducible representation as a (|G|, dim, dim) matrix stack."""

    group: FiniteGroup
    label: int
    dim: int
    matrices: np.ndarray

    def matrix(self, g: int) -> np.ndarray:
        self.group.check_index(g)
        return self.matrices[g]

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def max_unitarity_residual(self) -> float:
        eye = np.eye(self.dim)
        prod = self.matrices @ self.matrices.conj().transpose(0, 2, 1)
        return float(np.abs(prod - eye).max())


@dataclass(frozen=True)
class FourierOperator:
    """|G| x |G| unitary with rows indexed by (irrep label, row, column)."""

    group: FiniteGroup
    matrix: np.ndarray
    row_index: tuple[tuple[int, int, int], ...]
    normalization: tuple[tuple[int, float], ...]
    ordering: BasisOrdering

    @property
    def abelian_rows(self) -> bool:
        return all(j == 0 and k == 0 for _, j, k in self.row_index)

    def max_unitarity_residual(self) -> float:
        n = self.matrix.shape[0]
        return float(np.abs(self.matrix @ self.matrix.conj().T - np.eye(n)).max())


def _phases(numerators: np.ndarray, denominator: int) -> np.ndarray:
    """exp(2*pi*i*t/denominator) for integer t, reduced before the division."""
    t = np.mod(numerators, denominator)
    return np.exp(2j * np.pi * (t / denominator))


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def irreps_of(group: FiniteGroup) -> list[Irrep]:
    """Complete set of inequivalent unitary irreps for a built-in group kind."""
    if isinstance(group, CyclicGroup):
        irreps = _cyclic_irreps(group)
    elif isinstance(group, ProductGroup):
        irreps = _product_irreps(group)
    elif isinstance(group, DihedralGroup):
        irreps = _dihedral_irreps(group)
    else:
        raise ValueError(f"no closed-form irreps for group kind {type(group).__name__}")
    if sum(ir.dim * ir.dim for ir in irreps) != group.order:
        raise IntegrityError(f"irrep dimensions for {group.name} do not sum to |G|")
    return irreps


def _cyclic_irreps(group: CyclicGroup) -> list[Irrep]:
    n = group.n
    xs = np.arange(n, dtype=np.int64)
    out = []
    for y in range(n):
        mats = _phases(xs * y, n).reshape(n, 1, 1)
        out.append(Irrep(group, y, 1, _readonly(mats)))
    return out


def _product_irreps(group: ProductGroup) -> list[Irrep]:
    mods = group.moduli
    big = math.lcm(*mods)
    coords = np.array([group.coords(a) for a in range(group.order)], dtype=np.int64)
    weights_base = np.array([big // m for m in mods], dtype=np.int64)
    out = []
    for y in range(group.order):
        yc = np.array(group.coords(y), dtype=np.int64)
        t = coords @ (yc * weights_base)
        mats = _phases(t, big).reshape(group.order, 1, 1)
        out.append(Irrep(group, y, 1, _readonly(mats)))
    return out


def _dihedral_irreps(group: DihedralGroup) -> list[Irrep]:
    n = group.n
    idx = np.arange(group.order, dtype=np.int64)
    rot, ref = idx % n, idx // n
    out: list[Irrep] = []

    sign_pairs = [(1, 1), (1, -1)]
    if n % 2 == 0:
        sign_pairs += [(-1, 1), (-1, -1)]
    for label, (eps_r, eps_s) in enumerate(sign_pairs):
        vals = (np.float64(eps_r) ** rot) * (np.float64(eps_s) ** ref)
        mats = vals.astype(np.complex128).reshape(group.order, 1, 1)
        out.append(Irrep(group, label, 1, _readonly(mats)))

    label = len(sign_pairs)
    for k in range(1, (n + 1) // 2 if n % 2 else n // 2):
        diag_pos = _phases(k * rot, n)
        diag_neg = _phases(-k * rot, n)
        mats = np.zeros((group.order, 2, 2), dtype=np.complex128)
        rotating = ref == 0
        mats[rotating, 0, 0] = diag_pos[rotating]
        mats[rotating, 1, 1] = diag_neg[rotating]
        mats[~rotating, 0, 1] = diag_pos[~rotating]
        mats[~rotating, 1, 0] = diag_neg[~rotating]
        out.append(Irrep(group, label, 2, _readonly(mats)))
        label += 1
    return out


def contragredient(irrep: Irrep) -> Irrep:
    """g -> transpose(pi(g^-1)); equals the entrywise conjugate for unitary pi."""
    if irrep.max_unitarity_residual() > CONTRAGREDIENT_UNITARITY_TOL:
        raise ValueError("contragredient requires a unitary representation")
    group = irrep.group
    inv_idx = np.array([group.inv(g) for g in range(group.order)], dtype=np.int64)
    mats = irrep.matrices[inv_idx].transpose(0, 2, 1).copy()
    return Irrep(group, irrep.label, irrep.dim, _readonly(mats))


def _ordered_irreps(irreps: list[Irrep], ordering: BasisOrdering) -> list[Irrep]:
    if ordering is BasisOrdering.DIM_THEN_LABEL:
        return sorted(irreps, key=lambda ir: (ir.dim, ir.label))
    if ordering is BasisOrdering.LABEL:
        return sorted(irreps, key=lambda ir: ir.label)
    if ordering is BasisOrdering.DIM_DESC_THEN_LABEL:
        return sorted(irreps, key=lambda ir: (-ir.dim, ir.label))
    raise ValueError(f"unknown basis ordering {ordering!r}")


def fourier_operator(
    group: FiniteGroup, ordering: BasisOrdering = BasisOrdering.DIM_THEN_LABEL
) -> FourierOperator:
    """Unitary Fourier operator; entry at row (i, j, k), column g is
    sqrt(d_i/|G|) * conj(pi_i(g))[j, k]."""
    ordering = BasisOrdering(ordering)
    irreps = _ordered_irreps(irreps_of(group), ordering)
    n = group.order
    rows = np.empty((n, n), dtype=np.complex128)
    row_index: list[tuple[int, int, int]] = []
    normalization: list[tuple[int, float]] = []
    pos = 0
    for ir in irreps:
        scale = math.sqrt(ir.dim / n)
        normalization.append((ir.label, scale))
        block = np.conj(ir.matrices)
        for j in range(ir.dim):
            for k in range(ir.dim):
                rows[pos] = scale * block[:, j, k]
                row_index.append((ir.label, j, k))
                pos += 1
    if pos != n:
        raise IntegrityError(f"Fourier row count {pos} != |{group.name}| = {n}")
    return FourierOperator(
        group, _readonly(rows), tuple(row_index), tuple(normalization), ordering
    )


def verify_representation_suite(group: FiniteGroup) -> dict:
    """Completeness, Schur orthogonality, and unitarity residuals for irreps_of."""
    irreps = irreps_of(group)
    n = group.order
    total = sum(ir.dim * ir.dim for ir in irreps)
    flat = np.empty((total, n), dtype=np.complex128)
    scales = np.empty(total)
    pos = 0
    for ir in irreps:
        for j in range(ir.dim):
            for k in range(ir.dim):
                flat[pos] = ir.matrices[:, j, k]
                scales[pos] = ir.dim / n
                pos += 1
    gram = (scales[:, None] * flat) @ flat.conj().T
    max_schur = float(np.abs(gram - np.eye(total)).max())
    max_unitarity = max(ir.max_unitarity_residual() for ir in irreps)
    return {
        "completeness_defect": total - n,
        "max_schur_residual": max_schur,
        "max_unitarity_residual": max_unitarity,
    }
