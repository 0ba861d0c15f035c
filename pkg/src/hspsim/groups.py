"""Finite group arithmetic over dense integer element indices.

Built-in kinds are cyclic groups Z_N, direct products of cyclic groups,
and dihedral groups D_N of order 2N with generators r (rotation) and s
(reflection) and relation s r s^-1 = r^-1.  Element 0 is always the
identity; the enumeration per kind is fixed (cyclic: residues ascending;
products: mixed radix, first factor most significant; dihedral:
e, r, ..., r^{N-1}, s, rs, ..., r^{N-1}s).  Groups and subgroups are
immutable after construction and safe for shared read-only use.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ResourceCapError

MAX_TABLE_ORDER = 4096
SUBGROUP_ENUM_LIMIT = 64


@dataclass(frozen=True)
class GroupElement:
    """A group element: dense index plus its canonical label."""

    index: int
    label: str


class FiniteGroup:
    """Base class; elements are the indices 0..order-1, identity is 0."""

    name: str
    order: int

    def op(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def label(self, a: int) -> str:
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    def element(self, a: int) -> GroupElement:
        self.check_index(a)
        return GroupElement(a, self.label(a))

    def elements(self) -> range:
        return range(self.order)

    def check_index(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.order:
            raise ValueError(
                f"element index {a!r} out of range for {self.name} (order {self.order})"
            )
        return int(a)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.op_table
        return bool(np.array_equal(t, t.T))

    @cached_property
    def op_table(self) -> np.ndarray:
        if self.order > MAX_TABLE_ORDER:
            raise ResourceCapError(
                f"op table for {self.name} needs order <= {MAX_TABLE_ORDER}, got {self.order}"
            )
        table = self._build_op_table()
        table.flags.writeable = False
        return table

    def _build_op_table(self) -> np.ndarray:
        n = self.order
        return np.array(
            [[self.op(a, b) for b in range(n)] for a in range(n)], dtype=np.int64
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class CyclicGroup(FiniteGroup):
    """Z_N under addition modulo N."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"cyclic group order must be positive, got {n}")
        self.n = int(n)
        self.order = self.n
        self.name = f"Z{self.n}"

    def op(self, a: int, b: int) -> int:
        self.check_index(a)
        self.check_index(b)
        return (a + b) % self.n

    def inv(self, a: int) -> int:
        self.check_index(a)
        return (-a) % self.n

    def label(self, a: int) -> str:
        return str(self.check_index(a))

    def _build_op_table(self) -> np.ndarray:
        idx = np.arange(self.n, dtype=np.int64)
        return (idx[:, None] + idx[None, :]) % self.n

    @cached_property
    def is_abelian(self) -> bool:
        return True


class ProductGroup(FiniteGroup):
    """Direct product of cyclic groups, mixed-radix indexed."""

    def __init__(self, moduli: tuple[int, ...]):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise ValueError(f"product moduli must be positive, got {moduli}")
        self.moduli = moduli
        order = 1
        for m in moduli:
            order *= m
        self.order = order
        self.name = _product_name(moduli)

    def coords(self, a: int) -> tuple[int, ...]:
        self.check_index(a)
        out = []
        for m in reversed(self.moduli):
            a, r = divmod(a, m)
            out.append(r)
        return tuple(reversed(out))

    def index_of(self, coords) -> int:
        if len(coords) != len(self.moduli):
            raise ValueError(
                f"expected {len(self.moduli)} coordinates for {self.name}, got {coords!r}"
            )
        a = 0
        for x, m in zip(coords, self.moduli):
            x = int(x)
            if not 0 <= x < m:
                raise ValueError(f"coordinate {x} out of range for modulus {m}")
            a = a * m + x
        return a

    def op(self, a: int, b: int) -> int:
        ca, cb = self.coords(a), self.coords(b)
        return self.index_of(tuple((x + y) % m for x, y, m in zip(ca, cb, self.moduli)))

    def inv(self, a: int) -> int:
        return self.index_of(tuple((-x) % m for x, m in zip(self.coords(a), self.moduli)))

    def label(self, a: int) -> str:
        return "(" + ",".join(str(x) for x in self.coords(a)) + ")"

    def _build_op_table(self) -> np.ndarray:
        mods = np.array(self.moduli, dtype=np.int64)
        coords = np.array([self.coords(a) for a in range(self.order)], dtype=np.int64)
        summed = (coords[:, None, :] + coords[None, :, :]) % mods
        weights = np.ones(len(mods), dtype=np.int64)
        for i in range(len(mods) - 2, -1, -1):
            weights[i] = weights[i + 1] * mods[i + 1]
        return summed @ weights

    @cached_property
    def is_abelian(self) -> bool:
        return True


class DihedralGroup(FiniteGroup):
    """D_N of order 2N; index a encodes r^(a mod N) s^(a div N)."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"dihedral parameter must be positive, got {n}")
        self.n = int(n)
        self.order = 2 * self.n
        self.name = f"D{self.n}"

    def rotation_reflection(self, a: int) -> tuple[int, int]:
        self.check_index(a)
        return a % self.n, a // self.n

    def op(self, a: int, b: int) -> int:
        arot, aref = self.rotation_reflection(a)
        brot, bref = self.rotation_reflection(b)
        rot = (arot - brot) % self.n if aref else (arot + brot) % self.n
        return ((aref + bref) % 2) * self.n + rot

    def inv(self, a: int) -> int:
        rot, ref = self.rotation_reflection(a)
        return a if ref else (-rot) % self.n

    def label(self, a: int) -> str:
        rot, ref = self.rotation_reflection(a)
        parts = []
        if rot:
            parts.append("r" if rot == 1 else f"r{rot}")
        if ref:
            parts.append("s")
        return "".join(parts) or "e"

    def _build_op_table(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        rot, ref = idx % self.n, idx // self.n
        sign = np.where(ref[:, None] == 1, -1, 1)
        out_rot = (rot[:, None] + sign * rot[None, :]) % self.n
        out_ref = (ref[:, None] + ref[None, :]) % 2
        return out_ref * self.n + out_rot


class QuotientGroup(FiniteGroup):
    """G/K on least-index coset representatives, with the natural epimorphism."""

    def __init__(self, parent: FiniteGroup, kernel: "Subgroup"):
        if kernel.group is not parent:
            raise ValueError("kernel subgroup does not belong to the parent group")
        if not kernel.normal:
            raise ValueError(
                f"quotient {parent.name}/K needs a normal K; "
                f"<{','.join(parent.label(g) for g in kernel.generators) or 'e'}> is not normal"
            )
        cosets = left_cosets(parent, kernel)
        self.parent = parent
        self.kernel = kernel
        self.cosets = tuple(cosets)
        self.coset_reps = tuple(c[0] for c in cosets)
        self.order = len(cosets)
        gen_names = ",".join(parent.label(g) for g in kernel.generators) or "e"
        self.name = f"{parent.name}/<{gen_names}>"

        to_coset = [0] * parent.order
        for q, coset in enumerate(cosets):
            for g in coset:
                to_coset[g] = q
        self.epimorphism = tuple(to_coset)

        table = np.empty((self.order, self.order), dtype=np.int64)
        for i, a in enumerate(self.coset_reps):
            for j, b in enumerate(self.coset_reps):
                table[i, j] = to_coset[parent.op(a, b)]
        table.flags.writeable = False
        self._table = table

    def project(self, g: int) -> int:
        self.parent.check_index(g)
        return self.epimorphism[g]

    def op(self, a: int, b: int) -> int:
        self.check_index(a)
        self.check_index(b)
        return int(self._table[a, b])

    def inv(self, a: int) -> int:
        self.check_index(a)
        return self.epimorphism[self.parent.inv(self.coset_reps[a])]

    def label(self, a: int) -> str:
        self.check_index(a)
        return f"[{self.parent.label(self.coset_reps[a])}]"

    def _build_op_table(self) -> np.ndarray:
        return self._table.copy()


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted element indices inside a parent group."""

    group: FiniteGroup = field(compare=False)
    elements: tuple[int, ...]
    generators: tuple[int, ...]
    normal: bool

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def num_cosets(self) -> int:
        return self.group.order // self.order

    def __contains__(self, a: int) -> bool:
        return a in set(self.elements)

    def element_labels(self) -> tuple[str, ...]:
        return tuple(self.group.label(a) for a in self.elements)

    @classmethod
    def from_generators(cls, group: FiniteGroup, generators) -> "Subgroup":
        gens = tuple(group.check_index(g) for g in generators)
        elems = _closure(group, gens)
        return cls(group, elems, gens, _is_normal(group, elems))

    @classmethod
    def from_elements(cls, group: FiniteGroup, elements, generators=None) -> "Subgroup":
        elems = tuple(sorted({group.check_index(a) for a in elements}))
        if not elems or elems[0] != group.identity:
            raise ValueError("subgroup must contain the identity")
        if not _is_closed(group, elems):
            eset = set(elems)
            for a in elems:
                if group.inv(a) not in eset:
                    raise ValueError(
                        f"element set not closed under inverse at {group.label(a)}"
                    )
                for b in elems:
                    if group.op(a, b) not in eset:
                        raise ValueError(
                            f"element set not closed under the group operation at "
                            f"({group.label(a)}, {group.label(b)})"
                        )
        gens = tuple(generators) if generators is not None else elems
        return cls(group, elems, gens, _is_normal(group, elems))


def _closure(group: FiniteGroup, gens: tuple[int, ...]) -> tuple[int, ...]:
    seen = {group.identity}
    queue = deque(seen)
    gen_list = tuple(dict.fromkeys(gens))
    while queue:
        a = queue.popleft()
        for g in gen_list:
            c = group.op(a, g)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return tuple(sorted(seen))


def _is_closed(group: FiniteGroup, elements: tuple[int, ...]) -> bool:
    if group.order <= MAX_TABLE_ORDER:
        table = group.op_table
        idx = np.array(elements, dtype=np.int64)
        member = np.zeros(group.order, dtype=bool)
        member[idx] = True
        return bool(member[table[np.ix_(idx, idx)]].all())
    eset = set(elements)
    return all(group.op(a, b) in eset for a in elements for b in elements)


def _is_normal(group: FiniteGroup, elements: tuple[int, ...]) -> bool:
    if group.is_abelian:
        return True
    if group.order <= MAX_TABLE_ORDER:
        table = group.op_table
        idx = np.array(elements, dtype=np.int64)
        inv = np.array([group.inv(g) for g in range(group.order)], dtype=np.int64)
        member = np.zeros(group.order, dtype=bool)
        member[idx] = True
        conj = table[table[:, idx], inv[:, None]]
        return bool(member[conj].all())
    eset = set(elements)
    for g in range(group.order):
        ginv = group.inv(g)
        for k in elements:
            if group.op(group.op(g, k), ginv) not in eset:
                return False
    return True


def subgroup_from_generators(group: FiniteGroup, generators) -> Subgroup:
    return Subgroup.from_generators(group, generators)


def left_cosets(group: FiniteGroup, subgroup: Subgroup) -> list[tuple[int, ...]]:
    """Partition of G into left cosets gK, ordered by least-index representative."""
    if subgroup.group is not group:
        raise ValueError("subgroup does not belong to the given group")
    seen = [False] * group.order
    cosets = []
    for g in range(group.order):
        if seen[g]:
            continue
        coset = tuple(sorted(group.op(g, k) for k in subgroup.elements))
        for x in coset:
            seen[x] = True
        cosets.append(coset)
    return cosets


def quotient_group(group: FiniteGroup, subgroup: Subgroup) -> QuotientGroup:
    """G/K with the induced operation; refuses non-normal K."""
    return QuotientGroup(group, subgroup)


def all_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """Complete subgroup list, sorted by (order, element tuple).

    Enumerates by closing single generators and then iteratively joining
    with cyclic subgroups until no new subgroup appears; complete because
    every subgroup is a join of the cyclic subgroups of its elements.
    """
    n = group.order
    if n > SUBGROUP_ENUM_LIMIT:
        raise ResourceCapError(
            f"subgroup enumeration is limited to order {SUBGROUP_ENUM_LIMIT}, "
            f"got {group.name} of order {n}"
        )
    op_rows = [list(map(int, row)) for row in group.op_table]

    def closure_mask(gens: tuple[int, ...]) -> int:
        mask = 1
        queue = deque([0])
        while queue:
            a = queue.popleft()
            row = op_rows[a]
            for g in gens:
                c = row[g]
                bit = 1 << c
                if not mask & bit:
                    mask |= bit
                    queue.append(c)
        return mask

    cyclic: dict[int, tuple[int, ...]] = {}
    for g in range(n):
        m = closure_mask((g,))
        cyclic.setdefault(m, (g,) if g else ())
    found: dict[int, tuple[int, ...]] = dict(cyclic)
    found.setdefault(1, ())
    queue = deque(found.items())
    cyclic_items = sorted(cyclic.items())
    while queue:
        mask, gens = queue.popleft()
        for cmask, cgens in cyclic_items:
            if cmask & ~mask == 0:
                continue
            joined_gens = gens + cgens
            jmask = closure_mask(joined_gens)
            if jmask not in found:
                found[jmask] = joined_gens
                queue.append((jmask, joined_gens))

    abelian = group.is_abelian
    out = []
    for mask, gens in found.items():
        elems = tuple(i for i in range(n) if mask >> i & 1)
        normal = True if abelian else _is_normal(group, elems)
        out.append(Subgroup(group, elems, gens, normal))
    out.sort(key=lambda s: (s.order, s.elements))
    return out


def _product_name(moduli: tuple[int, ...]) -> str:
    if len(moduli) == 1:
        return f"Z{moduli[0]}^1"
    parts = []
    i = 0
    while i < len(moduli):
        j = i
        while j < len(moduli) and moduli[j] == moduli[i]:
            j += 1
        count = j - i
        parts.append(f"Z{moduli[i]}^{count}" if count > 1 else f"Z{moduli[i]}")
        i = j
    return "x".join(parts)


_DIHEDRAL_RE = re.compile(r"[Dd](\d+)")
_CYCLIC_FACTOR_RE = re.compile(r"[Zz](\d+)(?:\^(\d+))?")


def group_from_spec(spec: str) -> FiniteGroup:
    """Parse a group description such as "Z6", "Z2^3", "Z2xZ4", or "D4"."""
    s = spec.replace(" ", "")
    if not s:
        raise ValueError("empty group spec")
    m = _DIHEDRAL_RE.fullmatch(s)
    if m:
        return DihedralGroup(int(m.group(1)))
    factors: list[int] = []
    explicit_product = "x" in s or "X" in s or "^" in s
    for part in re.split(r"[xX]", s):
        m = _CYCLIC_FACTOR_RE.fullmatch(part)
        if not m:
            raise ValueError(f"unrecognized group spec {spec!r}")
        base = int(m.group(1))
        power = int(m.group(2)) if m.group(2) else 1
        if base < 1 or power < 1:
            raise ValueError(f"group spec {spec!r} has a non-positive factor")
        factors.extend([base] * power)
    if not explicit_product and len(factors) == 1:
        return CyclicGroup(factors[0])
    return ProductGroup(tuple(factors))
