"""Finite matrix groups SL_d(Z/qZ) and small auxiliary groups.

Every group is materialized as a :class:`GroupTable`: an ordered list of
hashable canonical elements (identity at index 0) together with an exact
element -> index map.  All higher layers (measures, spectra, characters,
diameters) work purely with integer indices, so the element representation
only matters here.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from math import lcm

import numpy as np
from sympy import factorint

DEFAULT_CAP = 1 << 21

_CACHE_MAGIC = b"HWGT"
_CACHE_VERSION = 1


class InvalidModulusError(ValueError):
    """Raised for moduli q < 2 or non-divisor quotient moduli."""


class EnumerationCapError(RuntimeError):
    """Raised when a group is too large to enumerate.

    Carries the exact order that was refused.
    """

    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"group of order {order} exceeds enumeration cap {cap}")


# ---------------------------------------------------------------------------
# matrix arithmetic over Z/qZ (matrices are flat row-major tuples)


def mat_mul(a, b, d, q):
    return tuple(
        sum(a[i * d + k] * b[k * d + j] for k in range(d)) % q
        for i in range(d)
        for j in range(d)
    )


def mat_identity(d):
    return tuple(1 if i == j else 0 for i in range(d) for j in range(d))


def _minor_det(a, d, rows, cols, q):
    if len(rows) == 1:
        return a[rows[0] * d + cols[0]] % q
    total = 0
    sign = 1
    for idx, c in enumerate(cols):
        sub = _minor_det(a, d, rows[1:], cols[:idx] + cols[idx + 1 :], q)
        total += sign * a[rows[0] * d + c] * sub
        sign = -sign
    return total % q


def mat_det(a, d, q):
    return _minor_det(a, d, tuple(range(d)), tuple(range(d)), q)


def mat_inv(a, d, q):
    """Inverse of a determinant-1 matrix via the adjugate (no division)."""
    if d == 1:
        return (a[0] % q,)
    rows = tuple(range(d))
    out = [0] * (d * d)
    for i in range(d):
        for j in range(d):
            sub_rows = tuple(r for r in rows if r != j)
            sub_cols = tuple(c for c in rows if c != i)
            cof = _minor_det(a, d, sub_rows, sub_cols, q)
            if (i + j) % 2:
                cof = -cof
            out[i * d + j] = cof % q
    return tuple(out)


def slq_order(d: int, q: int) -> int:
    """Closed-form |SL_d(Z/qZ)|, multiplicative over prime powers."""
    if q < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {q}")
    order = 1
    for p, k in factorint(q).items():
        slp = p ** (d * (d - 1) // 2)
        for i in range(2, d + 1):
            slp *= p**i - 1
        order *= p ** ((k - 1) * (d * d - 1)) * slp
    return order


# ---------------------------------------------------------------------------


class GroupTable:
    """A fully enumerated finite group with integer indexing.

    ``elements`` holds canonical hashable objects with the identity at
    position 0.  Construction is single-writer; afterwards the table is
    immutable and safe to share (permutation caches are filled lazily but
    idempotently).
    """

    def __init__(self, elements, mul, inv, label="", meta=None, generators=()):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements in table")
        self.order = len(self.elements)
        self._mul = mul
        self._inv = inv
        self.label = label or f"group[{self.order}]"
        self.meta = dict(meta or {})
        self.canonical_generators = list(generators)
        self.inverse = np.array([self.index[inv(g)] for g in self.elements], dtype=np.int64)
        self._left_perms: dict[int, np.ndarray] = {}
        self._right_perms: dict[int, np.ndarray] = {}

    def __repr__(self):
        return f"GroupTable({self.label}, order={self.order})"

    def multiply(self, i: int, j: int) -> int:
        return self.index[self._mul(self.elements[i], self.elements[j])]

    def invert(self, i: int) -> int:
        return int(self.inverse[i])

    def generator_indices(self) -> list[int]:
        return [self.index[g] for g in self.canonical_generators]

    def left_perm(self, i: int) -> np.ndarray:
        """Permutation j -> index(g_i * g_j)."""
        perm = self._left_perms.get(i)
        if perm is None:
            gi = self.elements[i]
            perm = np.array([self.index[self._mul(gi, g)] for g in self.elements], dtype=np.int64)
            self._left_perms[i] = perm
        return perm

    def right_perm(self, i: int) -> np.ndarray:
        """Permutation j -> index(g_j * g_i)."""
        perm = self._right_perms.get(i)
        if perm is None:
            gi = self.elements[i]
            perm = np.array([self.index[self._mul(g, gi)] for g in self.elements], dtype=np.int64)
            self._right_perms[i] = perm
        return perm

    def element_order(self, i: int) -> int:
        n = 1
        j = i
        while j != 0:
            j = self.multiply(j, i)
            n += 1
        return n

    def exponent(self) -> int:
        e = 1
        for i in range(self.order):
            e = lcm(e, self.element_order(i))
        return e


@dataclass
class GenSet:
    """A set of generator indices with the flags the walk theory cares about."""

    members: list[int]
    contains_identity: bool = False
    symmetric: bool = False

    @classmethod
    def from_indices(cls, table: GroupTable, indices, add_identity=True, symmetrize=True):
        members = set(int(i) for i in indices)
        if symmetrize:
            members |= {table.invert(i) for i in members}
        if add_identity:
            members.add(0)
        members = sorted(members)
        symmetric = all(table.invert(i) in set(members) for i in members)
        return cls(members=members, contains_identity=0 in members, symmetric=symmetric)


# ---------------------------------------------------------------------------
# builders


def _bfs_closure(identity, generators, mul, cap):
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for g in frontier:
            for s in generators:
                h = mul(g, s)
                if h not in seen:
                    seen.add(h)
                    elements.append(h)
                    new.append(h)
                    if len(elements) > cap:
                        raise EnumerationCapError(len(elements), cap)
        frontier = new
    return elements


def transvection_generators(d: int, q: int):
    """Elementary transvections I + E_ij (i != j); they generate SL_d(Z/qZ)."""
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                m = list(mat_identity(d))
                m[i * d + j] = 1 % q
                gens.append(tuple(m))
    return gens


def build_slq(d: int, q: int, cap: int = DEFAULT_CAP) -> GroupTable:
    """Enumerate SL_d(Z/qZ) by breadth-first closure from transvections."""
    if not 2 <= d <= 4:
        raise ValueError(f"dimension must be in [2, 4], got {d}")
    if q < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {q}")
    order = slq_order(d, q)
    if order > cap:
        raise EnumerationCapError(order, cap)
    mul = lambda a, b: mat_mul(a, b, d, q)
    gens = transvection_generators(d, q)
    elements = _bfs_closure(mat_identity(d), gens, mul, cap)
    if len(elements) != order:
        raise RuntimeError(
            f"enumeration produced {len(elements)} elements, closed form says {order}"
        )
    return GroupTable(
        elements,
        mul,
        lambda a: mat_inv(a, d, q),
        label=f"SL{d}(Z/{q})",
        meta={"family": "SL", "d": d, "q": q},
        generators=gens,
    )


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    return GroupTable(
        range(n),
        lambda a, b: (a + b) % n,
        lambda a: (-a) % n,
        label=f"Z/{n}",
        meta={"family": "Z", "n": n},
        generators=[1 % n],
    )


def symmetric_group(n: int) -> GroupTable:
    """S_n on tuples; intended for the small test groups S_3, S_4."""
    if not 1 <= n <= 6:
        raise ValueError("symmetric_group supports 1 <= n <= 6")
    identity = tuple(range(n))
    gens = []
    if n >= 2:
        gens.append((1, 0) + tuple(range(2, n)))  # transposition (0 1)
        gens.append(tuple(range(1, n)) + (0,))  # n-cycle
    mul = lambda a, b: tuple(a[b[i]] for i in range(n))

    def inv(a):
        out = [0] * n
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    elements = _bfs_closure(identity, gens, mul, cap=1000)
    return GroupTable(
        elements, mul, inv, label=f"S_{n}", meta={"family": "Sym", "n": n}, generators=gens
    )


def subgroup_closure(table: GroupTable, seed) -> tuple[set[int], bool]:
    """Subgroup generated by the seed indices; also reports generation of G.

    Seeds need not be symmetric: in a finite group closure under products
    already contains inverses.
    """
    members = list(seed.members if isinstance(seed, GenSet) else seed)
    if not members:
        raise ValueError("seed must be nonempty")
    seen = {0} | set(members)
    frontier = list(seen)
    while frontier:
        new = []
        for i in frontier:
            for s in members:
                j = table.multiply(i, s)
                if j not in seen:
                    seen.add(j)
                    new.append(j)
        frontier = new
    return seen, len(seen) == table.order


def quotient_map(fine: GroupTable, coarse: GroupTable) -> np.ndarray:
    """Entrywise reduction SL_d(Z/qZ) -> SL_d(Z/q'Z) for q' | q, as an index map."""
    if fine.meta.get("family") != "SL" or coarse.meta.get("family") != "SL":
        raise ValueError("quotient_map is defined for SL tables")
    d, q = fine.meta["d"], fine.meta["q"]
    dc, qc = coarse.meta["d"], coarse.meta["q"]
    if d != dc:
        raise ValueError("dimension mismatch")
    if q % qc != 0:
        raise InvalidModulusError(f"{qc} does not divide {q}")
    return np.array(
        [coarse.index[tuple(x % qc for x in g)] for g in fine.elements], dtype=np.int64
    )


def is_normal(table: GroupTable, indices) -> bool:
    sub = set(int(i) for i in indices)
    gens = table.generator_indices() or list(range(table.order))
    for g in gens:
        gi = table.invert(g)
        for n in sub:
            if table.multiply(table.multiply(g, n), gi) not in sub:
                return False
    return True


def subgroup_table(table: GroupTable, indices) -> tuple[GroupTable, list[int]]:
    """Re-index a subgroup as its own GroupTable; returns (table, embedding)."""
    idx = sorted(set(int(i) for i in indices))
    if 0 not in idx:
        raise ValueError("subgroup must contain the identity (index 0)")
    elements = [table.elements[i] for i in idx]
    sub = GroupTable(
        elements,
        table._mul,
        table._inv,
        label=f"{table.label}|sub{len(idx)}",
        meta={"family": "sub", "parent": table.label},
    )
    return sub, idx


def quotient_table(table: GroupTable, normal_indices) -> tuple[GroupTable, np.ndarray]:
    """Quotient G/N as a GroupTable of canonical coset representatives.

    Returns the quotient table and the index map g -> coset position.
    """
    nset = sorted(set(int(i) for i in normal_indices))
    if not is_normal(table, nset):
        raise ValueError("subgroup is not normal")
    canon = np.full(table.order, -1, dtype=np.int64)
    reps = []
    for x in range(table.order):
        if canon[x] >= 0:
            continue
        coset = sorted(table.multiply(x, n) for n in nset)
        rep = coset[0]
        reps.append(rep)
        for y in coset:
            canon[y] = rep
    reps.sort()  # identity coset (rep 0) first
    rep_pos = {r: i for i, r in enumerate(reps)}
    qmap = np.array([rep_pos[canon[x]] for x in range(table.order)], dtype=np.int64)

    mul = lambda a, b: int(canon[table.multiply(a, b)])
    inv = lambda a: int(canon[table.invert(a)])
    quot = GroupTable(
        reps, mul, inv, label=f"{table.label}/N{len(nset)}", meta={"family": "quot"}
    )
    return quot, qmap


# ---------------------------------------------------------------------------
# binary cache for SL tables


def save_table(table: GroupTable, path) -> None:
    if table.meta.get("family") != "SL":
        raise ValueError("only SL tables are cached")
    d, q = table.meta["d"], table.meta["q"]
    packed = np.array(table.elements, dtype=np.int64)
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<IIIQ", _CACHE_VERSION, d, q, table.order))
        fh.write(packed.tobytes())


def load_table(path) -> GroupTable:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _CACHE_MAGIC:
            raise ValueError("not a group table cache file")
        version, d, q, order = struct.unpack("<IIIQ", fh.read(20))
        if version != _CACHE_VERSION:
            raise ValueError(f"unsupported cache version {version}")
        raw = np.frombuffer(fh.read(), dtype=np.int64).reshape(order, d * d)
    elements = [tuple(int(x) for x in row) for row in raw]
    mul = lambda a, b: mat_mul(a, b, d, q)
    return GroupTable(
        elements,
        mul,
        lambda a: mat_inv(a, d, q),
        label=f"SL{d}(Z/{q})",
        meta={"family": "SL", "d": d, "q": q},
        generators=transvection_generators(d, q),
    )
