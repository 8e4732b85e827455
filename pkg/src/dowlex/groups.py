"""Finite groups as explicit Cayley tables with 0-based element indices.

Index 0 is always the identity; elements have no names beyond their index.
All tables are validated (closure, associativity, identity, inverses) at
construction time, which is affordable at the orders used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

MAX_SUBGROUP_ORDER = 64


class GroupTableError(ValueError):
    """Raised when a multiplication table violates a group axiom."""


@dataclass(frozen=True)
class GroupTable:
    """A finite group given by its multiplication table.

    mul[a][b] is the index of a*b.  identity is always index 0 and inv[a]
    is the index of the inverse of a.
    """

    label: str
    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...] = field(default=())
    identity: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise GroupTableError("group order must be positive")
        if len(self.mul) != self.order or any(len(row) != self.order for row in self.mul):
            raise GroupTableError("mul table must be order x order")
        for row in self.mul:
            for v in row:
                if not (0 <= v < self.order):
                    raise GroupTableError("mul table not closed: element index out of range")
        for x in range(self.order):
            if self.mul[0][x] != x or self.mul[x][0] != x:
                raise GroupTableError("index 0 is not a two-sided identity")
        # Full triple loop; fine for the desk-scale orders we support.
        for a in range(self.order):
            for b in range(self.order):
                ab = self.mul[a][b]
                for c in range(self.order):
                    if self.mul[ab][c] != self.mul[a][self.mul[b][c]]:
                        raise GroupTableError("mul table is not associative")
        inv = self.inv
        if not inv:
            inv = tuple(_find_inverse(self.mul, x) for x in range(self.order))
            object.__setattr__(self, "inv", inv)
        if len(inv) != self.order:
            raise GroupTableError("inv table has wrong length")
        for x in range(self.order):
            if self.mul[x][inv[x]] != 0 or self.mul[inv[x]][x] != 0:
                raise GroupTableError("inv table does not give two-sided inverses")

    def op(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def elements(self) -> range:
        return range(self.order)

    def power(self, x: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv[x], -k)
        acc = 0
        for _ in range(k):
            acc = self.mul[acc][x]
        return acc

    def is_abelian(self) -> bool:
        return all(
            self.mul[a][b] == self.mul[b][a]
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def element_order_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(element_order(self, x) for x in self.elements()))

    def __repr__(self):
        return f"GroupTable({self.label}, order={self.order})"


def _find_inverse(mul, x):
    for y in range(len(mul)):
        if mul[x][y] == 0 and mul[y][x] == 0:
            return y
    raise GroupTableError(f"element {x} has no two-sided inverse")


def make_cyclic(k: int) -> GroupTable:
    """Z_k with element i representing the i-th power of the generator."""
    if k < 1:
        raise GroupTableError("cyclic group order must be at least 1")
    mul = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
    return GroupTable(label=f"Z{k}", order=k, mul=mul)


def direct_product(a: GroupTable, b: GroupTable) -> GroupTable:
    """Componentwise product; element (x, y) is packed as x*|b| + y."""
    n = a.order * b.order

    def pack(x, y):
        return x * b.order + y

    mul = [[0] * n for _ in range(n)]
    for x1 in a.elements():
        for y1 in b.elements():
            for x2 in a.elements():
                for y2 in b.elements():
                    mul[pack(x1, y1)][pack(x2, y2)] = pack(a.mul[x1][x2], b.mul[y1][y2])
    return GroupTable(
        label=f"{a.label}x{b.label}",
        order=n,
        mul=tuple(tuple(row) for row in mul),
    )


def from_table(data: dict) -> GroupTable:
    """Build a group from the JSON import format {label, order, mul}.

    mul may be given row-major flat or as a nested list.  Validation errors
    name the violated axiom (via GroupTableError).
    """
    label = data.get("label", "custom")
    order = data["order"]
    raw = data["mul"]
    if raw and isinstance(raw[0], list):
        rows = [tuple(r) for r in raw]
    else:
        if len(raw) != order * order:
            raise GroupTableError("flat mul table must have order^2 entries")
        rows = [tuple(raw[i * order : (i + 1) * order]) for i in range(order)]
    return GroupTable(label=label, order=order, mul=tuple(rows))


def element_order(g: GroupTable, x: int) -> int:
    """Least k >= 1 with x^k = identity."""
    acc = x
    k = 1
    while acc != 0:
        acc = g.mul[acc][x]
        k += 1
    return k


def is_good_pair(g: GroupTable, x: int, y: int) -> bool:
    """True iff x, y are distinct non-identity elements with x^2 != y and y^2 != x."""
    if x == y or x == 0 or y == 0:
        return False
    return g.mul[x][x] != y and g.mul[y][y] != x


def find_good_pair(g: GroupTable) -> Optional[tuple[int, int]]:
    """Lowest-index good pair under (x, y) lexicographic scan, or None."""
    for x in range(1, g.order):
        for y in range(x + 1, g.order):
            if is_good_pair(g, x, y):
                return (x, y)
    return None


def enumerate_subgroups(g: GroupTable) -> list[tuple[int, ...]]:
    """All subgroups as sorted element tuples, ordered by (size, elements)."""
    if g.order > MAX_SUBGROUP_ORDER:
        raise GroupTableError(f"subgroup enumeration limited to order <= {MAX_SUBGROUP_ORDER}")
    found = {_closure(g, frozenset([0]))}
    frontier = list(found)
    while frontier:
        new = []
        for sub in frontier:
            for x in g.elements():
                if x in sub:
                    continue
                ext = _closure(g, sub | {x})
                if ext not in found:
                    found.add(ext)
                    new.append(ext)
        frontier = new
    return sorted((tuple(sorted(s)) for s in found), key=lambda s: (len(s), s))


def _closure(g: GroupTable, seed: frozenset[int]) -> frozenset[int]:
    elems = set(seed)
    elems.add(0)
    changed = True
    while changed:
        changed = False
        for a in list(elems):
            if g.inv[a] not in elems:
                elems.add(g.inv[a])
                changed = True
            for b in list(elems):
                c = g.mul[a][b]
                if c not in elems:
                    elems.add(c)
                    changed = True
    return frozenset(elems)


def subgroup_table(g: GroupTable, elements: tuple[int, ...], label: Optional[str] = None) -> GroupTable:
    """The induced group on a subgroup's elements, reindexed with identity at 0.

    Elements are sorted, so index 0 is the identity of g and the mapping back
    to g is element i -> elements[i].
    """
    elems = tuple(sorted(elements))
    if elems[0] != 0:
        raise GroupTableError("subgroup must contain the identity")
    index = {e: i for i, e in enumerate(elems)}
    mul = []
    for a in elems:
        row = []
        for b in elems:
            c = g.mul[a][b]
            if c not in index:
                raise GroupTableError("subset is not closed under multiplication")
            row.append(index[c])
        mul.append(tuple(row))
    return GroupTable(
        label=label or f"{g.label}[{','.join(map(str, elems))}]",
        order=len(elems),
        mul=tuple(mul),
    )


_REGISTRY_CACHE: dict[str, GroupTable] = {}


def parse_group(label: str) -> GroupTable:
    """Resolve labels like 'Z4' or 'Z2xZ2' to group tables."""
    key = label.strip()
    if key in _REGISTRY_CACHE:
        return _REGISTRY_CACHE[key]
    parts = key.split("x")
    factors = []
    for part in parts:
        if not part.startswith("Z") or not part[1:].isdigit():
            raise GroupTableError(f"unknown group label: {label!r}")
        factors.append(make_cyclic(int(part[1:])))
    table = factors[0]
    for f in factors[1:]:
        table = direct_product(table, f)
    _REGISTRY_CACHE[key] = table
    return table
