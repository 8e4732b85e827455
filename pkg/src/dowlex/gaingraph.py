"""Oriented gain graphs with joint loops, switching, and cycle balance.

Link edges are stored canonically oriented from the smaller to the larger
vertex label; querying a gain against the stored orientation inverts it.
Joint loops carry no gain and act as unbalanced one-edge cycles everywhere
downstream.  Graphs are immutable; every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .groups import GroupTable, parse_group


class GainGraphError(ValueError):
    pass


@dataclass(frozen=True)
class LinkEdge:
    edge_id: int
    tail: int  # always the smaller vertex label
    head: int
    gain: int

    def name(self) -> str:
        return f"g{self.gain}_{self.tail}_{self.head}"


@dataclass(frozen=True)
class JointLoop:
    edge_id: int
    vertex: int

    def name(self) -> str:
        return f"b{self.vertex}"


@dataclass(frozen=True)
class GainGraph:
    group: GroupTable
    vertices: tuple[int, ...]
    links: tuple[LinkEdge, ...]
    joints: tuple[JointLoop, ...]
    _by_id: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise GainGraphError("duplicate vertex labels")
        seen_ids = set()
        for e in self.links:
            if e.tail >= e.head:
                raise GainGraphError(f"link {e.edge_id} must satisfy tail < head")
            if e.tail not in vset or e.head not in vset:
                raise GainGraphError(f"link {e.edge_id} uses unknown vertex")
            if not (0 <= e.gain < self.group.order):
                raise GainGraphError(f"link {e.edge_id} has invalid gain {e.gain}")
            if e.edge_id in seen_ids:
                raise GainGraphError(f"duplicate edge id {e.edge_id}")
            seen_ids.add(e.edge_id)
        loop_vertices = set()
        for j in self.joints:
            if j.vertex not in vset:
                raise GainGraphError(f"joint {j.edge_id} at unknown vertex")
            if j.vertex in loop_vertices:
                raise GainGraphError(f"vertex {j.vertex} has more than one joint loop")
            loop_vertices.add(j.vertex)
            if j.edge_id in seen_ids:
                raise GainGraphError(f"duplicate edge id {j.edge_id}")
            seen_ids.add(j.edge_id)
        object.__setattr__(
            self, "_by_id", {e.edge_id: e for e in self.links} | {j.edge_id: j for j in self.joints}
        )

    # -- basic accessors ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(e.edge_id for e in self.links) + tuple(j.edge_id for j in self.joints)

    def edge(self, edge_id: int):
        return self._by_id[edge_id]

    def edge_name(self, edge_id: int) -> str:
        return self._by_id[edge_id].name()

    def n_edges(self) -> int:
        return len(self.links) + len(self.joints)

    def has_joint_at(self, v: int) -> bool:
        return any(j.vertex == v for j in self.joints)

    def joint_at(self, v: int) -> Optional[JointLoop]:
        for j in self.joints:
            if j.vertex == v:
                return j
        return None

    def links_between(self, i: int, j: int) -> list[LinkEdge]:
        a, b = min(i, j), max(i, j)
        return [e for e in self.links if e.tail == a and e.head == b]

    def find_link(self, i: int, j: int, gain: int) -> Optional[LinkEdge]:
        """The stored link with the given gain read in the i->j direction."""
        a, b = min(i, j), max(i, j)
        stored = gain if i < j else self.group.inverse(gain)
        for e in self.links:
            if e.tail == a and e.head == b and e.gain == stored:
                return e
        return None

    def multiplicity_set(self, i: int, j: int) -> set[int]:
        """Gains present between i and j, normalized to the i<j orientation."""
        if i == j:
            raise GainGraphError("multiplicity_set needs two distinct vertices")
        a, b = min(i, j), max(i, j)
        return {e.gain for e in self.links if e.tail == a and e.head == b}

    # -- switching ---------------------------------------------------------

    def switch_at(self, v: int, gamma: int) -> "GainGraph":
        """Regauge at v: head-at-v gains become gain*gamma, tail-at-v gains gamma^-1*gain."""
        if v not in set(self.vertices):
            raise GainGraphError(f"unknown vertex {v}")
        g = self.group
        new_links = []
        for e in self.links:
            gain = e.gain
            if e.head == v:
                gain = g.op(gain, gamma)
            elif e.tail == v:
                gain = g.op(g.inverse(gamma), gain)
            new_links.append(LinkEdge(e.edge_id, e.tail, e.head, gain))
        return GainGraph(self.group, self.vertices, tuple(new_links), self.joints)

    def switch(self, potentials: dict[int, int]) -> "GainGraph":
        """Switch at every vertex v by potentials.get(v, identity)."""
        g = self.group
        new_links = []
        for e in self.links:
            st = potentials.get(e.tail, 0)
            sh = potentials.get(e.head, 0)
            gain = g.op(g.op(g.inverse(st), e.gain), sh)
            new_links.append(LinkEdge(e.edge_id, e.tail, e.head, gain))
        return GainGraph(self.group, self.vertices, tuple(new_links), self.joints)

    # -- deletion / restriction ---------------------------------------------

    def delete_vertices(self, remove: Iterable[int]) -> "GainGraph":
        rset = set(remove)
        unknown = rset - set(self.vertices)
        if unknown:
            raise GainGraphError(f"unknown vertices {sorted(unknown)}")
        verts = tuple(v for v in self.vertices if v not in rset)
        links = tuple(e for e in self.links if e.tail not in rset and e.head not in rset)
        joints = tuple(j for j in self.joints if j.vertex not in rset)
        return GainGraph(self.group, verts, links, joints)

    def subgraph(self, edge_ids: Iterable[int]) -> "GainGraph":
        keep = set(edge_ids)
        unknown = keep - set(self._by_id)
        if unknown:
            raise GainGraphError(f"unknown edge ids {sorted(unknown)}")
        links = tuple(e for e in self.links if e.edge_id in keep)
        joints = tuple(j for j in self.joints if j.edge_id in keep)
        return GainGraph(self.group, self.vertices, links, joints)

    def spanned_subgraph(self, edge_ids: Iterable[int]) -> "GainGraph":
        """Like subgraph, but dropping vertices untouched by the kept edges."""
        sub = self.subgraph(edge_ids)
        touched = set()
        for e in sub.links:
            touched.add(e.tail)
            touched.add(e.head)
        for j in sub.joints:
            touched.add(j.vertex)
        verts = tuple(v for v in sub.vertices if v in touched)
        return GainGraph(self.group, verts, sub.links, sub.joints)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "group_label": self.group.label,
            "n": self.n_vertices,
            "links": [[e.gain, e.tail, e.head] for e in self.links],
            "joints": [j.vertex for j in self.joints],
        }

    @staticmethod
    def from_json(data: dict, group: Optional[GroupTable] = None) -> "GainGraph":
        g = group if group is not None else parse_group(data["group_label"])
        n = data["n"]
        links = []
        for k, (x, i, j) in enumerate(data["links"]):
            a, b = (i, j) if i < j else (j, i)
            gain = x if i < j else g.inverse(x)
            links.append(LinkEdge(k, a, b, gain))
        joints = [JointLoop(len(links) + k, v) for k, v in enumerate(data["joints"])]
        return GainGraph(g, tuple(range(n)), tuple(links), tuple(joints))


@dataclass(frozen=True)
class WalkCycle:
    """A closed walk given as (edge_id, direction) steps; direction +1 follows
    the stored orientation.  No edge may repeat."""

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len({eid for eid, _ in self.steps}) != len(self.steps):
            raise GainGraphError("walk repeats an edge")
        for _, d in self.steps:
            if d not in (1, -1):
                raise GainGraphError("step direction must be +1 or -1")


def walk_vertices(g: GainGraph, c: WalkCycle) -> list[int]:
    """Vertex sequence visited by the walk; raises if incidences do not chain."""
    seq = []
    cur = None
    for eid, d in c.steps:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            u, v = e.vertex, e.vertex
        else:
            u, v = (e.tail, e.head) if d == 1 else (e.head, e.tail)
        if cur is None:
            seq.append(u)
        elif u != cur:
            raise GainGraphError(f"walk breaks at edge {eid}")
        cur = v
        seq.append(v)
    if seq and seq[0] != seq[-1]:
        raise GainGraphError("walk is not closed")
    return seq


def cycle_gain(g: GainGraph, c: WalkCycle) -> int:
    """Ordered gain product of a closed walk of link edges."""
    for eid, _ in c.steps:
        if isinstance(g.edge(eid), JointLoop):
            raise GainGraphError("joint loops carry no gain")
    walk_vertices(g, c)
    acc = 0
    for eid, d in c.steps:
        e = g.edge(eid)
        gain = e.gain if d == 1 else g.group.inverse(e.gain)
        acc = g.group.op(acc, gain)
    return acc


def is_balanced_cycle(g: GainGraph, c: WalkCycle) -> bool:
    """A cycle with >= 2 edges is balanced iff its gain is the identity.

    A walk through a joint loop is never balanced: joints behave as
    unbalanced one-edge cycles in the Dowling construction.
    """
    if any(isinstance(g.edge(eid), JointLoop) for eid, _ in c.steps):
        walk_vertices(g, c)
        return False
    if len(c.steps) < 2:
        raise GainGraphError("balance queries need at least two edges")
    return cycle_gain(g, c) == 0


def complete_gain_graph(n: int, g: GroupTable) -> GainGraph:
    """K_n over the group: every gain on every pair, plus a joint at each vertex.

    Element order: links by (pair-lex, gain index), then joints by vertex.
    """
    if n < 1:
        raise GainGraphError("need at least one vertex")
    links = []
    eid = 0
    for i in range(n):
        for j in range(i + 1, n):
            for x in g.elements():
                links.append(LinkEdge(eid, i, j, x))
                eid += 1
    joints = []
    for v in range(n):
        joints.append(JointLoop(eid, v))
        eid += 1
    return GainGraph(g, tuple(range(n)), tuple(links), tuple(joints))


def build_gain_graph(
    group: GroupTable,
    n: int,
    link_specs: Sequence[tuple[int, int, int]],
    loop_vertices: Sequence[int] = (),
) -> GainGraph:
    """Convenience builder from (i, j, gain) triples read in the i->j direction."""
    links = []
    for k, (i, j, x) in enumerate(link_specs):
        if i == j:
            raise GainGraphError("links need two distinct endpoints")
        a, b = (i, j) if i < j else (j, i)
        gain = x if i < j else group.inverse(x)
        links.append(LinkEdge(k, a, b, gain))
    joints = [JointLoop(len(links) + k, v) for k, v in enumerate(loop_vertices)]
    return GainGraph(group, tuple(range(n)), tuple(links), tuple(joints))
