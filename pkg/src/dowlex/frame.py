"""Frame matroids of gain graphs and Dowling geometries.

The rank of an edge subset is computed per connected component: |V|-1 when
the component is balanced (no joint loop, no unbalanced cycle), |V| when it
is not.  The circuit catalog (balanced cycles, tight/loose handcuffs,
unbalanced thetas) is kept as a classification cross-check, not as the rank
definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .gaingraph import GainGraph, GainGraphError, JointLoop, LinkEdge, complete_gain_graph
from .groups import GroupTable, enumerate_subgroups, subgroup_table
from .matroids import MatroidError, RankOracle, Restriction, _verify_embedding, closure, has_submatroid, is_circuit, lines


class FrameMatroid(RankOracle):
    """Rank oracle on the edges of a gain graph."""

    def __init__(self, graph: GainGraph):
        self.graph = graph
        self.ground = graph.edge_ids()
        self._edges = {e.edge_id: e for e in graph.links}
        self._loops = {j.edge_id: j for j in graph.joints}
        self._group = graph.group

    def element_name(self, e: int) -> str:
        return self.graph.edge_name(e)

    def _rank(self, s):
        mul = self._group.mul
        inv = self._group.inv
        parent: dict[int, int] = {}
        rel: dict[int, int] = {}
        unbalanced: dict[int, bool] = {}

        def find(v):
            if parent[v] == v:
                return v, 0
            chain = []
            x = v
            while parent[x] != x:
                chain.append(x)
                x = parent[x]
            root = x
            phi = 0
            for y in reversed(chain):
                phi_parent = 0 if parent[y] == root else rel[parent[y]]
                phi = mul[phi_parent][rel[y]] if parent[y] != root else rel[y]
                # after compression parent is root, so phi == gain(root -> y)
                if parent[y] != root:
                    rel[y] = phi
                    parent[y] = root
            # recompute for the queried vertex (now a direct child of root)
            return root, rel[v] if parent[v] != v else 0

        def ensure(v):
            if v not in parent:
                parent[v] = v
                rel[v] = 0
                unbalanced[v] = False

        touched = set()
        for eid in sorted(s):
            link = self._edges.get(eid)
            if link is not None:
                a, b, y = link.tail, link.head, link.gain
                ensure(a)
                ensure(b)
                touched.add(a)
                touched.add(b)
                ra, pa = find(a)
                rb, pb = find(b)
                if ra == rb:
                    if mul[pa][y] != pb:
                        unbalanced[ra] = True
                else:
                    parent[rb] = ra
                    rel[rb] = mul[mul[pa][y]][inv[pb]]
                    unbalanced[ra] = unbalanced[ra] or unbalanced[rb]
            else:
                v = self._loops[eid].vertex
                ensure(v)
                touched.add(v)
                rv, _ = find(v)
                unbalanced[rv] = True
        balanced_components = 0
        roots = set()
        for v in touched:
            rv, _ = find(v)
            roots.add(rv)
        for r in roots:
            if not unbalanced[r]:
                balanced_components += 1
        return len(touched) - balanced_components

    def __repr__(self):
        return f"FrameMatroid({self.graph.n_vertices}v,{len(self.ground)}e)"


def frame_matroid(g: GainGraph) -> FrameMatroid:
    return FrameMatroid(g)


def is_balanced_subgraph(g: GainGraph, edge_ids: Iterable[int]) -> bool:
    """True iff the edge subset has no joint loop and no unbalanced cycle."""
    ids = frozenset(edge_ids)
    fm = FrameMatroid(g)
    touched = set()
    for eid in ids:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            return False
        touched.add(e.tail)
        touched.add(e.head)
    if not ids:
        return True
    # balanced iff rank equals |V| - #components, i.e. every component balanced
    comp = _component_count(g, ids)
    return fm.rank(ids) == len(touched) - comp


def _component_count(g: GainGraph, ids: frozenset) -> int:
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in ids:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            parent.setdefault(e.vertex, e.vertex)
        else:
            parent.setdefault(e.tail, e.tail)
            parent.setdefault(e.head, e.head)
            ra, rb = find(e.tail), find(e.head)
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in parent})


# -- circuit classification ---------------------------------------------------

BALANCED_CYCLE = "balanced-cycle"
TIGHT_HANDCUFF = "tight-handcuff"
LOOSE_HANDCUFF = "loose-handcuff"
UNBALANCED_THETA = "unbalanced-theta"
NOT_A_CIRCUIT = "not-a-circuit"


def classify_circuit(g: GainGraph, edge_ids: Iterable[int]) -> str:
    """Label a circuit by its shape in the circuit catalog."""
    ids = frozenset(edge_ids)
    if not ids:
        return NOT_A_CIRCUIT
    fm = FrameMatroid(g)
    if not is_circuit(fm, ids):
        return NOT_A_CIRCUIT
    loops = [eid for eid in ids if isinstance(g.edge(eid), JointLoop)]
    m = len(ids)
    touched = set()
    for eid in ids:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            touched.add(e.vertex)
        else:
            touched.add(e.tail)
            touched.add(e.head)
    if _component_count(g, ids) != 1:
        raise GainGraphError("a frame circuit cannot be disconnected")
    cyclomatic = m - len(touched) + 1
    if cyclomatic == 1:
        if loops:
            raise GainGraphError("one-cycle circuit with a loop is outside the catalog")
        return BALANCED_CYCLE
    if cyclomatic != 2:
        raise GainGraphError("circuit with cycle rank > 2 is outside the catalog")
    cycles = _simple_cycles_in_space(g, ids)
    if len(cycles) == 3:
        return UNBALANCED_THETA
    if len(cycles) == 2:
        c1, c2 = cycles
        if _cycle_vertices(g, c1) & _cycle_vertices(g, c2):
            return TIGHT_HANDCUFF
        return LOOSE_HANDCUFF
    raise GainGraphError("circuit shape outside the catalog")


def _cycle_vertices(g: GainGraph, ids: frozenset) -> set:
    out = set()
    for eid in ids:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            out.add(e.vertex)
        else:
            out.add(e.tail)
            out.add(e.head)
    return out


def _is_simple_cycle(g: GainGraph, ids: frozenset) -> bool:
    if not ids:
        return False
    deg: dict[int, int] = {}
    for eid in ids:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            deg[e.vertex] = deg.get(e.vertex, 0) + 2
        else:
            deg[e.tail] = deg.get(e.tail, 0) + 1
            deg[e.head] = deg.get(e.head, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    return _component_count(g, ids) == 1


def _simple_cycles_in_space(g: GainGraph, ids: frozenset) -> list[frozenset]:
    """The simple cycles among the three nonzero members of a rank-2 cycle space."""
    # spanning forest: fundamental cycle per non-tree edge (loops are non-tree)
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree: list[int] = []
    extra: list[int] = []
    for eid in sorted(ids):
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            parent.setdefault(e.vertex, e.vertex)
            extra.append(eid)
            continue
        parent.setdefault(e.tail, e.tail)
        parent.setdefault(e.head, e.head)
        ra, rb = find(e.tail), find(e.head)
        if ra == rb:
            extra.append(eid)
        else:
            parent[ra] = rb
            tree.append(eid)
    if len(extra) != 2:
        raise GainGraphError("expected cycle rank exactly 2")

    def fundamental(eid: int) -> frozenset:
        e = g.edge(eid)
        if isinstance(e, JointLoop):
            return frozenset([eid])
        path = _tree_path(g, tree, e.tail, e.head)
        return frozenset(path) | {eid}

    f1 = fundamental(extra[0])
    f2 = fundamental(extra[1])
    f3 = f1 ^ f2
    return [c for c in (f1, f2, f3) if c and _is_simple_cycle(g, c)]


def _tree_path(g: GainGraph, tree_ids: list[int], a: int, b: int) -> list[int]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for eid in tree_ids:
        e = g.edge(eid)
        adj.setdefault(e.tail, []).append((e.head, eid))
        adj.setdefault(e.head, []).append((e.tail, eid))
    prev: dict[int, tuple[int, int]] = {}
    stack = [a]
    seen = {a}
    while stack:
        v = stack.pop()
        if v == b:
            break
        for w, eid in adj.get(v, []):
            if w not in seen:
                seen.add(w)
                prev[w] = (v, eid)
                stack.append(w)
    if b not in seen:
        raise GainGraphError("tree path endpoints in different components")
    path = []
    cur = b
    while cur != a:
        v, eid = prev[cur]
        path.append(eid)
        cur = v
    return path


# -- Dowling geometries --------------------------------------------------------


@dataclass(frozen=True)
class DowlingGeometry:
    group: GroupTable
    n: int
    graph: GainGraph
    matroid: FrameMatroid
    joint_ids: tuple[int, ...]

    def link_id(self, i: int, j: int, gain: int) -> int:
        e = self.graph.find_link(i, j, gain)
        if e is None:
            raise GainGraphError(f"no link ({i},{j}) with gain {gain}")
        return e.edge_id

    def joint_id(self, v: int) -> int:
        return self.joint_ids[v]

    def size(self) -> int:
        return self.matroid.size()


def dowling(n: int, g: GroupTable) -> DowlingGeometry:
    """Q_n over the group: frame matroid of the complete gain graph."""
    graph = complete_gain_graph(n, g)
    fm = FrameMatroid(graph)
    joints = tuple(j.edge_id for j in graph.joints)
    expected = g.order * (n * (n - 1) // 2) + n
    if fm.size() != expected:
        raise MatroidError("Dowling geometry has unexpected size")
    return DowlingGeometry(group=g, n=n, graph=graph, matroid=fm, joint_ids=joints)


def very_long_lines(d: DowlingGeometry) -> list[frozenset]:
    """The C(n,2) joint-pair closures; each has |group|+2 elements."""
    if d.group.order < 2:
        raise MatroidError("the trivial group has no very long lines")
    out = []
    for i in range(d.n):
        for j in range(i + 1, d.n):
            ids = {d.joint_id(i), d.joint_id(j)}
            ids.update(d.link_id(i, j, x) for x in d.group.elements())
            out.append(frozenset(ids))
    return out


def joints_from_matroid(m: RankOracle) -> frozenset:
    """Elements on at least two very long lines (rank-2 flats of size >= 4)."""
    long_flats = [fl for fl in lines(m) if len(fl) >= 4]
    counts: dict[int, int] = {}
    for fl in long_flats:
        for e in fl:
            counts[e] = counts.get(e, 0) + 1
    return frozenset(e for e, c in counts.items() if c >= 2)


# -- subgeometry copies and joint-anchored search -------------------------------


def _group_isomorphism(a: GroupTable, b: GroupTable) -> Optional[dict[int, int]]:
    """A multiplication-preserving bijection a -> b, or None (desk-scale search)."""
    if a.order != b.order:
        return None
    if a.element_order_multiset() != b.element_order_multiset():
        return None
    from .groups import element_order

    orders_a = [element_order(a, x) for x in a.elements()]
    orders_b = [element_order(b, x) for x in b.elements()]
    mapping = {0: 0}
    used = {0}

    def backtrack(k):
        if k == a.order:
            return True
        for cand in b.elements():
            if cand in used or orders_b[cand] != orders_a[k]:
                continue
            mapping[k] = cand
            ok = True
            for x in list(mapping):
                for y in list(mapping):
                    xy = a.mul[x][y]
                    if xy in mapping and b.mul[mapping[x]][mapping[y]] != mapping[xy]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                used.add(cand)
                if backtrack(k + 1):
                    return True
                used.discard(cand)
            del mapping[k]
            mapping[0] = 0
        return False

    if backtrack(1):
        return dict(mapping)
    return None


def matching_subgroups(g: GroupTable, sub: GroupTable) -> list[tuple[int, ...]]:
    """Subgroups of g isomorphic to sub (by element-order multiset + iso search)."""
    out = []
    for elems in enumerate_subgroups(g):
        if len(elems) != sub.order:
            continue
        table = subgroup_table(g, elems)
        if _group_isomorphism(sub, table) is not None:
            out.append(elems)
    return out


def _cosets(g: GroupTable, sub_elems: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Left cosets of the subgroup, each sorted, ordered by minimum element."""
    sub = set(sub_elems)
    seen = set()
    out = []
    for a in g.elements():
        coset = tuple(sorted(g.mul[a][s] for s in sub))
        if coset not in seen:
            seen.add(coset)
            out.append(coset)
    out.sort(key=lambda c: c[0])
    return out


def subgeometry_copies(d: DowlingGeometry, t: int, sub: GroupTable) -> list[frozenset]:
    """All element sets of Q_t(sub)-restrictions of the geometry.

    Joint-anchored: every copy uses t host joints and, on each of their
    pairwise lines, a full coset of a subgroup isomorphic to sub.  Complete
    for nontrivial sub and t >= 3 because embedded joints land on host
    joints.  Requires an abelian host group (all groups used here are).
    """
    if t < 3:
        raise MatroidError("subgeometry copies need t >= 3")
    if sub.order < 2:
        raise MatroidError("subgeometry copies need a nontrivial subgroup")
    if t > d.n:
        return []
    if not d.group.is_abelian():
        raise MatroidError("joint-anchored enumeration implemented for abelian groups only")
    g = d.group
    copies = set()
    for sub_elems in matching_subgroups(g, sub):
        cosets = _cosets(g, sub_elems)
        reps = [c[0] for c in cosets]
        for verts in combinations(range(d.n), t):
            # sigma: coset representative per vertex, first fixed to the subgroup
            def assign(idx, sigma):
                if idx == t:
                    ids = set(d.joint_id(v) for v in verts)
                    for a in range(t):
                        for b in range(a + 1, t):
                            va, vb = verts[a], verts[b]
                            rep = g.mul[sigma[a]][g.inverse(sigma[b])]
                            for s in sub_elems:
                                ids.add(d.link_id(va, vb, g.mul[rep][s]))
                    copies.add(frozenset(ids))
                    return
                for rep in reps:
                    assign(idx + 1, sigma + [rep])

            assign(1, [0])
    return sorted(copies, key=lambda c: tuple(sorted(c)))


def find_subgeometry(
    d: DowlingGeometry,
    kept: Iterable[int],
    t: int,
    sub: GroupTable,
) -> Optional[dict[int, int]]:
    """An embedding of Q_t(sub) into the geometry restricted to `kept`, or None.

    The search is joint-anchored; the returned map is cross-checked by rank
    agreement between the reference geometry and the host restriction.
    """
    kept_set = frozenset(kept)
    unknown = kept_set - set(d.matroid.ground)
    if unknown:
        raise MatroidError(f"kept elements outside the geometry: {sorted(unknown)}")
    if sub.order < 2:
        raise MatroidError("the lemma regime needs a nontrivial subgroup")
    if not d.group.is_abelian():
        reference = dowling(t, sub)
        return has_submatroid(Restriction(d.matroid, kept_set), reference.matroid)
    for copy in subgeometry_copies(d, t, sub):
        if copy <= kept_set:
            return _embedding_for_copy(d, copy, t, sub)
    return None


def _embedding_for_copy(d: DowlingGeometry, copy: frozenset, t: int, sub: GroupTable) -> dict[int, int]:
    reference = dowling(t, sub)
    mapping = has_submatroid(Restriction(d.matroid, copy), reference.matroid)
    if mapping is None:
        raise MatroidError("anchored copy failed the rank cross-check")
    if not _verify_embedding(d.matroid, reference.matroid, mapping, full=(reference.matroid.size() <= 14)):
        raise MatroidError("anchored copy failed the rank cross-check")
    return mapping
