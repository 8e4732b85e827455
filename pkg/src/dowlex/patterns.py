"""Switching-isomorphism, balanced copies, and clique realization catalogs.

Gain graphs realizing M(K_t) over the two-element group come in a fixed
catalog: the all-identity clique, the looped clique one size down, the
looped double-star, and (only at t=4) the loopless doubled triangle.
Detection of an M(K_t)-restriction in a two-element-group gain graph
reduces to finding a balanced copy of a catalog pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional

from .frame import BALANCED_CYCLE, LOOSE_HANDCUFF, TIGHT_HANDCUFF, UNBALANCED_THETA, FrameMatroid, classify_circuit
from .gaingraph import GainGraph, GainGraphError, JointLoop, build_gain_graph
from .groups import GroupTable, parse_group
from .matroids import MatroidError, UniformMatroid, are_isomorphic, clique_matroid, count_lines, count_triangles

MAX_SWITCH_ISO_VERTICES = 8
MAX_CANONICAL_VERTICES = 7
MAX_PATTERN_EDGES = 14
_FULL_CATALOG_VERIFICATION_T = 6


@dataclass(frozen=True)
class PatternEntry:
    name: str
    graph: GainGraph
    realizes: str  # matroid shorthand, e.g. "clique:4" or "line:3"


@dataclass(frozen=True)
class PatternCatalog:
    entries: tuple[PatternEntry, ...]

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def get(self, name: str) -> PatternEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def search_order(self) -> list[PatternEntry]:
        """Densest pattern first: fail fast on dense hosts."""
        return sorted(self.entries, key=lambda e: (-e.graph.n_edges(), e.name))


# -- switching isomorphism ------------------------------------------------------


def _vertex_profile(g: GainGraph, v: int):
    mults = sorted(len(g.multiplicity_set(v, w)) for w in g.vertices if w != v and g.multiplicity_set(v, w))
    return (g.has_joint_at(v), tuple(mults))


def is_switching_isomorphic(a: GainGraph, b: GainGraph) -> bool:
    """True iff some vertex bijection composed with switchings maps a onto b."""
    if a.n_vertices > MAX_SWITCH_ISO_VERTICES or b.n_vertices > MAX_SWITCH_ISO_VERTICES:
        raise GainGraphError(f"switching isomorphism limited to {MAX_SWITCH_ISO_VERTICES} vertices")
    if a.group.order != b.group.order or a.group.mul != b.group.mul:
        return False
    if a.n_vertices != b.n_vertices or len(a.links) != len(b.links) or len(a.joints) != len(b.joints):
        return False
    prof_a = {v: _vertex_profile(a, v) for v in a.vertices}
    prof_b = {v: _vertex_profile(b, v) for v in b.vertices}
    if sorted(prof_a.values()) != sorted(prof_b.values()):
        return False
    group = a.group
    abelian = group.is_abelian()

    order = sorted(a.vertices, key=lambda v: (sorted(prof_a.values()).count(prof_a[v]), v))
    mapping: dict[int, int] = {}
    sigma: dict[int, int] = {}
    used: set[int] = set()

    def edges_match(u: int) -> bool:
        mu = mapping[u]
        su = sigma[mu]
        for w, mw in mapping.items():
            if w == u:
                continue
            la = a.multiplicity_set(u, w)
            lb = b.multiplicity_set(mu, mw)
            if len(la) != len(lb):
                return False
            sw = sigma[mw]
            for x in la:
                x_dir = x if u < w else group.inverse(x)
                y_dir = group.op(group.op(su, x_dir), group.inverse(sw))
                y_canon = y_dir if mu < mw else group.inverse(y_dir)
                if y_canon not in lb:
                    return False
        return True

    def backtrack(k: int) -> bool:
        if k == len(order):
            return True
        u = order[k]
        for cand in b.vertices:
            if cand in used or prof_b[cand] != prof_a[u]:
                continue
            gammas = (0,) if (abelian and k == 0) else tuple(group.elements())
            for gamma in gammas:
                mapping[u] = cand
                sigma[cand] = gamma
                used.add(cand)
                if edges_match(u) and backtrack(k + 1):
                    return True
                used.discard(cand)
                del mapping[u]
                del sigma[cand]
        return False

    return backtrack(0)


def canonical_key(g: GainGraph):
    """A canonical form under vertex bijection x switching, for bucketing.

    Brute minimization over vertex orderings and potentials; use on small
    spanned graphs only.
    """
    verts = list(g.vertices)
    if len(verts) > MAX_CANONICAL_VERTICES:
        raise GainGraphError(f"canonical form limited to {MAX_CANONICAL_VERTICES} vertices")
    group = g.group
    loops = {j.vertex for j in g.joints}
    links = [(e.tail, e.head, e.gain) for e in g.links]
    best = None
    n = len(verts)
    sigma_space = _potential_space(group, n)
    for perm in permutations(range(n)):
        pos = {v: perm[i] for i, v in enumerate(verts)}
        base = []
        for t, h, x in links:
            a, b = pos[t], pos[h]
            if a < b:
                base.append((a, b, x, 1))
            else:
                base.append((b, a, x, -1))
        loop_key = tuple(sorted(pos[v] for v in loops))
        for sig in sigma_space:
            enc = []
            for a, b, x, direction in base:
                if direction == 1:
                    y = group.op(group.op(group.inverse(sig[a]), x), sig[b])
                else:
                    y = group.op(group.op(group.inverse(sig[a]), group.inverse(x)), sig[b])
                enc.append((a, b, y))
            key = (n, tuple(sorted(enc)), loop_key)
            if best is None or key < best:
                best = key
    return best if best is not None else (n, (), tuple(sorted(loops)))


def _potential_space(group: GroupTable, n: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    space = [()]
    for i in range(n):
        choices = (0,) if (i == 0 and group.is_abelian()) else tuple(group.elements())
        space = [s + (c,) for s in space for c in choices]
    return space


# -- balanced copies -------------------------------------------------------------


def has_balanced_copy(g: GainGraph, h: GainGraph) -> Optional[dict[int, int]]:
    """An edge map (pattern edge id -> host edge id) of a balanced h-copy, or None."""
    result = _balanced_copy_search(g, h, find_all=False)
    return result[0] if result else None


def balanced_copy_edge_sets(g: GainGraph, h: GainGraph) -> list[frozenset]:
    """Edge-id sets of all balanced h-copies in g, deduplicated and sorted."""
    found = _balanced_copy_search(g, h, find_all=True)
    out = {frozenset(m.values()) for m in found}
    return sorted(out, key=lambda s: tuple(sorted(s)))


def _balanced_copy_search(g: GainGraph, h: GainGraph, find_all: bool) -> list[dict[int, int]]:
    if h.n_edges() > MAX_PATTERN_EDGES:
        raise GainGraphError(f"pattern search limited to {MAX_PATTERN_EDGES} edges")
    if h.group.order != g.group.order or h.group.mul != g.group.mul:
        raise GainGraphError("pattern and host must share a group table")
    group = g.group
    abelian = group.is_abelian()

    hverts = _pattern_vertex_order(h)
    pat_loops = {j.vertex for j in h.joints}
    host_loops = {j.vertex: j.edge_id for j in g.joints}
    # pattern links indexed by the pair of order-positions they join
    links_at: dict[int, list] = {i: [] for i in range(len(hverts))}
    vpos = {v: i for i, v in enumerate(hverts)}
    for e in h.links:
        i, j = vpos[e.tail], vpos[e.head]
        links_at[max(i, j)].append(e)

    results: list[dict[int, int]] = []
    mapping: dict[int, int] = {}
    sigma: dict[int, int] = {}
    used: set[int] = set()
    edge_map: dict[int, int] = {}

    def place_edges(k: int) -> Optional[list[int]]:
        """Try to bind all pattern links whose later endpoint is hverts[k]."""
        bound = []
        for e in links_at[k]:
            a_host = mapping[e.tail]
            b_host = mapping[e.head]
            y = group.op(group.op(sigma[a_host], e.gain), group.inverse(sigma[b_host]))
            link = g.find_link(a_host, b_host, y)
            if link is None:
                for eid in bound:
                    del edge_map[eid]
                return None
            edge_map[e.edge_id] = link.edge_id
            bound.append(e.edge_id)
        return bound

    def backtrack(k: int) -> bool:
        if k == len(hverts):
            results.append(dict(edge_map))
            return not find_all
        u = hverts[k]
        needs_loop = u in pat_loops
        for cand in g.vertices:
            if cand in used:
                continue
            if needs_loop and cand not in host_loops:
                continue
            gammas = (0,) if (abelian and k == 0) else tuple(group.elements())
            for gamma in gammas:
                mapping[u] = cand
                sigma[cand] = gamma
                used.add(cand)
                if needs_loop:
                    edge_map[h.joint_at(u).edge_id] = host_loops[cand]
                bound = place_edges(k)
                if bound is not None:
                    if backtrack(k + 1):
                        return True
                    for eid in bound:
                        del edge_map[eid]
                if needs_loop:
                    del edge_map[h.joint_at(u).edge_id]
                used.discard(cand)
                del mapping[u]
                del sigma[cand]
        return False

    backtrack(0)
    return results


def _pattern_vertex_order(h: GainGraph) -> list[int]:
    """BFS order within components, highest-degree first, for early pruning."""
    degree = {v: 0 for v in h.vertices}
    adj: dict[int, set] = {v: set() for v in h.vertices}
    for e in h.links:
        degree[e.tail] += 1
        degree[e.head] += 1
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    for j in h.joints:
        degree[j.vertex] += 1
    order = []
    seen = set()
    for start in sorted(h.vertices, key=lambda v: (-degree[v], v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            queue.sort(key=lambda v: (-degree[v], v))
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


# -- the clique catalog over the two-element group --------------------------------


def _z2() -> GroupTable:
    return parse_group("Z2")


def pattern_clique(t: int, group: Optional[GroupTable] = None) -> GainGraph:
    """All-identity K_t."""
    group = group or _z2()
    return build_gain_graph(group, t, [(i, j, 0) for i in range(t) for j in range(i + 1, t)])


def pattern_looped_clique(s: int, group: Optional[GroupTable] = None) -> GainGraph:
    """Identity K_s with a joint loop at every vertex (realizes M(K_{s+1}))."""
    group = group or _z2()
    return build_gain_graph(
        group,
        s,
        [(i, j, 0) for i in range(s) for j in range(i + 1, s)],
        loop_vertices=range(s),
    )


def pattern_center_doubled(s: int) -> GainGraph:
    """Looped center with doubled edges to the rest, identity edges elsewhere."""
    group = _z2()
    links = []
    for v in range(1, s):
        links.append((0, v, 0))
        links.append((0, v, 1))
    for u in range(1, s):
        for v in range(u + 1, s):
            links.append((u, v, 0))
    return build_gain_graph(group, s, links, loop_vertices=[0])


def pattern_doubled_triangle() -> GainGraph:
    group = _z2()
    links = []
    for i in range(3):
        for j in range(i + 1, 3):
            links.append((i, j, 0))
            links.append((i, j, 1))
    return build_gain_graph(group, 3, links)


def _verify_realizes_clique(graph: GainGraph, t: int) -> None:
    fm = FrameMatroid(graph)
    target = clique_matroid(t)
    if fm.size() != target.size():
        raise MatroidError(f"pattern has {fm.size()} elements, M(K_{t}) has {target.size()}")
    if t <= _FULL_CATALOG_VERIFICATION_T:
        if not are_isomorphic(fm, target):
            raise MatroidError(f"pattern does not realize M(K_{t})")
    else:
        # invariant-level check at sizes where full isomorphism is out of budget
        if fm.full_rank() != t - 1 or count_triangles(fm) != t * (t - 1) * (t - 2) // 6:
            raise MatroidError(f"pattern fails M(K_{t}) invariants")
        if any(count_lines(fm, k) for k in range(4, fm.size() + 1)):
            raise MatroidError(f"pattern has a very long line, M(K_{t}) has none")


def clique_realizations_z2(t: int) -> PatternCatalog:
    """Gain graphs over the two-element group realizing M(K_t), t in [3, 8]."""
    if not (3 <= t <= 8):
        raise GainGraphError("clique catalog supports 3 <= t <= 8")
    entries = [
        PatternEntry(f"K_{t}", pattern_clique(t), f"clique:{t}"),
        PatternEntry(f"K_{t - 1}^1", pattern_looped_clique(t - 1), f"clique:{t}"),
        PatternEntry(f"H_{t - 1}", pattern_center_doubled(t - 1), f"clique:{t}"),
    ]
    if t == 4:
        entries.append(PatternEntry("C3^Z2", pattern_doubled_triangle(), "clique:4"))
    for entry in entries:
        _verify_realizes_clique(entry.graph, t)
    return PatternCatalog(tuple(entries))


def has_clique_restriction(g: GainGraph, t: int) -> bool:
    """Two-element-group hosts: some catalog pattern has a balanced copy in g."""
    if g.group.order != 2:
        raise GainGraphError("pattern-based clique detection needs the two-element group")
    catalog = clique_realizations_z2(t)
    for entry in catalog.search_order():
        if has_balanced_copy(g, entry.graph) is not None:
            return True
    return False


# -- triangle realizations over an arbitrary small group --------------------------


def triangle_realizations(group: GroupTable) -> PatternCatalog:
    """All <=3-vertex gain graphs over the group realizing U_{2,3}.

    Generated by enumerating 3-element subgraphs of the complete 3-vertex
    gain graph and deduplicating under switching isomorphism.
    """
    if group.order > 8:
        raise GainGraphError("triangle realization catalog limited to order <= 8")
    from .gaingraph import complete_gain_graph

    host = complete_gain_graph(3, group)
    reference = UniformMatroid(2, 3)
    fm = FrameMatroid(host)
    seen_keys = {}
    reps: list[GainGraph] = []
    for triple in combinations(host.edge_ids(), 3):
        sub = frozenset(triple)
        if fm.rank(sub) != 2:
            continue
        if any(fm.rank([a, b]) != 2 for a, b in combinations(triple, 2)):
            continue
        spanned = host.spanned_subgraph(sub)
        key = canonical_key(spanned)
        if key not in seen_keys:
            seen_keys[key] = spanned
            reps.append(spanned)
    entries = []
    shape_counts: dict[str, int] = {}
    named = []
    for rep in reps:
        fm_rep = FrameMatroid(rep)
        if not are_isomorphic(fm_rep, reference):
            raise MatroidError("triangle realization candidate is not a 3-point line")
        shape = classify_circuit(rep, rep.edge_ids())
        shape_counts[shape] = shape_counts.get(shape, 0) + 1
        named.append((shape, rep))
    idx: dict[str, int] = {}
    for shape, rep in named:
        if shape_counts[shape] == 1:
            name = shape
        else:
            idx[shape] = idx.get(shape, 0)
            name = f"{shape}-{idx[shape]}"
            idx[shape] += 1
        entries.append(PatternEntry(name, rep, "line:3"))
    entries.sort(key=lambda e: e.name)
    return PatternCatalog(tuple(entries))


TRIANGLE_SHAPES = (BALANCED_CYCLE, TIGHT_HANDCUFF, LOOSE_HANDCUFF, UNBALANCED_THETA)
