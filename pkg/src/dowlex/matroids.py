"""Rank-oracle matroids: uniform, graphic, direct sums, restrictions.

Every matroid here exposes a ground tuple of integer element ids plus a
rank function on id subsets; nothing else is axiomatized.  Submatroid
embedding and isomorphism are backtracking searches over the rank oracle,
with deterministic tie-breaking by ascending element id.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence


class MatroidError(ValueError):
    pass


MAX_EMBED_PATTERN = 12
MAX_ISO_SIZE = 26


class RankOracle:
    """Base class: subclasses set self.ground and implement _rank(frozenset)."""

    ground: tuple[int, ...]

    def rank(self, subset: Iterable[int]) -> int:
        s = frozenset(subset)
        extra = s - self._ground_set()
        if extra:
            raise MatroidError(f"elements not in ground set: {sorted(extra)}")
        return self._rank(s)

    def _rank(self, s: frozenset) -> int:
        raise NotImplementedError

    def _ground_set(self) -> frozenset:
        cached = getattr(self, "_ground_frozen", None)
        if cached is None:
            cached = frozenset(self.ground)
            self._ground_frozen = cached
        return cached

    def size(self) -> int:
        return len(self.ground)

    def full_rank(self) -> int:
        return self.rank(self.ground)

    def element_name(self, e: int) -> str:
        return f"e{e}"


class UniformMatroid(RankOracle):
    def __init__(self, r: int, n: int):
        if not (0 <= r <= n):
            raise MatroidError("uniform matroid needs 0 <= r <= n")
        self.r = r
        self.ground = tuple(range(n))

    def _rank(self, s):
        return min(self.r, len(s))

    def __repr__(self):
        return f"U({self.r},{len(self.ground)})"


class GraphicMatroid(RankOracle):
    """Cycle matroid of a multigraph; ground ids index the edge list."""

    def __init__(self, n_vertices: int, edges: Sequence[tuple[int, int]]):
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise MatroidError("edge endpoint out of range")
        self.n_vertices = n_vertices
        self.edges = tuple((min(u, v), max(u, v)) for u, v in edges)
        self.ground = tuple(range(len(self.edges)))

    def _rank(self, s):
        parent = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        r = 0
        for e in s:
            u, v = self.edges[e]
            if u == v:
                parent.setdefault(u, u)
                continue
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                r += 1
        return r

    def __repr__(self):
        return f"GraphicMatroid({self.n_vertices}v,{len(self.edges)}e)"


def complete_graph_edges(t: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(t) for j in range(i + 1, t)]


def clique_matroid(t: int) -> GraphicMatroid:
    """M(K_t)."""
    return GraphicMatroid(t, complete_graph_edges(t))


class DirectSum(RankOracle):
    """Components relabeled onto consecutive integer blocks."""

    def __init__(self, components: Sequence[RankOracle]):
        self.components = tuple(components)
        self.offsets = []
        total = 0
        for c in self.components:
            self.offsets.append(total)
            total += c.size()
        self.ground = tuple(range(total))

    def _rank(self, s):
        r = 0
        for comp, off in zip(self.components, self.offsets):
            local = [comp.ground[e - off] for e in s if off <= e < off + comp.size()]
            if local:
                r += comp.rank(local)
        return r

    def __repr__(self):
        return " + ".join(repr(c) for c in self.components)


class Restriction(RankOracle):
    def __init__(self, parent: RankOracle, kept: Iterable[int]):
        self.parent = parent
        self.ground = tuple(sorted(set(kept)))
        missing = set(self.ground) - set(parent.ground)
        if missing:
            raise MatroidError(f"restriction to elements outside ground: {sorted(missing)}")

    def _rank(self, s):
        return self.parent.rank(s)

    def element_name(self, e):
        return self.parent.element_name(e)

    def __repr__(self):
        return f"{self.parent!r}|{len(self.ground)}"


class VectorOracle(RankOracle):
    """Linear matroid over F_p given by explicit coordinate vectors."""

    def __init__(self, vectors: Sequence[tuple[int, ...]], p: int):
        self.vectors = tuple(tuple(v % p for v in vec) for vec in vectors)
        self.p = p
        self.ground = tuple(range(len(vectors)))

    def _rank(self, s):
        p = self.p
        rows = [list(self.vectors[e]) for e in sorted(s)]
        rank = 0
        cols = len(rows[0]) if rows else 0
        pivot_row = 0
        for col in range(cols):
            pivot = None
            for i in range(pivot_row, len(rows)):
                if rows[i][col] % p:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
            inv = pow(rows[pivot_row][col], p - 2, p)
            for i in range(pivot_row + 1, len(rows)):
                factor = (rows[i][col] * inv) % p
                if factor:
                    rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[pivot_row])]
            pivot_row += 1
            rank += 1
            if pivot_row == len(rows):
                break
        return rank


# -- derived predicates ------------------------------------------------------


def is_independent(m: RankOracle, s: Iterable[int]) -> bool:
    s = frozenset(s)
    return m.rank(s) == len(s)


def is_circuit(m: RankOracle, s: Iterable[int]) -> bool:
    """Dependent with every proper subset independent."""
    s = frozenset(s)
    if not s:
        raise MatroidError("the empty set is not a candidate circuit")
    if m.rank(s) >= len(s):
        return False
    return all(m.rank(s - {e}) == len(s) - 1 for e in s)


def closure(m: RankOracle, s: Iterable[int]) -> frozenset:
    s = frozenset(s)
    r = m.rank(s)
    return frozenset(e for e in m.ground if e in s or m.rank(s | {e}) == r)


def lines(m: RankOracle) -> list[frozenset]:
    """All rank-2 flats, each returned once, sorted for determinism."""
    cached = getattr(m, "_lines_cache", None)
    if cached is not None:
        return cached
    seen = set()
    out = []
    ground = m.ground
    for i, a in enumerate(ground):
        if m.rank([a]) == 0:
            continue
        for b in ground[i + 1 :]:
            if m.rank([a, b]) != 2:
                continue
            fl = closure(m, [a, b])
            if fl not in seen:
                seen.add(fl)
                out.append(fl)
    out.sort(key=lambda f: tuple(sorted(f)))
    m._lines_cache = out
    return out


def count_lines(m: RankOracle, length: int) -> int:
    """Number of rank-2 flats of exactly the given size."""
    return sum(1 for fl in lines(m) if len(fl) == length)


def count_triangles(m: RankOracle) -> int:
    """U_{2,3}-restrictions, i.e. sum over rank-2 flats of C(size, 3)."""
    total = 0
    for fl in lines(m):
        k = len(fl)
        total += k * (k - 1) * (k - 2) // 6
    return total


def line_profile(m: RankOracle) -> dict[int, tuple[int, ...]]:
    """Per element: sorted multiset of sizes of long lines (>= 3) through it."""
    prof = {e: [] for e in m.ground}
    for fl in lines(m):
        if len(fl) < 3:
            continue
        for e in fl:
            prof[e].append(len(fl))
    return {e: tuple(sorted(v)) for e, v in prof.items()}


# -- embedding and isomorphism search -----------------------------------------


def _verify_embedding(m: RankOracle, n: RankOracle, mapping: dict[int, int], full: bool) -> bool:
    """Check rank_M(psi(S)) == rank_N(S).

    full=True checks all 2^|n| subsets (used for has_submatroid, |n| <= 12).
    Otherwise subsets of size <= rank(N)+1 are checked, which determines the
    rank function everywhere.
    """
    nground = n.ground
    if full:
        subsets = []
        for k in range(len(nground) + 1):
            subsets.extend(combinations(nground, k))
    else:
        rmax = min(n.full_rank() + 1, len(nground))
        subsets = []
        for k in range(rmax + 1):
            subsets.extend(combinations(nground, k))
    for sub in subsets:
        if m.rank([mapping[e] for e in sub]) != n.rank(sub):
            return False
    return True


def _embedding_search(
    m: RankOracle,
    n: RankOracle,
    bijective: bool,
    candidate_filter=None,
) -> Optional[dict[int, int]]:
    """Backtracking injection of n into m preserving rank on mapped prefixes.

    Elements of n are mapped in ground order; ties in host candidates break by
    ascending id, so the returned embedding is deterministic (lexicographically
    least over the search order).
    """
    nelems = list(n.ground)
    melems = list(m.ground)
    r_n = n.full_rank()
    check_cap = r_n + 1

    nrank = lru_cache(maxsize=None)(lambda fs: n.rank(fs))
    mrank = lru_cache(maxsize=None)(lambda fs: m.rank(fs))

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(k: int) -> bool:
        new = nelems[k]
        prefix = nelems[:k]
        for size in range(0, min(k, check_cap - 1) + 1):
            for sub in combinations(prefix, size):
                nsub = sub + (new,)
                if len(nsub) > check_cap:
                    continue
                msub = frozenset(mapping[e] for e in nsub)
                if mrank(msub) != nrank(frozenset(nsub)):
                    return False
        return True

    def backtrack(k: int) -> bool:
        if k == len(nelems):
            return True
        for cand in melems:
            if cand in used:
                continue
            if candidate_filter is not None and not candidate_filter(nelems[k], cand):
                continue
            mapping[nelems[k]] = cand
            used.add(cand)
            if consistent(k) and backtrack(k + 1):
                return True
            used.discard(cand)
            del mapping[nelems[k]]
        return False

    if bijective and len(melems) != len(nelems):
        return None
    if len(nelems) > len(melems):
        return None
    if backtrack(0):
        return dict(mapping)
    return None


def has_submatroid(m: RankOracle, n: RankOracle) -> Optional[dict[int, int]]:
    """An embedding of n into m (element map), or None.

    The returned map is re-verified for rank agreement on every subset of
    E(n) before being handed back.
    """
    if n.size() > MAX_EMBED_PATTERN:
        raise MatroidError(f"embedding search limited to patterns of size <= {MAX_EMBED_PATTERN}")
    if n.size() > m.size():
        return None
    found = _embedding_search(m, n, bijective=False)
    if found is None:
        return None
    if not _verify_embedding(m, n, found, full=True):
        raise MatroidError("embedding search returned a map that fails full verification")
    return found


def are_isomorphic(m: RankOracle, n: RankOracle) -> bool:
    """Rank-preserving bijection test with invariant pre-filters."""
    if m.size() != n.size():
        return False
    if m.size() > MAX_ISO_SIZE:
        raise MatroidError(f"isomorphism limited to size <= {MAX_ISO_SIZE}")
    if m.full_rank() != n.full_rank():
        return False
    mlines = sorted(len(fl) for fl in lines(m))
    nlines = sorted(len(fl) for fl in lines(n))
    if mlines != nlines:
        return False
    mprof = sorted(line_profile(m).values())
    nprof = sorted(line_profile(n).values())
    if mprof != nprof:
        return False
    prof_m = line_profile(m)
    prof_n = line_profile(n)
    rank1_m = {e for e in m.ground if m.rank([e]) == 0}
    rank1_n = {e for e in n.ground if n.rank([e]) == 0}
    if len(rank1_m) != len(rank1_n):
        return False

    def compatible(ne, me):
        return prof_n[ne] == prof_m[me] and ((ne in rank1_n) == (me in rank1_m))

    found = _embedding_search(m, n, bijective=True, candidate_filter=compatible)
    if found is None:
        return False
    if not _verify_embedding(m, n, found, full=(n.size() <= 14)):
        raise MatroidError("isomorphism search returned a map that fails verification")
    return True


# -- graph coloring ------------------------------------------------------------


def chromatic_number(n_vertices: int, edges: Sequence[tuple[int, int]]) -> int:
    """Exact chromatic number of a simple graph by exhaustive k-coloring."""
    if n_vertices > 10:
        raise MatroidError("chromatic_number limited to 10 vertices")
    simple = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    if n_vertices == 0:
        return 0
    adj = [[] for _ in range(n_vertices)]
    for u, v in simple:
        adj[u].append(v)
        adj[v].append(u)

    def colorable(k: int) -> bool:
        colors = [-1] * n_vertices

        def go(v):
            if v == n_vertices:
                return True
            used = {colors[u] for u in adj[v] if colors[u] >= 0}
            for c in range(min(k, v + 1)):
                if c not in used:
                    colors[v] = c
                    if go(v + 1):
                        return True
                    colors[v] = -1
            return False

        return go(0)

    for k in range(1, n_vertices + 1):
        if colorable(k):
            return k
    return n_vertices


def chromatic_number_of_graphic(m: GraphicMatroid) -> int:
    return chromatic_number(m.n_vertices, m.edges)
