"""Parameterized generators for every named extremal example.

Each recipe produces its object together with a predicted size (closed
formula) and a freeness claim as a forbidden-matroid descriptor; the
detection machinery verifies the claims separately.  Part assignments
follow index-interval conventions so outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from random import Random
from typing import Optional

from .frame import DowlingGeometry, FrameMatroid, dowling, matching_subgroups
from .gaingraph import GainGraph, GainGraphError, build_gain_graph
from .groups import GroupTable, find_good_pair, make_cyclic
from .matroids import DirectSum, MatroidError, RankOracle, UniformMatroid, VectorOracle

MERSENNE_61 = (1 << 61) - 1


@dataclass(frozen=True)
class ConstructionRecipe:
    name: str
    params: dict
    predicted_size: int
    freeness: Optional[dict]  # forbidden-matroid descriptor, or None
    graph: Optional[GainGraph] = None
    oracle: Optional[RankOracle] = None
    host: Optional[DowlingGeometry] = None
    kept: Optional[tuple[int, ...]] = field(default=None)

    def actual_size(self) -> int:
        if self.kept is not None:
            return len(self.kept)
        if self.graph is not None:
            return self.graph.n_edges()
        return self.oracle.size()


# -- triangle-free families ------------------------------------------------------


def bipartite_z2(a: int, b: int) -> GainGraph:
    """Both gains on every pair across the (a, b) bipartition; 2ab edges."""
    if a < 1 or b < 1:
        raise GainGraphError("both parts must be nonempty")
    z2 = make_cyclic(2)
    links = [(i, j, x) for i in range(a) for j in range(a, a + b) for x in (0, 1)]
    return build_gain_graph(z2, a + b, links)


def mantel_z3(n: int) -> GainGraph:
    """Triangle-free subgraph of the complete Z3 gain graph with ceil(n^2/2) edges."""
    if n < 1:
        raise GainGraphError("need at least one vertex")
    z3 = make_cyclic(3)
    links = []
    loops = []
    if n % 2 == 0:
        half = n // 2
        for i in range(half):
            for j in range(half, n):
                links.append((i, j, 1))
                links.append((i, j, 2))
    else:
        half = n // 2
        for i in range(half):
            for j in range(half, n - 1):
                links.append((i, j, 1))
                links.append((i, j, 2))
        loops.append(n - 1)
        for i in range(n - 1):
            links.append((i, n - 1, 0))
    return build_gain_graph(z3, n, links, loop_vertices=loops)


def good_pair_graph(g: GroupTable, n: int) -> GainGraph:
    """Edges labelled by a good pair on every vertex pair; n(n-1) edges."""
    pair = find_good_pair(g)
    if pair is None:
        raise GainGraphError(
            "group has no good pair (x, y distinct non-identity, x^2 != y, y^2 != x); "
            "this requires order at least 4"
        )
    x, y = pair
    links = []
    for i in range(n):
        for j in range(i + 1, n):
            links.append((i, j, x))
            links.append((i, j, y))
    return build_gain_graph(g, n, links)


def turan_partition(n: int, k: int) -> list[list[int]]:
    """k consecutive index intervals with sizes differing by at most one."""
    q, s = divmod(n, k)
    parts = []
    start = 0
    for i in range(k):
        size = q + (1 if i < s else 0)
        parts.append(list(range(start, start + size)))
        start += size
    return parts


def turan_blowup(n: int, k: int, g: GroupTable) -> GainGraph:
    """Every gain on every cross-part pair of the k-part Turan partition."""
    if not (1 <= k <= n):
        raise GainGraphError("need 1 <= k <= n")
    parts = turan_partition(n, k)
    part_of = {}
    for idx, part in enumerate(parts):
        for v in part:
            part_of[v] = idx
    links = []
    for i in range(n):
        for j in range(i + 1, n):
            if part_of[i] != part_of[j]:
                for x in g.elements():
                    links.append((i, j, x))
    return build_gain_graph(g, n, links)


# -- M(K_4)-free families ----------------------------------------------------------


def h_ab(a: int, b: int) -> GainGraph:
    """Loops and negative edges on the first a vertices, doubled edges across."""
    if a < 0 or b < 0 or a + b < 1:
        raise GainGraphError("need a, b >= 0 with a + b >= 1")
    z2 = make_cyclic(2)
    links = []
    for i in range(a):
        for j in range(i + 1, a):
            links.append((i, j, 1))
    for i in range(a):
        for j in range(a, a + b):
            links.append((i, j, 0))
            links.append((i, j, 1))
    return build_gain_graph(z2, a + b, links, loop_vertices=range(a))


def z4_k4free(n: int) -> GainGraph:
    """Three-part construction over the four-element cyclic group; n >= 13."""
    if n < 13:
        raise GainGraphError("construction needs n >= 13 (nonempty parts)")
    z4 = make_cyclic(4)
    m = (4 * n) // 13
    a_part = range(m)
    b_part = range(m, 2 * m)
    c_part = range(2 * m, n)
    links = []
    for part in (a_part, b_part):
        vs = list(part)
        for ii in range(len(vs)):
            for jj in range(ii + 1, len(vs)):
                links.append((vs[ii], vs[jj], 2))
    for i in a_part:
        for j in b_part:
            links.append((i, j, 0))
            links.append((i, j, 1))
    for i in list(a_part) + list(b_part):
        for j in c_part:
            for x in range(4):
                links.append((i, j, x))
    return build_gain_graph(z4, n, links)


def z4_k4free_size(n: int) -> int:
    m = (4 * n) // 13
    return 2 * comb(m, 2) + 2 * m * m + 4 * (2 * m) * (n - 2 * m)


def k4_lower(g: GroupTable, n: int) -> GainGraph:
    """A clique on one gain plus a fully labelled cross part; M(K_4)-free."""
    if g.order < 2:
        raise GainGraphError("the trivial group is excluded")
    if n < 2:
        raise GainGraphError("need n >= 2")
    m = g.order
    n1 = (m * n) // (2 * m - 1)
    x = 1
    links = []
    for i in range(n1):
        for j in range(i + 1, n1):
            links.append((i, j, x))
    for i in range(n1):
        for j in range(n1, n):
            for y in g.elements():
                links.append((i, j, y))
    return build_gain_graph(g, n, links)


def k4_lower_size(g: GroupTable, n: int) -> int:
    m = g.order
    n1 = (m * n) // (2 * m - 1)
    return comb(n1, 2) + m * n1 * (n - n1)


def z2_kt_free(n: int, t: int) -> GainGraph:
    """Near-complete two-gain graph avoiding every M(K_t) realizer, t >= 5.

    Deletes identity links inside the doubled classes B_j and all edges inside
    the final class(es); when t is odd the last two classes are both made
    internally edge-free, mirroring the even case.
    """
    if t < 5:
        raise GainGraphError("t >= 5 required; the t = 4 family is h_ab")
    if n < t:
        raise GainGraphError("need n >= t")
    z2 = make_cyclic(2)
    q, r = divmod(n, t - 1)
    classes = []
    for i in range(t - 2):
        classes.append(list(range(q * i, q * (i + 1))))
    classes.append(list(range(q * (t - 2), n)))
    class_of = {}
    for idx, cls in enumerate(classes):
        for v in cls:
            class_of[v] = idx
    if t % 2 == 0:
        doubled_count = (t - 2) // 2
        bare_classes = {t - 2}
    else:
        doubled_count = (t - 3) // 2
        bare_classes = {t - 3, t - 2}
    pair_block = {}
    for j in range(doubled_count):
        pair_block[2 * j] = j
        pair_block[2 * j + 1] = j
    links = []
    loops = []
    for v in range(n):
        if class_of[v] not in bare_classes:
            loops.append(v)
    for i in range(n):
        for j in range(i + 1, n):
            ci, cj = class_of[i], class_of[j]
            if ci in bare_classes and ci == cj:
                continue
            same_block = (
                ci not in bare_classes
                and cj not in bare_classes
                and pair_block.get(ci) is not None
                and pair_block.get(ci) == pair_block.get(cj)
            )
            gains = (1,) if same_block else (0, 1)
            for x in gains:
                links.append((i, j, x))
    return build_gain_graph(z2, n, links, loop_vertices=loops)


def z2_kt_free_exact_size(n: int, t: int) -> Optional[int]:
    """Closed size formula, valid exactly when (t-1) divides n."""
    if n % (t - 1):
        return None
    return (t - 2) * n * n // (t - 1) + ((t - 2) // 2) * n // (t - 1)


# -- extremal subsets of Dowling geometries -----------------------------------------

LONGLINE_VARIANTS = ("keep-all", "delete-joints", "delete-joints-line-point", "per-line")


def longline_extremal(n: int, g: GroupTable, ell: int, variant: str) -> tuple[DowlingGeometry, tuple[int, ...]]:
    """A largest line-free element subset for the given regime."""
    if ell < 4:
        raise MatroidError("line length must be at least 4")
    d = dowling(n, g)
    order = g.order
    ground = set(d.matroid.ground)
    if variant == "keep-all":
        if ell < order + 3:
            raise MatroidError(f"keep-all needs line length >= {order + 3}")
        kept = ground
    elif variant == "delete-joints":
        if ell != order + 2:
            raise MatroidError(f"delete-joints needs line length == {order + 2}")
        kept = ground - set(d.joint_ids[: n - 1])
    elif variant == "delete-joints-line-point":
        if ell != order + 2:
            raise MatroidError(f"delete-joints-line-point needs line length == {order + 2}")
        if n < 2:
            raise MatroidError("needs at least two vertices")
        removed = set(d.joint_ids[: n - 2])
        removed.add(d.link_id(n - 2, n - 1, 0))
        kept = ground - removed
    elif variant == "per-line":
        if ell > order + 1:
            raise MatroidError(f"per-line needs line length <= {order + 1}")
        kept = set()
        for i in range(n):
            for j in range(i + 1, n):
                for x in range(ell - 1):
                    kept.add(d.link_id(i, j, x))
    else:
        raise MatroidError(f"unknown variant {variant!r}; choose from {LONGLINE_VARIANTS}")
    return d, tuple(sorted(kept))


def longline_extremal_size(n: int, order: int, ell: int, variant: str) -> int:
    total = order * comb(n, 2) + n
    if variant == "keep-all":
        return total
    if variant in ("delete-joints", "delete-joints-line-point"):
        return total - n + 1
    return (ell - 1) * comb(n, 2)


def subgeometry_extremal(
    n: int,
    t: int,
    g: GroupTable,
    sub: GroupTable,
    x: tuple[int, ...],
) -> tuple[DowlingGeometry, tuple[int, ...]]:
    """Delete the (n-t+1)-set x; validated against the regime's conditions."""
    if t < 3 or n < t:
        raise MatroidError("need n >= t >= 3")
    if sub.order < 2:
        raise MatroidError("the subgroup must be nontrivial")
    if not matching_subgroups(g, sub):
        raise MatroidError(f"{sub.label} does not embed as a subgroup of {g.label}")
    d = dowling(n, g)
    xset = set(x)
    unknown = xset - set(d.matroid.ground)
    if unknown:
        raise MatroidError(f"deleted elements outside the geometry: {sorted(unknown)}")
    if len(xset) != n - t + 1:
        raise MatroidError(f"deletion set must have n - t + 1 = {n - t + 1} elements")
    joints = set(d.joint_ids)
    joint_dels = sorted(xset & joints)
    nonjoint_dels = sorted(xset - joints)
    proper = sub.order < g.order
    if proper:
        if nonjoint_dels:
            raise MatroidError(
                "proper subgroups require joint deletions only "
                f"(non-joints {nonjoint_dels} are invalid)"
            )
    else:
        joint_vertices = {e: d.graph.edge(e).vertex for e in joint_dels}
        pairs = {e: (d.graph.edge(e).tail, d.graph.edge(e).head) for e in nonjoint_dels}
        for e, v in joint_vertices.items():
            for f, (i, j) in pairs.items():
                if v in (i, j):
                    raise MatroidError(
                        f"condition (1) violated: joint {d.graph.edge_name(e)} lies on the "
                        f"very long line of {d.graph.edge_name(f)}"
                    )
        items = list(pairs.items())
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                (e1, p1), (e2, p2) = items[a], items[b]
                if set(p1) & set(p2):
                    raise MatroidError(
                        f"condition (2) violated: lines of {d.graph.edge_name(e1)} and "
                        f"{d.graph.edge_name(e2)} intersect"
                    )
    kept = tuple(sorted(set(d.matroid.ground) - xset))
    return d, kept


# -- matchstick and origami ----------------------------------------------------------


def matchstick(r: int, n: int) -> RankOracle:
    """Direct sum of floor(r/2) lines with n+1 points, plus a coloop if r is odd."""
    if r < 1 or n < 1:
        raise MatroidError("need r, n >= 1")
    parts: list[RankOracle] = [UniformMatroid(2, n + 1) for _ in range(r // 2)]
    if r % 2:
        parts.append(UniformMatroid(1, 1))
    return DirectSum(parts)


def matchstick_size(r: int, n: int) -> int:
    return (r // 2) * (n + 1) + (r % 2)


@dataclass(frozen=True)
class OrigamiGeometry:
    r: int
    n: int
    graph: GainGraph
    matroid: FrameMatroid
    p_ids: tuple[int, ...]  # the r basis points, one per vertex


def origami(r: int, n: int) -> OrigamiGeometry:
    """Rank-r geometry with n-1 points added freely on each consecutive basis line.

    Realized as the frame matroid of a path gain graph: a joint loop at every
    vertex and n-1 parallel links with pairwise distinct gains between
    consecutive vertices.  Any distinct-gain assignment yields the same
    matroid, checked against the generic-vector oracle.
    """
    if r < 1 or n < 1:
        raise MatroidError("need r, n >= 1")
    group = make_cyclic(max(n - 1, 1))
    links = []
    for i in range(r - 1):
        for x in range(n - 1):
            links.append((i, i + 1, x))
    graph = build_gain_graph(group, r, links, loop_vertices=range(r))
    fm = FrameMatroid(graph)
    if fm.size() != (r - 1) * n + 1:
        raise MatroidError("origami geometry has unexpected size")
    p_ids = tuple(j.edge_id for j in graph.joints)
    return OrigamiGeometry(r=r, n=n, graph=graph, matroid=fm, p_ids=p_ids)


def origami_vector_oracle(r: int, n: int, seed: int) -> VectorOracle:
    """Generic-vector realization over a large prime field, matching origami()'s
    ground order (links first, then the basis points)."""
    rng = Random(seed)
    p = MERSENNE_61
    vectors = []
    for i in range(r - 1):
        ts = set()
        while len(ts) < n - 1:
            ts.add(rng.randrange(1, p))
        for t in sorted(ts):
            vec = [0] * r
            vec[i] = 1
            vec[i + 1] = t
            vectors.append(tuple(vec))
    for i in range(r):
        vec = [0] * r
        vec[i] = 1
        vectors.append(tuple(vec))
    return VectorOracle(vectors, p)


def origami_extremal(r: int, t: int, n: int, m: int) -> tuple[OrigamiGeometry, tuple[int, ...]]:
    """Basis-point deletions making the geometry free of the smaller origami."""
    if not (r >= t >= 3):
        raise MatroidError("need r >= t >= 3")
    if not (n >= m >= 2):
        raise MatroidError("need n >= m >= 2")
    geom = origami(r, n)
    if n == m:
        deleted = {geom.p_ids[k * t - 1] for k in range(1, r // t + 1)}
    else:
        deleted = {geom.p_ids[k * (t - 2)] for k in range(1, (r - 2) // (t - 2) + 1)}
    kept = tuple(sorted(set(geom.matroid.ground) - deleted))
    return geom, kept


def origami_extremal_size(r: int, t: int, n: int, m: int) -> int:
    if n == m:
        return (r - 1) * n + 1 - r // t
    return (r - 1) * n + 1 - (r - 2) // (t - 2)


# -- recipe registry -------------------------------------------------------------------


def _recipe_bipartite_z2(a: int, b: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="bipartite_z2",
        params={"a": a, "b": b},
        predicted_size=2 * a * b,
        freeness={"clique": 3},
        graph=bipartite_z2(a, b),
    )


def _recipe_mantel_z3(n: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="mantel_z3",
        params={"n": n},
        predicted_size=(n * n + 1) // 2,
        freeness={"clique": 3},
        graph=mantel_z3(n),
    )


def _recipe_good_pair(g: GroupTable, n: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="good_pair_graph",
        params={"group": g.label, "n": n},
        predicted_size=n * (n - 1),
        freeness={"clique": 3},
        graph=good_pair_graph(g, n),
    )


def _recipe_turan_blowup(n: int, k: int, g: GroupTable) -> ConstructionRecipe:
    parts = turan_partition(n, k)
    edges = comb(n, 2) - sum(comb(len(p), 2) for p in parts)
    t_free = k + 1 if k + 1 >= 5 else k + 2
    return ConstructionRecipe(
        name="turan_blowup",
        params={"n": n, "k": k, "group": g.label},
        predicted_size=g.order * edges,
        freeness={"clique": t_free},
        graph=turan_blowup(n, k, g),
    )


def _recipe_h_ab(a: int, b: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="h_ab",
        params={"a": a, "b": b},
        predicted_size=a + comb(a, 2) + 2 * a * b,
        freeness={"clique": 4},
        graph=h_ab(a, b),
    )


def _recipe_z4_k4free(n: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="z4_k4free",
        params={"n": n},
        predicted_size=z4_k4free_size(n),
        freeness={"clique": 4},
        graph=z4_k4free(n),
    )


def _recipe_k4_lower(g: GroupTable, n: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="k4_lower",
        params={"group": g.label, "n": n},
        predicted_size=k4_lower_size(g, n),
        freeness={"clique": 4},
        graph=k4_lower(g, n),
    )


def _recipe_z2_kt_free(n: int, t: int) -> ConstructionRecipe:
    graph = z2_kt_free(n, t)
    return ConstructionRecipe(
        name="z2_kt_free",
        params={"n": n, "t": t},
        predicted_size=graph.n_edges(),
        freeness={"clique": t},
        graph=graph,
    )


def _recipe_matchstick(r: int, n: int) -> ConstructionRecipe:
    return ConstructionRecipe(
        name="matchstick",
        params={"r": r, "n": n},
        predicted_size=matchstick_size(r, n),
        freeness=None,
        oracle=matchstick(r, n),
    )


def _recipe_origami(r: int, n: int) -> ConstructionRecipe:
    geom = origami(r, n)
    return ConstructionRecipe(
        name="origami",
        params={"r": r, "n": n},
        predicted_size=(r - 1) * n + 1,
        freeness=None,
        oracle=geom.matroid,
        graph=geom.graph,
    )


def _recipe_longline(n: int, group: GroupTable, ell: int, variant: str) -> ConstructionRecipe:
    d, kept = longline_extremal(n, group, ell, variant)
    return ConstructionRecipe(
        name="longline_extremal",
        params={"n": n, "group": group.label, "ell": ell, "variant": variant},
        predicted_size=longline_extremal_size(n, group.order, ell, variant),
        freeness={"line": ell},
        host=d,
        kept=kept,
    )


def _recipe_subgeometry(n: int, t: int, group: GroupTable, sub: GroupTable, x: tuple[int, ...]) -> ConstructionRecipe:
    d, kept = subgeometry_extremal(n, t, group, sub, x)
    return ConstructionRecipe(
        name="subgeometry_extremal",
        params={"n": n, "t": t, "group": group.label, "sub": sub.label, "x": tuple(sorted(x))},
        predicted_size=d.size() - n + t - 1,
        freeness={"subgeometry": [t, sub.label]},
        host=d,
        kept=kept,
    )


def _recipe_origami_extremal(r: int, t: int, n: int, m: int) -> ConstructionRecipe:
    geom, kept = origami_extremal(r, t, n, m)
    return ConstructionRecipe(
        name="origami_extremal",
        params={"r": r, "t": t, "n": n, "m": m},
        predicted_size=origami_extremal_size(r, t, n, m),
        freeness={"origami": [t, m]},
        oracle=geom.matroid,
        kept=kept,
    )


RECIPES = {
    "bipartite_z2": _recipe_bipartite_z2,
    "mantel_z3": _recipe_mantel_z3,
    "good_pair_graph": _recipe_good_pair,
    "turan_blowup": _recipe_turan_blowup,
    "h_ab": _recipe_h_ab,
    "z4_k4free": _recipe_z4_k4free,
    "k4_lower": _recipe_k4_lower,
    "z2_kt_free": _recipe_z2_kt_free,
    "matchstick": _recipe_matchstick,
    "origami": _recipe_origami,
    "longline_extremal": _recipe_longline,
    "subgeometry_extremal": _recipe_subgeometry,
    "origami_extremal": _recipe_origami_extremal,
}
