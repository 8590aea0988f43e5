"""Molecular graphs of hexagonal systems and the brute-force anti-forcing oracle.

Everything here works from first principles on the vertex/edge graph:
perfect matchings by backtracking, alternating cycles as directed cycles
of an auxiliary digraph, anti-forcing numbers as minimum hitting sets of
those cycles, certified by maximum compatible cycle families.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import networkx as nx

from .exceptions import InvariantError, SizeGuardError
from .hexmodel import HexSystem, Segment, opposite, segments

DEFAULT_SIZE_GUARD = 12
DEFAULT_CYCLE_CAP = 10**6

# Corner k sits at angle 30 + 60k degrees.  Coordinates are in units of
# (sqrt(3)/2, 1/2) so that every vertex has integer coordinates.
_CORNERS = ((1, 1), (0, 2), (-1, 1), (-1, -1), (0, -2), (1, -1))

Edge = tuple[int, int]
Matching = frozenset  # of edge ids


def size_guard() -> int:
    raw = os.environ.get("AFPOLY_SIZE_GUARD")
    return int(raw) if raw else DEFAULT_SIZE_GUARD


def check_size(n_hexagons: int) -> None:
    limit = size_guard()
    if n_hexagons > limit:
        raise SizeGuardError(f"{n_hexagons} hexagons exceeds the oracle size guard {limit}")


@dataclass(frozen=True)
class MolecularGraph:
    """Vertex/edge realisation of a hexagonal system.

    ``edges[i]`` is ``(u, v)`` with ``u`` in colour class 0.  ``hexagon_faces``
    maps a hexagon id to its six edge ids indexed by facing direction, and
    ``vertical_edges`` pairs every maximal segment with its vertical edges
    ``e_0 .. e_l`` in order along the segment.
    """

    system: HexSystem
    coords: tuple[tuple[int, int], ...]
    edges: tuple[Edge, ...]
    hexagon_faces: dict
    vertical_edges: tuple[tuple[Segment, tuple[int, ...]], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def colour(self, v: int) -> int:
        return 0 if self.coords[v][1] % 3 == 1 else 1

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.coords]
        for eid, (u, v) in enumerate(self.edges):
            inc[u].append(eid)
            inc[v].append(eid)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g


def build_graph(h: HexSystem) -> MolecularGraph:
    corner_coords = {}
    for hid, (q, r) in h.hexagons:
        cx, cy = 2 * q + r, 3 * r
        corner_coords[hid] = [(cx + dx, cy + dy) for dx, dy in _CORNERS]
    points = sorted({p for cs in corner_coords.values() for p in cs})
    vid = {p: i for i, p in enumerate(points)}

    def oriented(a: int, b: int) -> Edge:
        # colour-0 endpoint first
        return (a, b) if points[a][1] % 3 == 1 else (b, a)

    face_pairs = {}
    all_edges = set()
    for hid, cs in corner_coords.items():
        pairs = []
        for k in range(6):
            e = oriented(vid[cs[(k - 1) % 6]], vid[cs[k]])
            pairs.append(e)
            all_edges.add(e)
        face_pairs[hid] = pairs
    edges = tuple(sorted(all_edges))
    eid = {e: i for i, e in enumerate(edges)}
    faces = {hid: tuple(eid[e] for e in pairs) for hid, pairs in face_pairs.items()}

    vertical = []
    for seg in segments(h):
        d = seg.direction
        ids = [faces[seg.hexagons[0]][opposite(d)]]
        ids.extend(faces[c][d] for c in seg.hexagons)
        vertical.append((seg, tuple(ids)))
    return MolecularGraph(h, tuple(points), edges, faces, tuple(vertical))


# ---------------------------------------------------------------------------
# perfect matchings
# ---------------------------------------------------------------------------

def is_perfect_matching(g: MolecularGraph, m: Iterable[int]) -> bool:
    covered = []
    for e in m:
        covered.extend(g.edges[e])
    return len(covered) == len(set(covered)) == g.n_vertices


def enumerate_perfect_matchings(g: MolecularGraph, guard: bool = True) -> list[Matching]:
    """All perfect matchings, sorted by their sorted edge-id tuples."""
    if guard:
        check_size(len(g.system))
    if g.n_vertices % 2:
        return []
    inc = g.incident
    matched = [False] * g.n_vertices
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def extend(start: int) -> None:
        v = start
        while v < g.n_vertices and matched[v]:
            v += 1
        if v == g.n_vertices:
            out.append(tuple(sorted(chosen)))
            return
        matched[v] = True
        for e in inc[v]:
            a, b = g.edges[e]
            w = b if a == v else a
            if not matched[w]:
                matched[w] = True
                chosen.append(e)
                extend(v + 1)
                chosen.pop()
                matched[w] = False
        matched[v] = False

    extend(0)
    out.sort()
    return [frozenset(m) for m in out]


def _has_perfect_matching(g: MolecularGraph, vertices: set[int], edges: set[int]) -> Optional[dict[int, int]]:
    """Kuhn augmenting paths on the subgraph; returns vertex->edge map or None."""
    left = [v for v in vertices if g.colour(v) == 0]
    if 2 * len(left) != len(vertices):
        return None
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in left}
    for e in edges:
        u, w = g.edges[e]
        if u in vertices and w in vertices:
            adj[u].append((w, e))
    mate_right: dict[int, tuple[int, int]] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w, e in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in mate_right or augment(mate_right[w][0], seen):
                mate_right[w] = (u, e)
                return True
        return False

    for u in sorted(left, key=lambda x: len(adj[x])):
        if not augment(u, set()):
            return None
    return {u: e for _, (u, e) in mate_right.items()}


def has_unique_pm(g: MolecularGraph, removed: Iterable[int] = ()) -> bool:
    """True iff ``g`` minus ``removed`` edges has exactly one perfect matching.

    Peels degree-one vertices; in a bipartite graph a unique perfect
    matching always leaves such a vertex to peel.
    """
    gone = set(removed)
    alive_v = set(range(g.n_vertices))
    alive_e = {e for e in range(g.n_edges) if e not in gone}
    deg = {v: 0 for v in alive_v}
    for e in alive_e:
        for v in g.edges[e]:
            deg[v] += 1
    while alive_v:
        v = next((x for x in alive_v if deg[x] <= 1), None)
        if v is None:
            return False
        if deg[v] == 0:
            return False
        (e,) = [x for x in g.incident[v] if x in alive_e]
        for w in g.edges[e]:
            alive_v.discard(w)
            for f in g.incident[w]:
                if f in alive_e:
                    alive_e.discard(f)
                    for z in g.edges[f]:
                        deg[z] -= 1
    return True


# ---------------------------------------------------------------------------
# alternating cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlternatingCycle:
    """Edge ids in cyclic order, starting with a matching edge."""

    edges: tuple[int, ...]
    matching: frozenset

    @cached_property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    @cached_property
    def free_edges(self) -> frozenset[int]:
        """Edges of the cycle outside the matching."""
        return self.edge_set - self.matching

    def vertices(self, g: MolecularGraph) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in g.edges[e])

    def __len__(self) -> int:
        return len(self.edges)


def alternating_cycles(g: MolecularGraph, m: Matching, cap: int = DEFAULT_CYCLE_CAP) -> list[AlternatingCycle]:
    """All M-alternating cycles of ``g``.

    Contract every matching edge ``(b, w)`` to a node; a free edge from
    ``w`` to the colour-0 end of another matching edge becomes an arc.
    Directed simple cycles of that digraph are exactly the alternating
    cycles, each met once.
    """
    check_size(len(g.system))
    m = frozenset(m)
    if not is_perfect_matching(g, m):
        raise ValueError("alternating_cycles needs a perfect matching")
    owner = {}
    for e in m:
        for v in g.edges[e]:
            owner[v] = e
    dg = nx.DiGraph()
    dg.add_nodes_from(sorted(m))
    arc_edge = {}
    for e, (b, w) in enumerate(g.edges):
        if e in m:
            continue
        src, dst = owner[w], owner[b]
        dg.add_edge(src, dst)
        arc_edge[(src, dst)] = e
    out = []
    for cyc in nx.simple_cycles(dg):
        if len(out) >= cap:
            raise SizeGuardError(f"more than {cap} alternating cycles; refusing to truncate")
        k = cyc.index(min(cyc))
        cyc = cyc[k:] + cyc[:k]
        seq = []
        for i, me in enumerate(cyc):
            seq.append(me)
            seq.append(arc_edge[(me, cyc[(i + 1) % len(cyc)])])
        out.append(AlternatingCycle(tuple(seq), m))
    out.sort(key=lambda c: (len(c), sorted(c.edges)))
    return out


def is_compatible(c1: AlternatingCycle, c2: AlternatingCycle, m: Matching, g: Optional[MolecularGraph] = None) -> bool:
    """Disjoint, or meeting only in matching edges (and their end vertices)."""
    m = frozenset(m)
    shared = c1.edge_set & c2.edge_set
    if shared - m:
        return False
    if g is None:
        return True
    covered = {v for e in shared for v in g.edges[e]}
    return (c1.vertices(g) & c2.vertices(g)) <= covered


def hexagon_is_alternating(g: MolecularGraph, hid: int, m: Matching) -> bool:
    face = g.hexagon_faces[hid]
    inside = [e in m for e in face]
    return inside in ([True, False] * 3, [False, True] * 3)


# ---------------------------------------------------------------------------
# closure and anti-forcing sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Remainder:
    vertices: frozenset[int]
    edges: frozenset[int]

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.edges


def closure(g: MolecularGraph, m: Matching, s: Iterable[int]) -> Remainder:
    """G minus S, with forced edges (and their ends) and anti-forced edges
    removed until nothing more is forced."""
    s = set(s)
    if s & set(m):
        raise ValueError("S must avoid the matching")
    verts = set(range(g.n_vertices))
    edges = set(range(g.n_edges)) - s
    while True:
        base = _has_perfect_matching(g, verts, edges)
        if base is None:
            raise ValueError("current graph has no perfect matching; S is inconsistent")
        in_base = set(base.values())
        forced, anti = set(), set()
        for e in edges:
            u, w = g.edges[e]
            if e in in_base:
                if _has_perfect_matching(g, verts, edges - {e}) is None:
                    forced.add(e)
            elif _has_perfect_matching(g, verts - {u, w}, edges) is None:
                anti.add(e)
        if not forced and not anti:
            return Remainder(frozenset(verts), frozenset(edges))
        for e in forced:
            verts -= set(g.edges[e])
        edges = {e for e in edges - anti if set(g.edges[e]) <= verts}


def is_antiforcing_set(g: MolecularGraph, m: Matching, s: Iterable[int]) -> bool:
    s = frozenset(s)
    by_closure = closure(g, m, s).is_empty
    by_peeling = has_unique_pm(g, s)
    if by_closure != by_peeling:
        raise InvariantError("closure test and unique-matching test disagree")
    return by_closure


# ---------------------------------------------------------------------------
# af(G, M) and c'(G, M)
# ---------------------------------------------------------------------------

def _packing_bound(cycles: Sequence[frozenset[int]]) -> int:
    used: set[int] = set()
    n = 0
    for c in sorted(cycles, key=len):
        if not (c & used):
            used |= c
            n += 1
    return n


def minimum_hitting_set(cycles: Sequence[frozenset[int]]) -> frozenset[int]:
    """Smallest edge set meeting every cycle (branch and bound)."""
    cycles = [frozenset(c) for c in cycles]
    if not cycles:
        return frozenset()
    if any(not c for c in cycles):
        raise ValueError("an empty cycle cannot be hit")
    # greedy upper bound
    greedy: set[int] = set()
    left = list(cycles)
    while left:
        counts: dict[int, int] = {}
        for c in left:
            for e in c:
                counts[e] = counts.get(e, 0) + 1
        e = min(counts, key=lambda x: (-counts[x], x))
        greedy.add(e)
        left = [c for c in left if e not in c]
    best = [frozenset(greedy)]

    def search(chosen: frozenset[int], banned: frozenset[int], open_: list[frozenset[int]]) -> None:
        if not open_:
            if len(chosen) < len(best[0]):
                best[0] = chosen
            return
        allowed = [c - banned for c in open_]
        if any(not a for a in allowed):
            return
        if len(chosen) + _packing_bound(allowed) >= len(best[0]):
            return
        pivot = min(allowed, key=lambda a: (len(a), sorted(a)))
        newly_banned = set(banned)
        for e in sorted(pivot):
            rest = [c for c in open_ if e not in c]
            search(chosen | {e}, frozenset(newly_banned), rest)
            newly_banned.add(e)

    search(frozenset(), frozenset(), cycles)
    return best[0]


def max_compatible_set(cycles: Sequence[AlternatingCycle], m: Matching) -> list[AlternatingCycle]:
    """Largest pairwise-compatible family (exact backtracking)."""
    n = len(cycles)
    conflict = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if not is_compatible(cycles[i], cycles[j], m):
                conflict[i].add(j)
                conflict[j].add(i)
    best: list[int] = []

    def search(current: list[int], candidates: list[int]) -> None:
        nonlocal best
        if len(current) + len(candidates) <= len(best):
            return
        if not candidates:
            best = list(current)
            return
        v = candidates[0]
        search(current + [v], [c for c in candidates[1:] if c not in conflict[v]])
        search(current, candidates[1:])

    order = sorted(range(n), key=lambda i: (len(conflict[i]), i))
    search([], order)
    return [cycles[i] for i in sorted(best)]


def minimum_antiforcing_set(g: MolecularGraph, m: Matching) -> frozenset[int]:
    cycles = alternating_cycles(g, m)
    return minimum_hitting_set([c.free_edges for c in cycles])


def af_number(g: MolecularGraph, m: Matching, certify: bool = True) -> int:
    """Anti-forcing number of ``m``.

    With ``certify`` the optimum is checked against a compatible family of
    the same size and the hitting set is re-validated as an anti-forcing set.
    """
    m = frozenset(m)
    cycles = alternating_cycles(g, m)
    s = minimum_hitting_set([c.free_edges for c in cycles])
    if certify:
        family = max_compatible_set(cycles, m)
        if len(family) != len(s):
            raise InvariantError(
                f"certificate gap: hitting set {len(s)} vs compatible family {len(family)}"
            )
        if not is_antiforcing_set(g, m, s):
            raise InvariantError("optimal hitting set is not an anti-forcing set")
    return len(s)


def c_prime(g: MolecularGraph, m: Matching) -> int:
    m = frozenset(m)
    return len(max_compatible_set(alternating_cycles(g, m), m))


def fries_number(g: MolecularGraph) -> int:
    return max(
        sum(hexagon_is_alternating(g, hid, m) for hid in g.hexagon_faces)
        for m in enumerate_perfect_matchings(g)
    )


def check_vertical_edge_rule(g: Union[MolecularGraph, HexSystem], m: Matching) -> bool:
    """Every maximal segment has exactly one vertical edge in ``m``."""
    if isinstance(g, HexSystem):
        g = build_graph(g)
    if not is_perfect_matching(g, m):
        raise ValueError("check_vertical_edge_rule needs a perfect matching")
    return all(sum(e in m for e in ids) == 1 for _, ids in g.vertical_edges)


def selected_vertical_edges(g: MolecularGraph, m: Matching) -> tuple[int, ...]:
    """Per segment, the index of the vertical edge that lies in ``m``."""
    out = []
    for _, ids in g.vertical_edges:
        hits = [k for k, e in enumerate(ids) if e in m]
        if len(hits) != 1:
            raise InvariantError("segment without exactly one matched vertical edge")
        out.append(hits[0])
    return tuple(out)
