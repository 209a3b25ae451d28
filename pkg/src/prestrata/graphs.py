"""Genus-zero prestable graphs: leg-labeled trees.

A graph here is a tree on vertices ``0..V-1``; each vertex carries a set of
leg labels, and the legs across all vertices partition ``{1..n}``.  There is
no stability requirement: vertices of valence 0, 1, or 2 are allowed.

The canonical form is an AHU-style rooted tree code.  Rooting happens at the
tree centroid (or, for a bicentroid, at the endpoint whose half has the
smaller code), children are ordered by their subtree codes, and the vertices
are then relabeled in DFS preorder.  Two graphs get the same key exactly when
some vertex bijection matches edges and fixes every leg label.

Every function in this module is pure; graphs are immutable and hashable, so
results are memoized per graph object value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial

# An item is one attachment point at a vertex: a leg ("leg", label) or the
# end of an edge ("end", edge_index).  Which endpoint of the edge is meant is
# determined by the vertex whose item list contains it.
Item = tuple


@dataclass(frozen=True)
class PrestableGraph:
    """A tree with labeled legs.  ``legs[v]`` is the leg set at vertex v.

    Edge pairs are stored as (u, v) with u < v; the list order is stable and
    meaningful (items reference edges by index), so it is not required to be
    sorted — canonical graphs happen to have sorted edge lists by
    construction.
    """

    n: int
    legs: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        num_vertices = len(self.legs)
        if num_vertices == 0:
            raise ValueError("a graph needs at least one vertex")
        if len(self.edges) != num_vertices - 1:
            raise ValueError("not a tree: edge count must be vertex count - 1")
        seen_pairs = set()
        parent = list(range(num_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u >= v:
                raise ValueError(f"edge ({u},{v}) must be stored with u < v")
            if (u, v) in seen_pairs:
                raise ValueError(f"parallel edge ({u},{v})")
            seen_pairs.add((u, v))
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError("cycle detected: not a tree")
            parent[ru] = rv
        all_legs: list[int] = []
        for leg_set in self.legs:
            all_legs.extend(leg_set)
        if sorted(all_legs) != list(range(1, self.n + 1)):
            raise ValueError(f"legs must partition 1..{self.n}")

    # -- basic accessors -------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.legs)

    def valence(self, v: int) -> int:
        return len(self.legs[v]) + sum(1 for u, w in self.edges if v in (u, w))

    def graph_key(self) -> str:
        """Serialization used as the isomorphism-class key.

        Only meaningful on canonical graphs (as produced by
        ``canonicalize_graph``); on those it equals the JSON interchange
        form and is unique per isomorphism class.
        """
        return self.to_json()

    # -- serialization ---------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "vertices": [{"legs": sorted(s)} for s in self.legs],
            "edges": [[u, v] for u, v in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_obj(obj: dict) -> "PrestableGraph":
        legs = tuple(frozenset(rec["legs"]) for rec in obj["vertices"])
        edges = tuple((min(u, v), max(u, v)) for u, v in obj["edges"])
        return PrestableGraph(n=obj["n"], legs=legs, edges=edges)

    @staticmethod
    def from_json(text: str) -> "PrestableGraph":
        return PrestableGraph.from_json_obj(json.loads(text))


def build_graph(
    n: int, legs: list[set[int]] | list[frozenset[int]], edges: list[tuple[int, int]]
) -> PrestableGraph:
    """Normalize raw data (edge endpoint order only) into a PrestableGraph."""
    return PrestableGraph(
        n=n,
        legs=tuple(frozenset(s) for s in legs),
        edges=tuple((min(u, v), max(u, v)) for u, v in edges),
    )


@dataclass(frozen=True)
class Automorphism:
    """A leg-fixing graph automorphism, stored as a vertex permutation."""

    perm: tuple[int, ...]  # perm[v] = image of v

    def map_item(self, g: PrestableGraph, v: int, item: Item) -> tuple[int, Item]:
        """Image of the item attached at v, as (vertex, item) at the image."""
        w = self.perm[v]
        if item[0] == "leg":
            return (w, item)
        edge_idx = item[1]
        a, b = g.edges[edge_idx]
        ma, mb = self.perm[a], self.perm[b]
        target = (min(ma, mb), max(ma, mb))
        for jdx, pair in enumerate(g.edges):
            if pair == target:
                return (w, ("end", jdx))
        raise ValueError("permutation is not an automorphism")


@dataclass(frozen=True)
class AutGroup:
    order: int
    generators: tuple[Automorphism, ...]


# -- adjacency and subtree codes ----------------------------------------


@lru_cache(maxsize=None)
def adjacency(g: PrestableGraph) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Per vertex: tuple of (neighbor, edge index), in edge-list order."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for idx, (u, v) in enumerate(g.edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    return tuple(tuple(entries) for entries in adj)


@lru_cache(maxsize=None)
def _dir_key_table(g: PrestableGraph) -> dict[tuple[int, int | None], tuple]:
    """Subtree codes: key (u, parent) -> code of u's subtree away from parent.

    Codes are nested tuples starting with the subtree size, so comparisons
    order smaller subtrees first; sizes differ whenever shapes do not match,
    which keeps the bicentroid half contiguous in DFS layouts.
    """
    adj = adjacency(g)
    table: dict[tuple[int, int | None], tuple] = {}

    def code(u: int, parent: int | None) -> tuple:
        key = (u, parent)
        if key in table:
            return table[key]
        child_codes = sorted(code(w, u) for w, _ in adj[u] if w != parent)
        size = 1 + sum(c[0] for c in child_codes)
        result = (size, tuple(sorted(g.legs[u])), tuple(child_codes))
        table[key] = result
        return result

    for v in range(g.num_vertices):
        code(v, None)
        for w, _ in adj[v]:
            code(v, w)
    return table


def dir_key(g: PrestableGraph, u: int, parent: int | None) -> tuple:
    """Code of the subtree rooted at u looking away from parent."""
    return _dir_key_table(g)[(u, parent)]


@lru_cache(maxsize=None)
def centroids(g: PrestableGraph) -> tuple[int, ...]:
    """The one or two tree centroids (vertices minimizing the largest
    component left after their removal)."""
    num = g.num_vertices
    if num == 1:
        return (0,)
    adj = adjacency(g)
    size = [1] * num
    order: list[int] = []
    parent = [-1] * num
    stack = [0]
    seen = [False] * num
    while stack:
        v = stack.pop()
        if seen[v]:
            continue
        seen[v] = True
        order.append(v)
        for w, _ in adj[v]:
            if not seen[w]:
                parent[w] = v
                stack.append(w)
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    best: list[int] = []
    best_score = num + 1
    for v in range(num):
        score = num - size[v]
        for w, _ in adj[v]:
            if parent[w] == v:
                score = max(score, size[w])
        if score < best_score:
            best_score = score
            best = [v]
        elif score == best_score:
            best.append(v)
    return tuple(sorted(best))


@lru_cache(maxsize=None)
def canonicalize_graph(g: PrestableGraph) -> tuple[PrestableGraph, tuple[int, ...]]:
    """Canonical representative and the relabeling old-index -> new-index.

    Root = the centroid with the smallest (subtree code, input index); the
    children at every vertex are ordered by (subtree code, input index) and
    vertices take DFS preorder numbers.  On an already-canonical graph this
    returns the same graph and the identity relabeling.
    """
    adj = adjacency(g)
    root = min(centroids(g), key=lambda v: (dir_key(g, v, None), v))
    new_index: dict[int, int] = {}
    new_legs: list[frozenset[int]] = []
    new_edges: list[tuple[int, int]] = []

    def dfs(v: int, parent: int | None) -> None:
        new_index[v] = len(new_legs)
        new_legs.append(g.legs[v])
        children = sorted(
            (w for w, _ in adj[v] if w != parent),
            key=lambda w: (dir_key(g, w, v), w),
        )
        for w in children:
            dfs(w, v)
            new_edges.append((new_index[v], new_index[w]))

    dfs(root, None)
    relabeling = tuple(new_index[v] for v in range(g.num_vertices))
    canonical = PrestableGraph(
        n=g.n,
        legs=tuple(new_legs),
        edges=tuple(sorted(new_edges)),
    )
    return canonical, relabeling


def canonical_form(g: PrestableGraph) -> tuple[str, tuple[int, ...]]:
    """Key string plus the relabeling onto the canonical representative."""
    canonical, relabeling = canonicalize_graph(g)
    return canonical.graph_key(), relabeling


@lru_cache(maxsize=None)
def item_order(g: PrestableGraph) -> tuple[tuple[Item, ...], ...]:
    """Ordered items per vertex: legs ascending by label, then edge-ends
    ordered by (code of the subtree behind the edge, neighbor index)."""
    adj = adjacency(g)
    out: list[tuple[Item, ...]] = []
    for v in range(g.num_vertices):
        items: list[Item] = [("leg", label) for label in sorted(g.legs[v])]
        ends = sorted(adj[v], key=lambda pair: (dir_key(g, pair[0], v), pair[0]))
        items.extend(("end", edge_idx) for _, edge_idx in ends)
        out.append(tuple(items))
    return tuple(out)


def item_neighbor(g: PrestableGraph, v: int, item: Item) -> int:
    """The vertex at the far end of an edge-end item at v."""
    if item[0] != "end":
        raise ValueError("item is a leg, not an edge-end")
    a, b = g.edges[item[1]]
    return b if a == v else a


@lru_cache(maxsize=None)
def _children_by_class(
    g: PrestableGraph,
) -> tuple[tuple[tuple[tuple[int, ...], ...], ...], ...]:
    """For each vertex of a canonical graph: its child blocks grouped by
    equal subtree code (classes in code order, members in index order)."""
    adj = adjacency(g)
    out = []
    for v in range(g.num_vertices):
        children = sorted(w for w, _ in adj[v] if w > v)
        groups: list[list[int]] = []
        codes: list[tuple] = []
        for w in children:
            c = dir_key(g, w, v)
            if codes and codes[-1] == c:
                groups[-1].append(w)
            else:
                codes.append(c)
                groups.append([w])
        out.append(tuple(tuple(grp) for grp in groups))
    return tuple(out)


def automorphisms(g: PrestableGraph) -> AutGroup:
    """Automorphism group of a canonical graph (legs fixed pointwise).

    Order: the product over vertices and child classes of m! for each class
    of m equal child subtrees, doubled when the graph is a bicentroid with
    two identical halves.  Generators: adjacent transpositions of equal
    sibling subtrees (as DFS block swaps) plus the half swap.
    """
    canonical, _ = canonicalize_graph(g)
    if canonical != g:
        raise ValueError("automorphisms requires canonical input")
    order = 1
    generators: list[Automorphism] = []
    num = g.num_vertices

    def block_swap(start_a: int, start_b: int, size: int) -> Automorphism:
        perm = list(range(num))
        for offset in range(size):
            perm[start_a + offset] = start_b + offset
            perm[start_b + offset] = start_a + offset
        return Automorphism(perm=tuple(perm))

    for v in range(num):
        for group in _children_by_class(g)[v]:
            m = len(group)
            if m < 2:
                continue
            order *= factorial(m)
            size = dir_key(g, group[0], v)[0]
            for i in range(m - 1):
                generators.append(block_swap(group[i], group[i + 1], size))
    cents = centroids(g)
    if len(cents) == 2:
        a, b = cents
        if dir_key(g, a, b) == dir_key(g, b, a):
            order *= 2
            half = g.num_vertices // 2
            perm = tuple((x + half) % g.num_vertices for x in range(g.num_vertices))
            generators.append(Automorphism(perm=perm))
    return AutGroup(order=order, generators=tuple(generators))


def contract_edge(g: PrestableGraph, edge_idx: int) -> PrestableGraph:
    """Contract one edge, merging its endpoints (raw result, not canonical)."""
    if not (0 <= edge_idx < len(g.edges)):
        raise ValueError(f"invalid edge id {edge_idx}")
    u, v = g.edges[edge_idx]  # u < v; v is merged into u

    def rename(x: int) -> int:
        if x == v:
            return u
        return x - 1 if x > v else x

    new_legs = []
    for w in range(g.num_vertices):
        if w == v:
            continue
        s = g.legs[w] | g.legs[v] if w == u else g.legs[w]
        new_legs.append(s)
    new_edges = []
    for idx, (a, b) in enumerate(g.edges):
        if idx == edge_idx:
            continue
        ra, rb = rename(a), rename(b)
        new_edges.append((min(ra, rb), max(ra, rb)))
    return PrestableGraph(n=g.n, legs=tuple(new_legs), edges=tuple(new_edges))


# -- enumeration ---------------------------------------------------------


@lru_cache(maxsize=None)
def _unlabeled_trees(num_vertices: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """One edge list per isomorphism class of trees on the given vertex
    count, generated by leaf addition with canonical-key dedup."""
    if num_vertices <= 0:
        return ()
    if num_vertices == 1:
        return ((),)
    out: dict[str, tuple[tuple[int, int], ...]] = {}
    for smaller in _unlabeled_trees(num_vertices - 1):
        for v in range(num_vertices - 1):
            edges = smaller + ((v, num_vertices - 1),)
            g = PrestableGraph(
                n=0, legs=tuple(frozenset() for _ in range(num_vertices)), edges=edges
            )
            canonical, _ = canonicalize_graph(g)
            out.setdefault(canonical.graph_key(), canonical.edges)
    return tuple(out[key] for key in sorted(out))


def _flush_canonicalization_caches() -> None:
    """Drop the per-graph memo tables.

    Enumeration feeds millions of throwaway labeled graphs through
    canonicalization; without periodic flushes the unbounded memos on those
    one-shot inputs dominate memory.  Everything flushed here is a pure
    function of its graph and is recomputed on demand.
    """
    canonicalize_graph.cache_clear()
    _dir_key_table.cache_clear()
    adjacency.cache_clear()
    centroids.cache_clear()


@lru_cache(maxsize=None)
def enumerate_graphs(n: int, edges: int) -> tuple[PrestableGraph, ...]:
    """One canonical representative per isomorphism class with the given
    marking count and edge count, sorted by graph key."""
    if n < 0 or edges < 0:
        raise ValueError("n and edges must be nonnegative")
    num_vertices = edges + 1
    out: dict[str, PrestableGraph] = {}
    processed = 0
    for tree_edges in _unlabeled_trees(num_vertices):
        if n == 0:
            assignments = iter([()])
        else:
            # the first leg only needs one vertex per automorphism orbit of
            # the bare tree (equal whole-tree codes rooted at v mean an
            # automorphism moves one vertex to the other); remaining legs
            # range freely and duplicates fall to the canonical-key dedup
            bare = build_graph(
                0, [set() for _ in range(num_vertices)], list(tree_edges)
            )
            reps = []
            seen_codes = set()
            for v in range(num_vertices):
                code = dir_key(bare, v, None)
                if code not in seen_codes:
                    seen_codes.add(code)
                    reps.append(v)
            assignments = (
                (first,) + rest
                for first in reps
                for rest in product(range(num_vertices), repeat=n - 1)
            )
        for assignment in assignments:
            legs: list[set[int]] = [set() for _ in range(num_vertices)]
            for leg, vertex in enumerate(assignment, start=1):
                legs[vertex].add(leg)
            g = build_graph(n, legs, list(tree_edges))
            canonical, _ = canonicalize_graph(g)
            out.setdefault(canonical.graph_key(), canonical)
            processed += 1
            if processed % 20000 == 0:
                _flush_canonicalization_caches()
    return tuple(out[key] for key in sorted(out))
