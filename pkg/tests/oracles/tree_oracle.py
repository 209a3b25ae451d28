"""Naive generate-all-and-dedup oracle for leg-labeled trees.

A "leg-labeled tree" here is a plain structure: ``V`` vertices named
``0..V-1``, a list of undirected edges, and an assignment of the legs
``1..n`` to vertices.  Isomorphism = a bijection of vertices preserving
edges and mapping every leg to itself (legs are pinned labels).

The oracle enumerates *labeled* trees via Pruefer sequences, attaches legs in
every possible way, and dedups with a brute-force canonical form (minimum
serialization over all vertex permutations compatible with cheap invariants).
It is exponentially slower than any real implementation and exists purely to
cross-check counts and representatives on small inputs.
"""

from __future__ import annotations

from itertools import permutations, product


def labeled_trees(num_vertices: int) -> list[list[tuple[int, int]]]:
    """All labeled trees on vertices 0..num_vertices-1 as edge lists."""
    if num_vertices <= 0:
        return []
    if num_vertices == 1:
        return [[]]
    if num_vertices == 2:
        return [[(0, 1)]]
    trees = []
    for seq in product(range(num_vertices), repeat=num_vertices - 2):
        trees.append(_tree_from_pruefer(list(seq), num_vertices))
    return trees


def _tree_from_pruefer(seq: list[int], num_vertices: int) -> list[tuple[int, int]]:
    degree = [1] * num_vertices
    for v in seq:
        degree[v] += 1
    edges = []
    seq = list(seq)
    leaves = sorted(v for v in range(num_vertices) if degree[v] == 1)
    for v in seq:
        leaf = leaves.pop(0)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            # insert keeping sorted order
            lo = 0
            while lo < len(leaves) and leaves[lo] < v:
                lo += 1
            leaves.insert(lo, v)
    u, v = leaves
    edges.append((min(u, v), max(u, v)))
    return edges


def canonical_string(
    num_vertices: int, edges: list[tuple[int, int]], legs: list[frozenset[int]]
) -> str:
    """Minimum serialization over all invariant-respecting vertex bijections.

    Slot ranges are fixed by sorting the intrinsic per-vertex invariant
    (degree, leg set), so vertices only permute within an invariant class.
    That prunes the search without depending on the input labeling: two
    isomorphic inputs reach the same set of serializations.
    """
    degrees = [0] * num_vertices
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    invariant = [(degrees[v], tuple(sorted(legs[v]))) for v in range(num_vertices)]
    classes: dict[tuple, list[int]] = {}
    for v in range(num_vertices):
        classes.setdefault(invariant[v], []).append(v)
    ordered_classes = [classes[value] for value in sorted(classes)]
    offsets = []
    start = 0
    for members in ordered_classes:
        offsets.append(start)
        start += len(members)
    best = None
    for arrangement in product(*(permutations(members) for members in ordered_classes)):
        perm = [0] * num_vertices
        for members, offset in zip(arrangement, offsets):
            for slot, v in enumerate(members, start=offset):
                perm[v] = slot
        mapped_edges = sorted(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges
        )
        mapped_legs = [()] * num_vertices
        for v in range(num_vertices):
            mapped_legs[perm[v]] = tuple(sorted(legs[v]))
        ser = repr((mapped_edges, mapped_legs))
        if best is None or ser < best:
            best = ser
    assert best is not None
    return best


def count_iso_classes(n: int, edges: int) -> int:
    """Number of iso classes of trees with ``edges`` edges and legs 1..n."""
    num_vertices = edges + 1
    seen = set()
    for tree in labeled_trees(num_vertices):
        for assignment in product(range(num_vertices), repeat=n):
            legs = [set() for _ in range(num_vertices)]
            for leg, vertex in enumerate(assignment, start=1):
                legs[vertex].add(leg)
            legs_f = [frozenset(s) for s in legs]
            seen.add(canonical_string(num_vertices, tree, legs_f))
    return len(seen)


def automorphism_order(
    num_vertices: int, edges: list[tuple[int, int]], legs: list[frozenset[int]]
) -> int:
    """Brute-force order of the leg-fixing automorphism group."""
    edge_set = {(min(u, v), max(u, v)) for u, v in edges}
    count = 0
    for perm in permutations(range(num_vertices)):
        if any(legs[v] != legs[perm[v]] for v in range(num_vertices)):
            continue
        mapped = {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edge_set}
        if mapped == edge_set:
            count += 1
    return count
