"""Brute-force generator/relation computation for the stable locus.

Independent of the main package: stable leg-labeled trees are enumerated by
repeated vertex splitting with a min-over-all-permutations canonical form,
boundary relations are produced per (graph, vertex, 4-subset, pairing), and
ranks come from dense Fraction Gaussian elimination.  Everything works on
plain tuples; vertex counts stay tiny (a tree with d edges has d+1 vertices
and d is at most n-3 here), so brute force is exact and fast enough.

Run as a script to print the dimension tables for n = 5 and n = 6:

    python tests/oracles/keel_km_oracle.py
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

# A graph is (num_vertices, edges, legs):
#   edges: tuple of (u, v) pairs with u < v, legs: tuple of frozensets.
Graph = tuple[int, tuple[tuple[int, int], ...], tuple[frozenset[int], ...]]


def _canon(graph: Graph) -> str:
    num_vertices, edges, legs = graph
    best = None
    for perm in permutations(range(num_vertices)):
        mapped_edges = tuple(
            sorted((min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges)
        )
        mapped_legs = [()] * num_vertices
        for v in range(num_vertices):
            mapped_legs[perm[v]] = tuple(sorted(legs[v]))
        ser = repr((mapped_edges, tuple(mapped_legs)))
        if best is None or ser < best:
            best = ser
    assert best is not None
    return best


def _valences(graph: Graph) -> list[int]:
    num_vertices, edges, legs = graph
    val = [len(s) for s in legs]
    for u, v in edges:
        val[u] += 1
        val[v] += 1
    return val


def _items(graph: Graph, v: int) -> list[tuple]:
    """Incident items at v: ('leg', label) and ('end', edge_index)."""
    _, edges, legs = graph
    out: list[tuple] = [("leg", label) for label in sorted(legs[v])]
    for idx, (a, b) in enumerate(edges):
        if a == v or b == v:
            out.append(("end", idx))
    return out


def _split_vertex(graph: Graph, v: int, side2: frozenset) -> Graph:
    """Replace v by v--w where the items in ``side2`` move to the new w."""
    num_vertices, edges, legs = graph
    w = num_vertices
    new_legs = [set(s) for s in legs] + [set()]
    new_edges = list(edges)
    for item in side2:
        if item[0] == "leg":
            new_legs[v].discard(item[1])
            new_legs[w].add(item[1])
        else:
            idx = item[1]
            a, b = new_edges[idx]
            other = b if a == v else a
            new_edges[idx] = (min(other, w), max(other, w))
    new_edges.append((v, w))
    return (
        num_vertices + 1,
        tuple(sorted(new_edges)),
        tuple(frozenset(s) for s in new_legs),
    )


def stable_graphs(n: int, d: int) -> list[Graph]:
    """One representative per iso class of stable trees, n legs, d edges."""
    if n < 3:
        return []
    base: Graph = (1, (), (frozenset(range(1, n + 1)),))
    level = {_canon(base): base}
    for _ in range(d):
        nxt: dict[str, Graph] = {}
        for graph in level.values():
            num_vertices = graph[0]
            for v in range(num_vertices):
                items = _items(graph, v)
                if len(items) < 4:
                    continue
                # both sides need >= 2 items so that valence stays >= 3
                for r in range(2, len(items) - 1):
                    for side2 in combinations(items, r):
                        new_graph = _split_vertex(graph, v, frozenset(side2))
                        nxt.setdefault(_canon(new_graph), new_graph)
        level = nxt
    return [level[key] for key in sorted(level)]


def km_relation_rows(n: int, d: int) -> tuple[list[dict[str, int]], list[str]]:
    """Boundary-relation rows over the canonical keys of d-edge graphs."""
    columns = sorted(_canon(g) for g in stable_graphs(n, d))
    column_set = set(columns)
    rows: list[dict[str, int]] = []
    for graph in stable_graphs(n, d - 1):
        for v in range(graph[0]):
            items = _items(graph, v)
            if len(items) < 4:
                continue
            for quad in combinations(range(len(items)), 4):
                p, q, r, s = [items[i] for i in quad]
                others = [it for i, it in enumerate(items) if i not in quad]
                first_pair = ((p, q), (r, s))
                for second_pair in (((p, r), (q, s)), ((p, s), (q, r))):
                    row: dict[str, int] = {}
                    for pair, sign in ((first_pair, 1), (second_pair, -1)):
                        (x1, y1), (x2, y2) = pair
                        for k in range(len(others) + 1):
                            for extra in combinations(others, k):
                                side2 = frozenset((x2, y2) + tuple(extra))
                                term = _split_vertex(graph, v, side2)
                                key = _canon(term)
                                assert key in column_set
                                row[key] = row.get(key, 0) + sign
                    row = {k: c for k, c in row.items() if c}
                    if row:
                        rows.append(row)
    return rows, columns


def dense_rank(rows: list[dict[str, int]], columns: list[str]) -> int:
    """Textbook Gaussian elimination over Fraction."""
    col_index = {key: i for i, key in enumerate(columns)}
    matrix = [
        [Fraction(row.get(key, 0)) for key in columns] for row in rows
    ]
    rank = 0
    num_cols = len(columns)
    for col in range(num_cols):
        pivot_row = None
        for r in range(rank, len(matrix)):
            if matrix[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        pivot = matrix[rank][col]
        for r in range(rank + 1, len(matrix)):
            factor = matrix[r][col] / pivot
            if factor:
                for c in range(col, num_cols):
                    matrix[r][c] -= factor * matrix[rank][c]
        rank += 1
        if rank == len(matrix):
            break
    return rank


def chow_dimensions(n: int) -> list[int]:
    """dim CH^d of the stable n-marked moduli for d = 0..n-3, brute force."""
    dims = []
    for d in range(n - 2):
        generators = len(stable_graphs(n, d))
        if d == 0:
            dims.append(generators)
            continue
        rows, columns = km_relation_rows(n, d)
        dims.append(generators - dense_rank(rows, columns))
    return dims


if __name__ == "__main__":
    for n in (5, 6):
        print(f"n={n}: {chow_dimensions(n)}")
