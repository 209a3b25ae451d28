"""Brute-force symmetry-vanishing test for decorated trees.

A decorated class vanishes exactly when the signed sum of its expanded
monomial form over the full automorphism group is the zero vector.  This
module computes that sum literally: automorphisms by trying every
leg/edge-preserving vertex permutation, two-term decorations expanded into
plain cotangent-exponent monomials, and the sum accumulated keyed by the
raw (kappa, psi) data on the fixed graph -- no canonicalization anywhere,
so it shares nothing with the main package's vanishing logic.

Handles (attachment points for cotangent exponents) are
``("leg", label)`` or ``("end", edge_index, side)`` with side in {0, 1}
pointing at the smaller/larger endpoint of the edge as stored.
"""

from __future__ import annotations

from itertools import permutations

Handle = tuple
Graph = tuple[int, tuple[tuple[int, int], ...], tuple[frozenset[int], ...]]


def automorphisms(graph: Graph) -> list[tuple[int, ...]]:
    """All vertex permutations preserving the edge set and every leg set."""
    num_vertices, edges, legs = graph
    edge_set = {(min(u, v), max(u, v)) for u, v in edges}
    out = []
    for perm in permutations(range(num_vertices)):
        if any(legs[v] != legs[perm[v]] for v in range(num_vertices)):
            continue
        mapped = {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges}
        if mapped == edge_set:
            out.append(perm)
    return out


def _handle_vertex(graph: Graph, handle: Handle) -> int:
    _, edges, legs = graph
    if handle[0] == "leg":
        for v, s in enumerate(legs):
            if handle[1] in s:
                return v
        raise ValueError(f"leg {handle[1]} not on graph")
    _, idx, side = handle
    return edges[idx][side]


def map_handle(graph: Graph, perm: tuple[int, ...], handle: Handle) -> Handle:
    """Image of a handle under a vertex permutation (legs are fixed)."""
    if handle[0] == "leg":
        return handle
    _, edges, _ = graph
    _, idx, side = handle
    u, v = edges[idx]
    carrier = perm[edges[idx][side]]
    mu, mv = min(perm[u], perm[v]), max(perm[u], perm[v])
    # locate the image edge in the stored edge list
    for jdx, (a, b) in enumerate(edges):
        if (min(a, b), max(a, b)) == (mu, mv):
            new_side = 0 if edges[jdx][0] == carrier else 1
            return ("end", jdx, new_side)
    raise ValueError("permutation does not preserve the edge set")


def expand(
    kappa: dict[int, int],
    psi: dict[Handle, int],
    twoterm: dict[int, tuple[Handle, Handle, int]],
) -> list[tuple[int, dict[int, int], dict[Handle, int]]]:
    """Expand every two-term factor; returns (coeff, kappa, psi) monomials."""
    terms = [(1, dict(psi))]
    for v in sorted(twoterm):
        h_first, h_second, c = twoterm[v]
        nxt = []
        for coeff, mono in terms:
            first = dict(mono)
            first[h_first] = first.get(h_first, 0) + c
            nxt.append((coeff, first))
            second = dict(mono)
            second[h_second] = second.get(h_second, 0) + c
            nxt.append((coeff * (-1) ** c, second))
        terms = nxt
    out = []
    for coeff, mono in terms:
        cleaned = {h: e for h, e in mono.items() if e}
        out.append((coeff, dict(kappa), cleaned))
    return out


def _mono_key(
    graph: Graph,
    perm: tuple[int, ...],
    kappa: dict[int, int],
    psi: dict[Handle, int],
) -> tuple:
    mapped_kappa = tuple(sorted((perm[v], a) for v, a in kappa.items() if a))
    mapped_psi = tuple(
        sorted((map_handle(graph, perm, h), e) for h, e in psi.items())
    )
    return (mapped_kappa, mapped_psi)


def orbit_sum_is_zero(
    graph: Graph,
    kappa: dict[int, int],
    psi: dict[Handle, int],
    twoterm: dict[int, tuple[Handle, Handle, int]],
) -> bool:
    """Whether the Aut-orbit sum of the expanded decoration vanishes."""
    identity = tuple(range(graph[0]))
    monomials = expand(kappa, psi, twoterm)
    acc: dict[tuple, int] = {}
    for perm in automorphisms(graph):
        for coeff, kap, mono in monomials:
            key = _mono_key(graph, perm, kap, mono)
            acc[key] = acc.get(key, 0) + coeff
    # sanity: the identity image alone must be nonzero for a genuine class
    base: dict[tuple, int] = {}
    for coeff, kap, mono in monomials:
        key = _mono_key(graph, identity, kap, mono)
        base[key] = base.get(key, 0) + coeff
    assert any(base.values()), "expansion of the input is already zero"
    return all(value == 0 for value in acc.values())
