"""Relation generation and normalization into the normal-form basis.

Two sources of relations are implemented:

* quadratic four-point relations localized at a single vertex and glued into
  a decorated stratum (splitting the vertex along every admissible
  distribution of its half-edges), enumerated degree by degree; and
* the cotangent-class rewriting rules that express any psi-monomial
  decorated stratum as a combination of normal-form strata — step (i) trades
  a psi power on the second item of a 2-valent vertex for one on the first
  item plus a vertex split, step (ii) lowers a psi power at a vertex of
  valence >= 3 into a sum of vertex splits, and a final telescoping
  conversion turns the surviving 2-valent psi powers into the two-term
  generators (exact division by 2).

All coefficients are exact rationals; every intermediate term is kept in a
canonical decorated form so cancellation is exact and deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import Item, PrestableGraph, adjacency, build_graph, item_order
from .rationals import QQ
from .strata import (
    ALL_LOCUS,
    DecorationState,
    InvariantViolation,
    LocusPredicate,
    MonomialStratum,
    NormalFormStratum,
    StrataVector,
    _canonical_state,
    _is_normal_shape,
    _stratum_from_state,
    enumerate_basis,
)

# -- local relations -------------------------------------------------------

SplitTerm = tuple[frozenset, frozenset, tuple, "QQ"]
MonoTerm = tuple[tuple, "QQ"]


@dataclass(frozen=True)
class LocalRelation:
    """A formal relation among decorations at one abstract vertex.

    ``markings`` are abstract labels for the items at the vertex.  Each
    split term is (side1, side2, psi, coeff): an unordered partition of the
    markings into two nonempty sides (the vertex is cut into two vertices
    joined by a new edge) with psi exponents attached to markings; each mono
    term is (psi, coeff) with no split.  Psi data is a sorted tuple of
    (label, exponent) pairs.
    """

    markings: frozenset
    split_terms: tuple[SplitTerm, ...] = ()
    mono_terms: tuple[MonoTerm, ...] = ()

    def __post_init__(self) -> None:
        degrees = set()
        for side1, side2, psi, coeff in self.split_terms:
            if side1 | side2 != self.markings or side1 & side2:
                raise ValueError("split sides must partition the markings")
            if not side1 or not side2:
                raise ValueError("split sides must be nonempty")
            if any(label not in self.markings for label, _ in psi):
                raise ValueError("psi label outside the marking set")
            if coeff == 0:
                raise ValueError("zero coefficient in relation term")
            degrees.add(1 + sum(e for _, e in psi))
        for psi, coeff in self.mono_terms:
            if any(label not in self.markings for label, _ in psi):
                raise ValueError("psi label outside the marking set")
            if coeff == 0:
                raise ValueError("zero coefficient in relation term")
            degrees.add(sum(e for _, e in psi))
        if len(degrees) > 1:
            raise ValueError("relation terms must be degree-homogeneous")

    def is_empty(self) -> bool:
        return not self.split_terms and not self.mono_terms

    def scale(self, factor: "QQ") -> "LocalRelation":
        if factor == 0:
            return LocalRelation(markings=self.markings)
        return LocalRelation(
            markings=self.markings,
            split_terms=tuple(
                (s1, s2, psi, coeff * factor)
                for s1, s2, psi, coeff in self.split_terms
            ),
            mono_terms=tuple(
                (psi, coeff * factor) for psi, coeff in self.mono_terms
            ),
        )


def make_local_relation(markings, split_terms=(), mono_terms=()) -> LocalRelation:
    """Normalize term representations and merge duplicates."""
    markings = frozenset(markings)
    merged_split: dict[tuple, "QQ"] = {}
    for side1, side2, psi, coeff in split_terms:
        side1, side2 = frozenset(side1), frozenset(side2)
        if sorted(side2) < sorted(side1):
            side1, side2 = side2, side1
        psi = tuple(sorted((label, e) for label, e in psi if e))
        key = (side1, side2, psi)
        merged_split[key] = merged_split.get(key, QQ(0)) + coeff
    merged_mono: dict[tuple, "QQ"] = {}
    for psi, coeff in mono_terms:
        psi = tuple(sorted((label, e) for label, e in psi if e))
        merged_mono[psi] = merged_mono.get(psi, QQ(0)) + coeff
    return LocalRelation(
        markings=markings,
        split_terms=tuple(
            (s1, s2, psi, c)
            for (s1, s2, psi), c in sorted(
                merged_split.items(),
                key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]), kv[0][2]),
            )
            if c != 0
        ),
        mono_terms=tuple(
            (psi, c) for psi, c in sorted(merged_mono.items()) if c != 0
        ),
    )


def _pairing_difference(markings, pair_a, pair_b) -> LocalRelation:
    """Sum of all splits separating pair_a minus those separating pair_b."""
    markings = frozenset(markings)
    terms = []
    for sign, (p, q) in ((QQ(1), pair_a), (QQ(-1), pair_b)):
        rest = sorted(markings - set(p) - set(q))
        for r in range(len(rest) + 1):
            for chosen in itertools.combinations(rest, r):
                side2 = frozenset(q) | frozenset(chosen)
                side1 = markings - side2
                terms.append((side1, side2, (), sign))
    return make_local_relation(markings, split_terms=terms)


def wdvv_local(markings, quad, pairing: int) -> LocalRelation:
    """The four-point relation at one vertex.

    ``quad`` = (i, j, k, l) distinct members of ``markings``; ``pairing`` 0
    gives (ij|kl) − (ik|jl), 1 gives (ij|kl) − (il|jk).  Each side of a
    difference is the sum over all distributions of the remaining markings
    (sides beyond the fixed pairs may be empty of extra markings).
    """
    markings = frozenset(markings)
    if len(markings) < 4:
        raise ValueError("a four-point relation needs at least 4 markings")
    quad = tuple(quad)
    i, j, k, l = quad
    if len(set(quad)) != 4 or not set(quad) <= markings:
        raise ValueError("quad must be 4 distinct members of the markings")
    if pairing not in (0, 1):
        raise ValueError("pairing selects one of the two differences: 0 or 1")
    first = ((i, j), (k, l))
    second = ((i, k), (j, l)) if pairing == 0 else ((i, l), (j, k))
    return _pairing_difference(markings, first, second)


# -- vertex splitting and gluing ------------------------------------------


def split_vertex(
    g: PrestableGraph, v: int, side2_items
) -> tuple[PrestableGraph, int, int, int]:
    """Split vertex v along a partition of its items.

    The items in ``side2_items`` move to a fresh vertex joined to v by a new
    edge (appended last, so existing edge indices — and therefore item
    references at every other vertex — stay valid).  Returns
    (graph, v, new vertex index, new edge index).
    """
    side2 = set(side2_items)
    all_items = set(item_order(g)[v])
    if not side2 <= all_items:
        raise ValueError("side items must be attached at the split vertex")
    if not side2 or side2 == all_items:
        raise ValueError("both sides of a split must be nonempty")
    legs = [set(ls) for ls in g.legs]
    edges = [list(pair) for pair in g.edges]
    new_idx = g.num_vertices
    new_legs: set[int] = set()
    for item in side2:
        if item[0] == "leg":
            legs[v].discard(item[1])
            new_legs.add(item[1])
        else:
            e = item[1]
            edges[e][0 if g.edges[e][0] == v else 1] = new_idx
    legs.append(new_legs)
    edges.append([v, new_idx])
    graph = build_graph(g.n, [frozenset(ls) for ls in legs], [tuple(p) for p in edges])
    return graph, v, new_idx, len(edges) - 1


def _transplanted_state(
    g: PrestableGraph,
    base: DecorationState,
    v: int,
    side2: frozenset,
    new_graph: PrestableGraph,
    new_idx: int,
    side_psi: dict,
) -> DecorationState:
    """Decoration state on a split graph: every decoration away from v rides
    unchanged (edge indices are stable), and ``side_psi`` maps items of v to
    exponents placed on whichever side the item landed on."""
    kappa = dict(base.kappa)
    psi: dict[tuple[int, Item], int] = {}
    twoterm: dict[int, tuple[Item, Item, int]] = {}
    for w, item, e in base.psi:
        if w == v:
            raise InvariantViolation("split vertex must carry no riding psi")
        psi[(w, item)] = e
    for w, h, hp, c in base.twoterm:
        if w == v:
            raise InvariantViolation("split vertex must carry no two-term data")
        twoterm[w] = (h, hp, c)
    for item, e in side_psi.items():
        if not e:
            continue
        vertex = new_idx if item in side2 else v
        psi[(vertex, item)] = psi.get((vertex, item), 0) + e
    return DecorationState.make(kappa=kappa, psi=psi, twoterm=twoterm)


@dataclass
class RelationVector:
    """A StrataVector that vanishes in the quotient, with its provenance."""

    vector: StrataVector
    provenance: str


def glue_relation_at_vertex(
    s: NormalFormStratum,
    v: int,
    rel: LocalRelation,
    identification: dict | None = None,
) -> RelationVector:
    """Insert a local relation at an undecorated vertex of a stratum.

    ``identification`` maps the relation's abstract markings onto the items
    at v (defaults to the identity when the markings already are the items).
    Every glued term is canonicalized; symmetry-vanishing terms drop out.
    """
    items_v = item_order(s.graph)[v]
    if s.exps[v] is not None:
        raise ValueError("relations glue only at undecorated vertices")
    if identification is None:
        if rel.markings != set(items_v):
            raise ValueError(
                "markings are not the vertex items; pass an identification"
            )
        identification = {item: item for item in items_v}
    else:
        if set(identification) != set(rel.markings) or set(
            identification.values()
        ) != set(items_v):
            raise ValueError("identification must biject markings onto items")
    if len(items_v) != len(rel.markings):
        raise ValueError("relation arity does not match the vertex valence")

    base = s.to_state()
    if rel.split_terms:
        degree = s.degree() + 1 + sum(e for _, e in rel.split_terms[0][2])
    elif rel.mono_terms:
        degree = s.degree() + sum(e for _, e in rel.mono_terms[0][0])
    else:
        degree = s.degree() + 1
    out = StrataVector(n=s.graph.n, degree=degree)
    for side1, side2, psi, coeff in rel.split_terms:
        side2_items = frozenset(identification[m] for m in side2)
        new_graph, keep, new_idx, _ = split_vertex(s.graph, v, side2_items)
        side_psi = {identification[m]: e for m, e in psi}
        state = _transplanted_state(
            s.graph, base, v, side2_items, new_graph, new_idx, side_psi
        )
        cg, final, sign, zero = _canonical_state(new_graph, state)
        if zero:
            continue
        if not _is_normal_shape(cg, final):
            raise ValueError("glued term leaves the normal-form basis")
        out.add_term(_stratum_from_state(cg, final), coeff * sign)
    for psi, coeff in rel.mono_terms:
        side_psi = {identification[m]: e for m, e in psi}
        state_psi = {
            (v, item): e for item, e in side_psi.items() if e
        }
        merged = DecorationState.make(
            kappa=dict(base.kappa),
            psi={**{(w, item): e for w, item, e in base.psi}, **state_psi},
            twoterm={w: (h, hp, c) for w, h, hp, c in base.twoterm},
        )
        cg, final, sign, zero = _canonical_state(s.graph, merged)
        if zero:
            continue
        if not _is_normal_shape(cg, final):
            raise ValueError("glued term leaves the normal-form basis")
        out.add_term(_stratum_from_state(cg, final), coeff * sign)
    return RelationVector(vector=out, provenance=f"glued(v={v})")


def wdvv_relations(
    n: int,
    d: int,
    locus: LocusPredicate = ALL_LOCUS,
    base_locus: LocusPredicate | None = None,
) -> list[RelationVector]:
    """All four-point relations in degree d, projected onto the locus.

    For every normal-form basis element of degree d−1 (enumerated over the
    whole moduli by default; ``base_locus`` restricts the bases — see
    chow_rank for when that is sound), every vertex of valence >= 4, every
    4-subset of its items, and both pairing differences, the glued vector is
    emitted with terms outside the locus dropped.  Vectors that project to
    zero are kept so the output layout is locus-independent.
    """
    if d < 1:
        raise ValueError("relations live in degree >= 1")
    bases = enumerate_basis(n, d - 1, base_locus or ALL_LOCUS)
    out: list[RelationVector] = []
    for base_index, s in enumerate(bases):
        items = item_order(s.graph)
        base = s.to_state()
        for v in range(s.graph.num_vertices):
            slots = items[v]
            if len(slots) < 4:
                continue
            # all quad rows at (s, v) reuse the same vertex splits, so each
            # split is canonicalized once
            memo: dict[frozenset, tuple[NormalFormStratum | None, int]] = {}

            def glued_split(side2: frozenset):
                if side2 not in memo:
                    new_graph, _, new_idx, _ = split_vertex(s.graph, v, side2)
                    state = _transplanted_state(
                        s.graph, base, v, side2, new_graph, new_idx, {}
                    )
                    cg, final, sign, zero = _canonical_state(new_graph, state)
                    if zero:
                        memo[side2] = (None, 0)
                    else:
                        if not _is_normal_shape(cg, final):
                            raise InvariantViolation(
                                "four-point gluing left the basis"
                            )
                        memo[side2] = (_stratum_from_state(cg, final), sign)
                return memo[side2]

            for quad_slots in itertools.combinations(range(len(slots)), 4):
                quad = tuple(slots[q] for q in quad_slots)
                for pairing in (0, 1):
                    rel = wdvv_local(frozenset(slots), quad, pairing)
                    vec = StrataVector(n=n, degree=d)
                    for side1, side2, _, coeff in rel.split_terms:
                        stratum, sign = glued_split(side2)
                        if stratum is not None and locus.accepts(stratum.graph):
                            vec.add_term(stratum, coeff * sign)
                    out.append(
                        RelationVector(
                            vector=vec,
                            provenance=(
                                f"wdvv(base={base_index},v={v},"
                                f"quad={quad_slots},pairing={pairing})"
                            ),
                        )
                    )
    return out


# -- psi rewriting ---------------------------------------------------------


def _psi_by_vertex(g: PrestableGraph, state: DecorationState) -> dict:
    per: dict[int, dict[Item, int]] = {}
    for v, item, e in state.psi:
        per.setdefault(v, {})[item] = e
    return per


def _twoterm_vertices(state: DecorationState) -> set[int]:
    return {v for v, _, _, _ in state.twoterm}


def _first_offense(g: PrestableGraph, state: DecorationState):
    """Locate the next rewriting step for a canonical decorated state.

    Returns ("rewrite2", v) / ("rewrite3", v) for the rules at the first
    vertex with an off-shape psi power, ("convert", v) for the first
    2-valent vertex still lacking two-term form, or None when the state is
    already normal-form shaped.
    """
    per = _psi_by_vertex(g, state)
    items = item_order(g)
    for v in range(g.num_vertices):
        val = g.valence(v)
        if val >= 3 and per.get(v):
            return ("rewrite3", v)
        if val == 2 and per.get(v, {}).get(items[v][1], 0) >= 1:
            return ("rewrite2", v)
    converted = _twoterm_vertices(state)
    for v in range(g.num_vertices):
        if g.valence(v) == 2 and v not in converted:
            return ("convert", v)
    return None


def _measure(g: PrestableGraph, state: DecorationState) -> tuple[int, int, int]:
    """(total psi degree, unconverted 2-valent vertices, second-slot sum):
    every rewriting or conversion step strictly lowers this lexicographically."""
    items = item_order(g)
    converted = _twoterm_vertices(state)
    psi_total = sum(e for _, _, e in state.psi)
    unconverted = sum(
        1
        for v in range(g.num_vertices)
        if g.valence(v) == 2 and v not in converted
    )
    second = sum(
        e
        for v, item, e in state.psi
        if g.valence(v) == 2 and item == items[v][1]
    )
    return (psi_total, unconverted, second)


def _state_without_psi_at(state: DecorationState, v: int) -> DecorationState:
    return DecorationState(
        kappa=state.kappa,
        psi=tuple(t for t in state.psi if t[0] != v),
        twoterm=state.twoterm,
    )


def _apply_step(
    g: PrestableGraph,
    state: DecorationState,
    kind: str,
    v: int,
    refs_chooser=None,
) -> list[tuple[PrestableGraph, DecorationState, "QQ"]]:
    """One rewriting/conversion step; returns raw (graph, state, coeff) terms."""
    items = item_order(g)
    per = _psi_by_vertex(g, state).get(v, {})
    stripped = _state_without_psi_at(state, v)
    out: list[tuple[PrestableGraph, DecorationState, "QQ"]] = []

    def with_psi_at_v(extra: dict[Item, int]) -> DecorationState:
        psi = {(w, item): e for w, item, e in stripped.psi}
        for item, e in extra.items():
            if e:
                psi[(v, item)] = e
        return DecorationState.make(
            kappa=dict(stripped.kappa),
            psi=psi,
            twoterm={w: (h, hp, c) for w, h, hp, c in stripped.twoterm},
        )

    def split_term(side2_items, side_psi: dict[Item, int]):
        side2 = frozenset(side2_items)
        new_graph, _, new_idx, _ = split_vertex(g, v, side2)
        return new_graph, _transplanted_state(
            g, stripped, v, side2, new_graph, new_idx, side_psi
        )

    if kind == "rewrite2":
        h, hp = items[v]
        a = per.get(h, 0)
        b = per.get(hp, 0)
        out.append((g, with_psi_at_v({h: a + 1, hp: b - 1}), QQ(-1)))
        ng, ns = split_term({hp}, {h: a, hp: b - 1})
        out.append((ng, ns, QQ(1)))
    elif kind == "rewrite3":
        h = next(item for item in items[v] if per.get(item, 0) > 0)
        a = per[h]
        others = [item for item in items[v] if item != h]
        if refs_chooser is not None:
            j, l = refs_chooser(g, v, h, others)
            if {j, l} - set(others) or j == l:
                raise ValueError("references must be two distinct other items")
        else:
            j, l = others[0], others[1]
        rest = [item for item in others if item not in (j, l)]
        riding = {item: e for item, e in per.items() if item != h}
        for r in range(len(rest) + 1):
            for chosen in itertools.combinations(rest, r):
                side2 = frozenset({j, l}) | frozenset(chosen)
                side_psi = dict(riding)
                side_psi[h] = side_psi.get(h, 0) + a - 1
                ng, ns = split_term(side2, side_psi)
                out.append((ng, ns, QQ(1)))
    elif kind == "convert":
        h, hp = items[v]
        c = per.get(h, 0)
        if per.get(hp, 0):
            raise InvariantViolation("conversion requires first-slot form")
        converted = with_psi_at_v({})
        twoterm = {w: (hh, hhp, cc) for w, hh, hhp, cc in converted.twoterm}
        twoterm[v] = (h, hp, c)
        out.append(
            (
                g,
                DecorationState.make(
                    kappa=dict(converted.kappa),
                    psi={(w, item): e for w, item, e in converted.psi},
                    twoterm=twoterm,
                ),
                QQ(1, 2),
            )
        )
        for m in range(c):
            ng, ns = split_term({hp}, {h: c - 1 - m, hp: m})
            out.append((ng, ns, QQ(1, 2) * (-1) ** m))
    else:
        raise ValueError(f"unknown step kind {kind!r}")
    return out


def psi_rewrite_step(
    m: MonomialStratum, refs_chooser=None
) -> list[tuple[MonomialStratum, "QQ"]]:
    """One rewriting step at the first off-shape vertex of a psi monomial.

    Raises when no rule applies (the monomial is already rewriting-terminal).
    Returns canonical (monomial, coefficient) terms whose lexicographic
    measure is strictly below the input's.
    """
    cg, state, sign, zero = _canonical_state(m.graph, m.to_state())
    if zero:
        raise InvariantViolation("monomials never vanish by symmetry")
    offense = _first_offense(cg, state)
    if offense is None or offense[0] == "convert":
        raise ValueError("no rewriting rule applies to this monomial")
    kind, v = offense
    before = _measure(cg, state)
    out: list[tuple[MonomialStratum, "QQ"]] = []
    for raw_graph, raw_state, coeff in _apply_step(
        cg, state, kind, v, refs_chooser
    ):
        tg, tstate, tsign, tzero = _canonical_state(raw_graph, raw_state)
        if tzero:
            continue
        if not _measure(tg, tstate) < before:
            raise InvariantViolation("rewriting step failed to decrease measure")
        mono = MonomialStratum(
            graph=tg, psi=tstate.psi, kappa=tstate.kappa
        )
        out.append((mono, coeff * sign * tsign))
    return out


def normalize(m: MonomialStratum, refs_chooser=None) -> StrataVector:
    """Express a psi/kappa monomial in the normal-form basis.

    Runs the rewriting rules to their fixed point and then converts each
    2-valent psi power into the two-term generator (an exact division by 2),
    merging canonically equal terms at every step.
    """
    n, deg = m.graph.n, m.degree()
    result = StrataVector(n=n, degree=deg)
    work: dict[tuple, tuple[PrestableGraph, DecorationState, "QQ"]] = {}

    def push(graph, state, coeff, *, canonical=False):
        if canonical:
            cg, final, sign, zero = graph, state, 1, False
        else:
            cg, final, sign, zero = _canonical_state(graph, state)
        if zero:
            return
        key = (cg.graph_key(), final.kappa, final.psi, final.twoterm)
        if key in work:
            merged = work[key][2] + coeff * sign
            if merged == 0:
                del work[key]
            else:
                work[key] = (cg, final, merged)
        else:
            work[key] = (cg, final, coeff * sign)

    push(m.graph, m.to_state(), QQ(1))
    while work:
        key = min(work)
        cg, state, coeff = work.pop(key)
        offense = _first_offense(cg, state)
        if offense is None:
            result.add_term(_stratum_from_state(cg, state), coeff)
            continue
        kind, v = offense
        before = _measure(cg, state)
        for raw_graph, raw_state, term_coeff in _apply_step(
            cg, state, kind, v, refs_chooser
        ):
            tg, tstate, tsign, tzero = _canonical_state(raw_graph, raw_state)
            if tzero:
                continue
            if not _measure(tg, tstate) < before:
                raise InvariantViolation(
                    "rewriting step failed to decrease measure"
                )
            push(tg, tstate, coeff * term_coeff * tsign, canonical=True)
    return result
