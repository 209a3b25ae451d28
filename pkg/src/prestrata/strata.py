"""Decorated strata: normal forms, signs, vanishing, and basis enumeration.

A decorated class is a canonical graph together with exponents whose shape is
dictated by vertex valence:

* valence 0 — a power ``a`` of the degree-2 kappa class (degree ``2a``);
* valence 1 — a cotangent exponent ``b`` at the unique item (degree ``b``);
* valence 2 — a two-term exponent ``c`` meaning "psi at the first item to the
  c-th power plus (minus psi at the second item) to the c-th power"
  (degree ``c``), the item pair ordered canonically;
* valence >= 3 — no decoration.

Reordering a two-term pair flips the class by ``(-1)^c``; consequently a
class whose graph has an automorphism carrying it to minus itself is zero.
That happens exactly when the tree has a unique centroid which is a leg-free
2-valent vertex whose two branches are isomorphic as decorated rooted trees
and whose two-term exponent is odd; the canonicalizer below tracks the sign
and the vanishing flag while minimizing the exponent record over graph
automorphisms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graphs import (
    Item,
    PrestableGraph,
    adjacency,
    canonicalize_graph,
    centroids,
    contract_edge,
    dir_key,
    enumerate_graphs,
    item_neighbor,
    item_order,
)
from .rationals import QQ, qq_from_str, qq_str


@dataclass(frozen=True)
class DecorationState:
    """Exponent data pinned to a specific labeling of a specific graph.

    ``psi`` entries are (vertex, item, exponent) with exponent >= 1;
    ``twoterm`` entries are (vertex, first item, second item, exponent) where
    the item pair is an explicit orientation and the exponent may be 0 (the
    presence of a two-term entry is meaningful: it marks the vertex as
    carrying the two-term decoration rather than a plain monomial);
    ``kappa`` entries are (vertex, power) with power >= 1, allowed only at
    0-valent vertices.
    """

    kappa: tuple[tuple[int, int], ...] = ()
    psi: tuple[tuple[int, Item, int], ...] = ()
    twoterm: tuple[tuple[int, Item, Item, int], ...] = ()

    @staticmethod
    def make(
        kappa: dict[int, int] | None = None,
        psi: dict[tuple[int, Item], int] | None = None,
        twoterm: dict[int, tuple[Item, Item, int]] | None = None,
    ) -> "DecorationState":
        return DecorationState(
            kappa=tuple(sorted((v, a) for v, a in (kappa or {}).items() if a)),
            psi=tuple(
                sorted((v, item, e) for (v, item), e in (psi or {}).items() if e)
            ),
            twoterm=tuple(
                sorted((v, h, hp, c) for v, (h, hp, c) in (twoterm or {}).items())
            ),
        )

    def degree(self) -> int:
        return (
            2 * sum(a for _, a in self.kappa)
            + sum(e for _, _, e in self.psi)
            + sum(c for _, _, _, c in self.twoterm)
        )


class InvariantViolation(AssertionError):
    """An internal consistency check failed (exit code 1 at the CLI)."""


def _validate_state(g: PrestableGraph, state: DecorationState) -> None:
    items = item_order(g)
    for v, a in state.kappa:
        if g.valence(v) != 0:
            raise ValueError("kappa decorations are only allowed at 0-valent vertices")
        if a < 1:
            raise ValueError("stored kappa powers must be positive")
    twoterm_vertices = set()
    for v, h, hp, c in state.twoterm:
        if g.valence(v) != 2:
            raise ValueError("two-term decorations require a 2-valent vertex")
        if {h, hp} != set(items[v]) or h == hp:
            raise ValueError("two-term item pair must be the vertex's two items")
        if c < 0:
            raise ValueError("two-term exponent must be nonnegative")
        if v in twoterm_vertices:
            raise ValueError("duplicate two-term entry")
        twoterm_vertices.add(v)
    for v, item, e in state.psi:
        if item not in items[v]:
            raise ValueError(f"psi item {item} not attached at vertex {v}")
        if e < 1:
            raise ValueError("stored psi exponents must be positive")
        if v in twoterm_vertices:
            raise ValueError("a vertex cannot carry both psi and two-term data")


# -- canonicalization of decorated data ----------------------------------


def _map_state_to_canonical(
    g: PrestableGraph, state: DecorationState
) -> tuple[PrestableGraph, dict, dict, dict, dict, int]:
    """Transport a state through the graph relabeling.

    Returns (canonical graph, psi_leg, psi_end, tt, kappa, orientation sign)
    where psi_leg maps (vertex, label) -> exp, psi_end maps
    (vertex, neighbor) -> exp, tt maps vertex -> two-term exponent with the
    orientation normalized to the canonical item order (each reversal costs
    a factor (-1)^c folded into the sign).
    """
    cg, relabel = canonicalize_graph(g)
    edge_index = {pair: idx for idx, pair in enumerate(cg.edges)}

    def map_handle(v: int, item: Item) -> tuple[int, Item]:
        nv = relabel[v]
        if item[0] == "leg":
            return nv, item
        u, w = g.edges[item[1]]
        pair = (min(relabel[u], relabel[w]), max(relabel[u], relabel[w]))
        return nv, ("end", edge_index[pair])

    psi_leg: dict[tuple[int, int], int] = {}
    psi_end: dict[tuple[int, int], int] = {}
    for v, item, e in state.psi:
        nv, mapped = map_handle(v, item)
        if mapped[0] == "leg":
            psi_leg[(nv, mapped[1])] = e
        else:
            psi_end[(nv, item_neighbor(cg, nv, mapped))] = e
    kappa = {relabel[v]: a for v, a in state.kappa}
    tt: dict[int, int] = {}
    sign = 1
    canonical_items = item_order(cg)
    for v, h, hp, c in state.twoterm:
        nv, mh = map_handle(v, h)
        _, mhp = map_handle(v, hp)
        pair = canonical_items[nv]
        if (mh, mhp) == pair:
            pass
        elif (mhp, mh) == pair:
            if c % 2 == 1:
                sign = -sign
        else:
            raise InvariantViolation("two-term pair does not map onto item pair")
        tt[nv] = c
    return cg, psi_leg, psi_end, tt, kappa, sign


def _canonical_state(
    g: PrestableGraph, state: DecorationState
) -> tuple[PrestableGraph, DecorationState, int, bool]:
    """Full decorated canonical form.

    Returns (canonical graph, canonical state, sign, zero) where the
    canonical state realizes the lexicographically least exponent record over
    all automorphisms of the canonical graph, sign in {+1, -1} relates the
    input to that representative, and zero means the class cancels against
    itself (odd two-term exponent on a centrally symmetric graph).
    """
    _validate_state(g, state)
    cg, psi_leg, psi_end, tt, kappa, sign = _map_state_to_canonical(g, state)
    adj = adjacency(cg)

    def dmin(v: int, parent: int | None) -> tuple[tuple, list[int]]:
        """Minimal decorated record of v's subtree plus its DFS sequence."""
        legs_part = tuple(
            (label, psi_leg.get((v, label), 0)) for label in sorted(cg.legs[v])
        )
        par_part = psi_end.get((v, parent), 0) if parent is not None else -1
        kap = kappa.get(v, 0)
        ttv = tt.get(v, -1)
        children = [w for w, _ in adj[v] if w != parent]
        groups: dict[tuple, list[int]] = {}
        for w in children:
            groups.setdefault(dir_key(cg, w, v), []).append(w)
        exps_final: list[int] = []
        recs_final: list[tuple] = []
        seq: list[int] = [v]
        for code in sorted(groups):
            entries = []
            for w in sorted(groups[code]):
                rec_w, seq_w = dmin(w, v)
                entries.append((psi_end.get((v, w), 0), rec_w, seq_w))
            entries.sort(key=lambda t: (t[0], t[1]))
            for e_w, rec_w, seq_w in entries:
                exps_final.append(e_w)
                recs_final.append(rec_w)
                seq.extend(seq_w)
        record = (kap, legs_part, par_part, ttv, tuple(exps_final), tuple(recs_final))
        return record, seq

    def run_root(root: int) -> tuple[tuple, list[int], int, bool]:
        """Record/sequence rooted at ``root`` with the central sign rule."""
        root_sign = 1
        zero = False
        children = [w for w, _ in adj[root]]
        if (
            len(children) == 2
            and not cg.legs[root]
            and dir_key(cg, children[0], root) == dir_key(cg, children[1], root)
        ):
            # leg-free 2-valent root with isomorphic undecorated branches:
            # the branch swap is the only automorphism able to reverse a
            # two-term pair, so the sign and the vanishing test live here.
            c1, c2 = sorted(children)
            e1 = psi_end.get((root, c1), 0)
            e2 = psi_end.get((root, c2), 0)
            rec1, seq1 = dmin(c1, root)
            rec2, seq2 = dmin(c2, root)
            ttv = tt.get(root, -1)
            if (e1, rec1) == (e2, rec2):
                if ttv >= 0 and ttv % 2 == 1:
                    zero = True
                ordered = [(e1, rec1, seq1), (e2, rec2, seq2)]
            elif (e2, rec2) < (e1, rec1):
                ordered = [(e2, rec2, seq2), (e1, rec1, seq1)]
                if ttv >= 0 and ttv % 2 == 1:
                    root_sign = -1
            else:
                ordered = [(e1, rec1, seq1), (e2, rec2, seq2)]
            legs_part: tuple = ()
            kap = kappa.get(root, 0)
            record = (
                kap,
                legs_part,
                -1,
                ttv,
                tuple(e for e, _, _ in ordered),
                tuple(rec for _, rec, _ in ordered),
            )
            seq = [root]
            for _, _, seq_w in ordered:
                seq.extend(seq_w)
            return record, seq, root_sign, zero
        record, seq = dmin(root, None)
        return record, seq, 1, False

    cents = centroids(cg)
    candidates = [0]
    if len(cents) == 2:
        other = cents[1] if cents[0] == 0 else cents[0]
        if dir_key(cg, 0, None) == dir_key(cg, other, None):
            candidates.append(other)
    best = None
    for root in candidates:
        rec, seq, s, zero = run_root(root)
        if best is None or (rec, root) < (best[0], best[4]):
            best = (rec, seq, s, zero, root)
    record, seq, root_sign, zero, _ = best
    sign *= root_sign
    if zero:
        return cg, DecorationState(), 0, True

    # transport decorations along the chosen arrangement: position p in the
    # DFS sequence becomes the final index of vertex seq[p]
    pi = [0] * cg.num_vertices
    for position, old in enumerate(seq):
        pi[old] = position
    mapped_edges = frozenset(
        (min(pi[u], pi[w]), max(pi[u], pi[w])) for u, w in cg.edges
    )
    if mapped_edges != frozenset(cg.edges) or any(
        cg.legs[old] != cg.legs[pi[old]] for old in range(cg.num_vertices)
    ):
        raise InvariantViolation("minimizing arrangement is not an automorphism")

    new_kappa = {pi[v]: a for v, a in kappa.items()}
    new_psi: dict[tuple[int, Item], int] = {}
    edge_index = {pair: idx for idx, pair in enumerate(cg.edges)}
    for (v, label), e in psi_leg.items():
        new_psi[(pi[v], ("leg", label))] = e
    for (v, w), e in psi_end.items():
        pair = (min(pi[v], pi[w]), max(pi[v], pi[w]))
        new_psi[(pi[v], ("end", edge_index[pair]))] = e
    canonical_items = item_order(cg)
    new_twoterm: dict[int, tuple[Item, Item, int]] = {}
    for v, c in tt.items():
        h, hp = canonical_items[pi[v]]
        new_twoterm[pi[v]] = (h, hp, c)
    final = DecorationState.make(kappa=new_kappa, psi=new_psi, twoterm=new_twoterm)
    return cg, final, sign, False


# -- normal-form strata ---------------------------------------------------


@dataclass(frozen=True)
class NormalFormStratum:
    """A basis key: canonical graph plus the per-vertex exponent record.

    ``exps[v]`` is an int for vertices of valence <= 2 (kappa power, psi
    exponent, or two-term exponent respectively) and None for valence >= 3.
    """

    graph: PrestableGraph
    exps: tuple[int | None, ...]

    def __post_init__(self) -> None:
        if len(self.exps) != self.graph.num_vertices:
            raise ValueError("exponent record length must match vertex count")
        for v, e in enumerate(self.exps):
            valence = self.graph.valence(v)
            if valence >= 3:
                if e is not None:
                    raise ValueError(f"vertex {v} (valence {valence}) is undecorated")
            else:
                if e is None or e < 0:
                    raise ValueError(f"vertex {v} needs a nonnegative exponent")

    def degree(self) -> int:
        total = len(self.graph.edges)
        for v, e in enumerate(self.exps):
            if e is None:
                continue
            total += 2 * e if self.graph.valence(v) == 0 else e
        return total

    def sort_key(self) -> tuple:
        return (
            len(self.graph.edges),
            self.graph.graph_key(),
            tuple(-1 if e is None else e for e in self.exps),
        )

    def key(self) -> str:
        return self.to_json()

    def to_state(self) -> DecorationState:
        items = item_order(self.graph)
        kappa: dict[int, int] = {}
        psi: dict[tuple[int, Item], int] = {}
        twoterm: dict[int, tuple[Item, Item, int]] = {}
        for v, e in enumerate(self.exps):
            if e is None:
                continue
            valence = self.graph.valence(v)
            if valence == 0:
                if e:
                    kappa[v] = e
            elif valence == 1:
                if e:
                    psi[(v, items[v][0])] = e
            else:
                h, hp = items[v]
                twoterm[v] = (h, hp, e)
        return DecorationState.make(kappa=kappa, psi=psi, twoterm=twoterm)

    def to_json_obj(self) -> dict:
        exps = []
        kinds = {0: "kappa2", 1: "psi", 2: "twoterm"}
        for v, e in enumerate(self.exps):
            if e is None:
                continue
            exps.append({"v": v, "kind": kinds[self.graph.valence(v)], "e": e})
        return {"graph": self.graph.to_json_obj(), "exps": exps}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_obj(obj: dict) -> "NormalFormStratum":
        graph = PrestableGraph.from_json_obj(obj["graph"])
        kinds = {0: "kappa2", 1: "psi", 2: "twoterm"}
        exps: list[int | None] = [
            0 if graph.valence(v) <= 2 else None for v in range(graph.num_vertices)
        ]
        for rec in obj.get("exps", []):
            v = rec["v"]
            valence = graph.valence(v)
            if valence >= 3:
                raise ValueError("decorated vertex must have valence <= 2")
            if rec.get("kind") != kinds[valence]:
                raise ValueError(
                    f"vertex {v} has valence {valence}; kind must be {kinds[valence]}"
                )
            exps[v] = rec["e"]
        return NormalFormStratum(graph=graph, exps=tuple(exps))


def _stratum_from_state(cg: PrestableGraph, state: DecorationState) -> NormalFormStratum:
    """Package a canonical normal-form-shaped state as a stratum."""
    exps: list[int | None] = []
    kappa = dict(state.kappa)
    psi = {(v, item): e for v, item, e in state.psi}
    tt = {v: c for v, _, _, c in state.twoterm}
    items = item_order(cg)
    for v in range(cg.num_vertices):
        valence = cg.valence(v)
        if valence == 0:
            exps.append(kappa.get(v, 0))
        elif valence == 1:
            exps.append(psi.get((v, items[v][0]), 0))
        elif valence == 2:
            if v not in tt:
                raise InvariantViolation("2-valent vertex missing two-term data")
            exps.append(tt[v])
        else:
            exps.append(None)
    return NormalFormStratum(graph=cg, exps=tuple(exps))


def degree(s: NormalFormStratum) -> int:
    """Total degree: edge count plus decoration degrees (kappa counts double)."""
    return s.degree()


def canonicalize_decorated(
    g: PrestableGraph,
    exps: DecorationState | list[int | None] | tuple[int | None, ...],
    coeff: "QQ" = QQ(1),
) -> tuple[NormalFormStratum | None, "QQ"]:
    """Canonical representative of a decorated class with the sign folded in.

    ``exps`` is either a DecorationState (explicit two-term orientations) or
    a per-vertex exponent list read against ``g``'s own item order.  Returns
    (stratum, coeff * sign), or (None, 0) when the class is symmetry-zero.
    """
    if isinstance(exps, DecorationState):
        state = exps
    else:
        state = _state_from_raw_exps(g, exps)
    cg, final, sign, zero = _canonical_state(g, state)
    if zero:
        return None, QQ(0)
    if not _is_normal_shape(cg, final):
        raise ValueError("decoration is not normal-form shaped")
    return _stratum_from_state(cg, final), coeff * sign


def _state_from_raw_exps(
    g: PrestableGraph, exps: list[int | None] | tuple[int | None, ...]
) -> DecorationState:
    """Per-vertex ints on an arbitrary labeling, read via g's item order."""
    items = item_order(g)
    kappa: dict[int, int] = {}
    psi: dict[tuple[int, Item], int] = {}
    twoterm: dict[int, tuple[Item, Item, int]] = {}
    for v, e in enumerate(exps):
        valence = g.valence(v)
        if valence >= 3:
            if e is not None:
                raise ValueError("vertices of valence >= 3 take no exponent")
            continue
        if e is None or e < 0:
            raise ValueError("vertices of valence <= 2 need a nonnegative exponent")
        if valence == 0:
            if e:
                kappa[v] = e
        elif valence == 1:
            if e:
                psi[(v, items[v][0])] = e
        else:
            h, hp = items[v]
            twoterm[v] = (h, hp, e)
    return DecorationState.make(kappa=kappa, psi=psi, twoterm=twoterm)


def _is_normal_shape(g: PrestableGraph, state: DecorationState) -> bool:
    """Normal form: kappa at 0-valent, psi only at 1-valent vertices' items,
    a two-term entry at every 2-valent vertex, nothing elsewhere."""
    tt_vertices = {v for v, _, _, _ in state.twoterm}
    for v in range(g.num_vertices):
        if g.valence(v) == 2 and v not in tt_vertices:
            return False
    for v, _, _ in state.psi:
        if g.valence(v) != 1:
            return False
    return True


def is_zero_by_symmetry(s: NormalFormStratum) -> bool:
    """True when some automorphism carries the class to minus itself."""
    _, _, _, zero = _canonical_state(s.graph, s.to_state())
    return zero


@dataclass(frozen=True)
class MonomialStratum:
    """A decorated stratum whose decoration is a plain psi monomial (any
    vertex, any item) plus kappa powers at 0-valent vertices — the input
    language of the normalizer.  Unlike normal forms, psi exponents may sit
    at vertices of any valence; two-term data is not allowed here.
    """

    graph: PrestableGraph
    psi: tuple[tuple[int, Item, int], ...] = ()
    kappa: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        items = item_order(self.graph)
        for v, a in self.kappa:
            if self.graph.valence(v) != 0:
                raise ValueError(
                    "kappa decorations are only supported at 0-valent vertices"
                )
            if a < 1:
                raise ValueError("kappa powers must be positive")
        seen = set()
        for v, item, e in self.psi:
            if item not in items[v]:
                raise ValueError(f"psi item {item} not attached at vertex {v}")
            if e < 1:
                raise ValueError("psi exponents must be positive")
            if (v, item) in seen:
                raise ValueError("duplicate psi entry")
            seen.add((v, item))

    def degree(self) -> int:
        return (
            len(self.graph.edges)
            + sum(e for _, _, e in self.psi)
            + 2 * sum(a for _, a in self.kappa)
        )

    def to_state(self) -> DecorationState:
        return DecorationState.make(
            kappa=dict(self.kappa),
            psi={(v, item): e for v, item, e in self.psi},
        )

    def to_json_obj(self) -> dict:
        items = item_order(self.graph)
        exps = [{"v": v, "kind": "kappa2", "e": a} for v, a in sorted(self.kappa)]
        for v, item, e in sorted(self.psi):
            exps.append(
                {"v": v, "kind": "psi", "slot": items[v].index(item), "e": e}
            )
        return {"graph": self.graph.to_json_obj(), "exps": exps}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_obj(obj: dict) -> "MonomialStratum":
        graph = PrestableGraph.from_json_obj(obj["graph"])
        items = item_order(graph)
        psi: dict[tuple[int, Item], int] = {}
        kappa: dict[int, int] = {}
        for rec in obj.get("exps", []):
            v, kind, e = rec["v"], rec["kind"], rec["e"]
            if kind == "kappa2":
                kappa[v] = kappa.get(v, 0) + e
            elif kind == "psi":
                item = items[v][rec["slot"]]
                psi[(v, item)] = psi.get((v, item), 0) + e
            else:
                raise ValueError(
                    f"monomial decorations must be kappa2 or psi, not {kind!r}"
                )
        return MonomialStratum(
            graph=graph,
            psi=tuple(sorted((v, item, e) for (v, item), e in psi.items() if e)),
            kappa=tuple(sorted((v, a) for v, a in kappa.items() if a)),
        )


# -- strata vectors -------------------------------------------------------


@dataclass
class StrataVector:
    """A finite rational combination of normal-form strata, one degree."""

    n: int
    degree: int
    terms: dict[NormalFormStratum, "QQ"] = field(default_factory=dict)

    def add_term(self, s: NormalFormStratum, coeff: "QQ") -> None:
        if s.graph.n != self.n or s.degree() != self.degree:
            raise ValueError("term does not match the vector's n/degree")
        new = self.terms.get(s, QQ(0)) + coeff
        if new == 0:
            self.terms.pop(s, None)
        else:
            self.terms[s] = new

    def add(self, other: "StrataVector") -> "StrataVector":
        if (other.n, other.degree) != (self.n, self.degree):
            raise ValueError("mismatched vectors")
        out = StrataVector(self.n, self.degree, dict(self.terms))
        for s, c in other.terms.items():
            out.add_term(s, c)
        return out

    def scale(self, factor: "QQ") -> "StrataVector":
        if factor == 0:
            return StrataVector(self.n, self.degree, {})
        return StrataVector(
            self.n, self.degree, {s: c * factor for s, c in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def restrict(self, locus: "LocusPredicate") -> "StrataVector":
        return StrataVector(
            self.n,
            self.degree,
            {s: c for s, c in self.terms.items() if locus.accepts(s.graph)},
        )

    def sorted_terms(self) -> list[tuple[NormalFormStratum, "QQ"]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [
                {"stratum": s.to_json_obj(), "coeff": qq_str(c)}
                for s, c in self.sorted_terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_obj(obj: dict) -> "StrataVector":
        vec = StrataVector(n=obj["n"], degree=obj["degree"])
        for rec in obj["terms"]:
            vec.add_term(
                NormalFormStratum.from_json_obj(rec["stratum"]),
                qq_from_str(rec["coeff"]),
            )
        return vec


# -- loci ------------------------------------------------------------------


@dataclass(frozen=True)
class LocusPredicate:
    """A generization-closed graph predicate selecting an open union of
    strata.  Canonical names: all, max-nodes=E, stable, semistable, chain-T.
    """

    kind: str
    param: int | None = None

    @property
    def name(self) -> str:
        if self.kind == "max-nodes":
            return f"max-nodes={self.param}"
        return self.kind

    def accepts(self, g: PrestableGraph) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "max-nodes":
            return len(g.edges) <= self.param
        if self.kind == "stable":
            return all(g.valence(v) >= 3 for v in range(g.num_vertices))
        if self.kind == "semistable":
            return all(g.valence(v) >= 2 for v in range(g.num_vertices))
        if self.kind == "chain-T":
            return _accepts_chain_t(g)
        raise ValueError(f"unknown locus kind {self.kind!r}")


def _accepts_chain_t(g: PrestableGraph) -> bool:
    """Chains for n=3: legs {2,3} on one end of a path, leg 1 on the other,
    bare interior vertices; plus the trivial one-vertex graph."""
    if g.n != 3:
        return False
    if g.num_vertices == 1:
        return True
    edge_degree = [0] * g.num_vertices
    for u, v in g.edges:
        edge_degree[u] += 1
        edge_degree[v] += 1
    ends = [v for v in range(g.num_vertices) if edge_degree[v] == 1]
    if len(ends) != 2 or any(
        edge_degree[v] != 2 for v in range(g.num_vertices) if v not in ends
    ):
        return False
    interior_ok = all(not g.legs[v] for v in range(g.num_vertices) if v not in ends)
    leg_sets = {frozenset(g.legs[v]) for v in ends}
    return interior_ok and leg_sets == {frozenset({1}), frozenset({2, 3})}


ALL_LOCUS = LocusPredicate(kind="all")


def parse_locus(text: str) -> LocusPredicate:
    text = text.strip()
    if text == "all":
        return LocusPredicate(kind="all")
    if text in ("stable", "semistable", "chain-T"):
        return LocusPredicate(kind=text)
    if text.startswith("max-nodes="):
        value = int(text.split("=", 1)[1])
        if value < 0:
            raise ValueError("max-nodes bound must be nonnegative")
        return LocusPredicate(kind="max-nodes", param=value)
    raise ValueError(
        f"unknown locus {text!r}; expected all, max-nodes=E, stable, "
        "semistable, or chain-T"
    )


def verify_locus(locus: LocusPredicate, n: int, max_edges: int) -> bool:
    """Check generization-closure: contracting any edge of an accepted graph
    yields an accepted graph, over all graphs with at most max_edges edges."""
    for num_edges in range(1, max_edges + 1):
        for g in enumerate_graphs(n, num_edges):
            if not locus.accepts(g):
                continue
            for e in range(len(g.edges)):
                contracted, _ = canonicalize_graph(contract_edge(g, e))
                if not locus.accepts(contracted):
                    return False
    return True


# -- basis enumeration -----------------------------------------------------


def _weighted_assignments(slots: list[int], total: int):
    """All nonnegative integer tuples with sum(weight * value) == total."""
    if not slots:
        if total == 0:
            yield ()
        return
    weight = slots[0]
    for value in range(total // weight + 1):
        for rest in _weighted_assignments(slots[1:], total - weight * value):
            yield (value,) + rest


_BASIS_CACHE: dict[tuple[int, int, str], tuple[NormalFormStratum, ...]] = {}


def enumerate_basis(
    n: int, d: int, locus: LocusPredicate = ALL_LOCUS
) -> tuple[NormalFormStratum, ...]:
    """All non-vanishing canonical normal-form strata of total degree d whose
    graph the locus accepts, in deterministic (sort_key) order."""
    cache_key = (n, d, locus.name)
    if cache_key in _BASIS_CACHE:
        return _BASIS_CACHE[cache_key]
    found: dict[NormalFormStratum, None] = {}
    for num_edges in range(d + 1):
        remaining = d - num_edges
        for g in enumerate_graphs(n, num_edges):
            if not locus.accepts(g):
                continue
            decorated = [v for v in range(g.num_vertices) if g.valence(v) <= 2]
            weights = [2 if g.valence(v) == 0 else 1 for v in decorated]
            for assignment in _weighted_assignments(weights, remaining):
                exps: list[int | None] = [None] * g.num_vertices
                for v, value in zip(decorated, assignment):
                    exps[v] = value
                for v in range(g.num_vertices):
                    if g.valence(v) <= 2 and exps[v] is None:
                        exps[v] = 0
                stratum, coeff = canonicalize_decorated(g, tuple(exps))
                if stratum is not None:
                    found.setdefault(stratum)
        # graphs with more edges than d cannot appear (decoration degree >= 0)
    result = tuple(sorted(found, key=lambda s: s.sort_key()))
    _BASIS_CACHE[cache_key] = result
    return result
