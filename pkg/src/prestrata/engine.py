"""Chow-group dimensions, Hilbert series, and rank tables.

A dimension is always computed the same way: enumerate the normal-form
basis of the locus in the requested degree, generate the four-point
relations projected onto that basis, and subtract the exact rank of the
relation matrix from the generator count.  Everything runs over exact
rationals; the optional modular pass only *confirms* a rank, it is never
the source of a published number.
"""

from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field

from .cache import cache_get, cache_key, cache_put
from .linalg import SparseRatMatrix, rank, rank_modular
from .rationals import QQ
from .relations import wdvv_relations
from .strata import ALL_LOCUS, LocusPredicate, enumerate_basis, parse_locus


@dataclass(frozen=True)
class ChowQuery:
    """One (marking count, degree, locus) cell.

    The locus must be generization-closed (``verify_locus``); the named
    predicates are, and callers passing custom predicates are responsible
    for checking closure themselves.
    """

    n: int
    degree: int
    locus: LocusPredicate = ALL_LOCUS

    def __post_init__(self) -> None:
        if self.n < 0 or self.degree < 0:
            raise ValueError("marking count and degree must be nonnegative")


@dataclass(frozen=True)
class ChowResult:
    n: int
    degree: int
    locus: str
    generators: int
    relation_rank: int
    dimension: int
    provenance: str
    timings: dict = field(compare=False)

    def __post_init__(self) -> None:
        if self.dimension != self.generators - self.relation_rank:
            raise ValueError("dimension must equal generators - relation_rank")
        if not 0 <= self.dimension <= self.generators:
            raise ValueError("dimension out of range")
        if self.provenance not in ("exact", "modular-confirmed"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "d": self.degree,
            "locus": self.locus,
            "generators": self.generators,
            "relation_rank": self.relation_rank,
            "dim": self.dimension,
            "provenance": self.provenance,
            "timings": dict(self.timings),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ChowResult":
        return cls(
            n=int(obj["n"]),
            degree=int(obj["d"]),
            locus=str(obj["locus"]),
            generators=int(obj["generators"]),
            relation_rank=int(obj["relation_rank"]),
            dimension=int(obj["dim"]),
            provenance=str(obj["provenance"]),
            timings=dict(obj.get("timings", {})),
        )


def relation_matrix(
    n: int, d: int, locus: LocusPredicate = ALL_LOCUS
) -> SparseRatMatrix:
    """The projected four-point relation matrix over the locus basis.

    Columns are the normal-form basis of the locus in degree d, keyed by
    stratum JSON.  For a locus other than the full moduli, relation rows
    are generated only from bases whose graph lies in the locus: every
    glued term's graph contracts onto its base graph, and the locus is
    closed under contraction, so a base outside the locus contributes a
    row that projects to zero anyway.
    """
    basis = enumerate_basis(n, d, locus)
    index = {s: i for i, s in enumerate(basis)}
    rows: list[dict[int, QQ]] = []
    if d >= 1:
        base_locus = None if locus.kind == "all" else locus
        for rv in wdvv_relations(n, d, locus, base_locus=base_locus):
            rows.append({index[s]: c for s, c in rv.vector.terms.items()})
    return SparseRatMatrix.from_rows(
        rows, len(basis), tuple(s.key() for s in basis)
    )


def chow_rank(
    n,
    d: int | None = None,
    locus: LocusPredicate = ALL_LOCUS,
    *,
    modular_check: bool = False,
    cache_dir: str | None = None,
) -> ChowResult:
    """Dimension of the degree-d quotient over the locus.

    Accepts either a ChowQuery or (n, d, locus).  With ``modular_check``
    the exact rank is recomputed modulo two random primes; agreement
    upgrades provenance to "modular-confirmed".  ``cache_dir`` consults
    and fills a content-addressed result cache.
    """
    if isinstance(n, ChowQuery):
        if d is not None:
            raise TypeError("pass either a ChowQuery or explicit n and d")
        query = n
    else:
        query = ChowQuery(int(n), int(d), locus)
    key = cache_key(query.n, query.degree, query.locus.name)
    if cache_dir:
        hit = cache_get(cache_dir, key)
        if hit is not None:
            return ChowResult.from_json_obj(hit)

    t0 = time.perf_counter()
    basis = enumerate_basis(query.n, query.degree, query.locus)
    t1 = time.perf_counter()
    matrix = relation_matrix(query.n, query.degree, query.locus)
    t2 = time.perf_counter()
    relation_rank = rank(matrix)
    t3 = time.perf_counter()
    provenance = "exact"
    if modular_check:
        lower, _ = rank_modular(matrix, 2, seed=0)
        if lower == relation_rank:
            provenance = "modular-confirmed"
    result = ChowResult(
        n=query.n,
        degree=query.degree,
        locus=query.locus.name,
        generators=len(basis),
        relation_rank=relation_rank,
        dimension=len(basis) - relation_rank,
        provenance=provenance,
        timings={
            "basis": t1 - t0,
            "relations": t2 - t1,
            "rank": t3 - t2,
            "total": time.perf_counter() - t0,
        },
    )
    if cache_dir:
        cache_put(cache_dir, key, result.to_json_obj())
    return result


# -- Hilbert series ----------------------------------------------------------


@dataclass(frozen=True)
class HilbertTable:
    """Dimensions by degree 0..dmax; coefficients may stop short of dmax
    when a time budget ran out."""

    n: int
    locus: str
    dmax: int
    coefficients: tuple[int, ...]

    @property
    def complete(self) -> bool:
        return len(self.coefficients) == self.dmax + 1


def hilbert_coeffs(
    n: int,
    locus: LocusPredicate,
    dmax: int,
    *,
    cache_dir: str | None = None,
    max_seconds: float | None = None,
) -> HilbertTable:
    if dmax < 0:
        raise ValueError("dmax must be nonnegative")
    start = time.perf_counter()
    coeffs: list[int] = []
    for d in range(dmax + 1):
        if (
            max_seconds is not None
            and coeffs
            and time.perf_counter() - start > max_seconds
        ):
            break
        coeffs.append(chow_rank(n, d, locus, cache_dir=cache_dir).dimension)
    if coeffs and chow_rank(n, 0, locus, cache_dir=cache_dir).generators > 0:
        assert coeffs[0] == 1, "degree-0 group of a nonempty locus is rank 1"
    return HilbertTable(n=n, locus=locus.name, dmax=dmax, coefficients=tuple(coeffs))


def expand_rational(numer, denom, dmax: int) -> list:
    """Power-series coefficients of numer/denom at t=0, exact to order dmax.

    Polynomials are coefficient sequences, constant term first.  Requires a
    unit constant term in the denominator.
    """
    if dmax < 0:
        raise ValueError("dmax must be nonnegative")
    num = [QQ(c) for c in numer]
    den = [QQ(c) for c in denom]
    while den and den[-1] == 0:
        den.pop()
    if not den or den[0] == 0:
        raise ValueError("denominator must not vanish at t=0")
    out: list = []
    for k in range(dmax + 1):
        acc = num[k] if k < len(num) else QQ(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


# -- rational-function parsing ----------------------------------------------


def _poly_trim(p: list) -> tuple:
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _poly_add(a, b) -> tuple:
    out = [QQ(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return _poly_trim(out)


def _poly_mul(a, b) -> tuple:
    if not a or not b:
        return ()
    out = [QQ(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_neg(a) -> tuple:
    return tuple(-c for c in a)


_ONE = (QQ(1),)


class _RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=_ONE):
        if not den:
            raise ValueError("division by the zero polynomial")
        self.num = tuple(num)
        self.den = tuple(den)

    def __add__(self, other):
        return _RationalFunction(
            _poly_add(
                _poly_mul(self.num, other.den), _poly_mul(other.num, self.den)
            ),
            _poly_mul(self.den, other.den),
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return _RationalFunction(_poly_neg(self.num), self.den)

    def __mul__(self, other):
        return _RationalFunction(
            _poly_mul(self.num, other.num), _poly_mul(self.den, other.den)
        )

    def __truediv__(self, other):
        return _RationalFunction(
            _poly_mul(self.num, other.den), _poly_mul(self.den, other.num)
        )

    def __pow__(self, k: int):
        result = _RationalFunction(_ONE)
        for _ in range(k):
            result = result * self
        return result


def _tokenize(text: str) -> list:
    tokens: list = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif ch == "t":
            tokens.append(("t", None))
            i += 1
        elif text.startswith("**", i):
            tokens.append(("^", None))
            i += 2
        elif ch in "+-*/^()":
            tokens.append((ch, None))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} in rational function")
    return tokens


class _Parser:
    """Recursive-descent parser for expressions in t over the integers.

    Grammar: expr is a +/- chain of terms; a term multiplies or divides
    factors, with adjacency (as in ``2t`` or ``(1-t)(1+t)``) read as
    multiplication; a factor is an atom with an optional nonnegative
    integer exponent; atoms are integers, t, and parenthesized exprs.
    """

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        if self.pos >= len(self.tokens):
            raise ValueError("unexpected end of rational function")
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"expected {kind!r}, found {tok[0]!r}")
        self.pos += 1
        return tok

    def parse(self) -> _RationalFunction:
        value = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError("trailing input in rational function")
        return value

    def expr(self) -> _RationalFunction:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> _RationalFunction:
        value = self.unary()
        while True:
            nxt = self.peek()
            if nxt in ("*", "/"):
                op = self.take()[0]
                rhs = self.unary()
                value = value * rhs if op == "*" else value / rhs
            elif nxt in ("int", "t", "("):
                value = value * self.unary()
            else:
                return value

    def unary(self) -> _RationalFunction:
        if self.peek() in ("+", "-"):
            op = self.take()[0]
            value = self.unary()
            return value if op == "+" else -value
        return self.power()

    def power(self) -> _RationalFunction:
        value = self.atom()
        if self.peek() == "^":
            self.take()
            negative = False
            if self.peek() == "-":
                self.take()
                negative = True
            exponent = self.take("int")[1]
            value = value ** exponent
            if negative:
                value = _RationalFunction(_ONE) / value
        return value

    def atom(self) -> _RationalFunction:
        kind, payload = self.take()
        if kind == "int":
            return _RationalFunction((QQ(payload),) if payload else ())
        if kind == "t":
            return _RationalFunction((QQ(0), QQ(1)))
        if kind == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ValueError(f"unexpected token {kind!r} in rational function")


def parse_rational_function(text: str) -> tuple[tuple, tuple]:
    """Parse e.g. ``(1-t)^3/(1-2t)^3`` into (numerator, denominator)
    coefficient tuples, constant term first."""
    value = _Parser(_tokenize(text)).parse()
    return value.num, value.den


# -- rank tables -------------------------------------------------------------


@dataclass(frozen=True)
class RankTable:
    """Grid of results over (n, d) cells; skipped maps budget-skipped cells
    to the reason ("time" or "generators")."""

    n_values: tuple[int, ...]
    d_values: tuple[int, ...]
    locus: str
    cells: dict
    skipped: dict

    @property
    def budget_exhausted(self) -> bool:
        return bool(self.skipped)

    def dimension(self, n: int, d: int) -> int | None:
        result = self.cells.get((n, d))
        return None if result is None else result.dimension

    def to_tsv(self) -> str:
        lines = ["\t".join(["d"] + [str(n) for n in self.n_values])]
        for d in self.d_values:
            row = [str(d)]
            for n in self.n_values:
                result = self.cells.get((n, d))
                row.append("" if result is None else str(result.dimension))
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def to_json_records(self) -> list[dict]:
        records = []
        for d in self.d_values:
            for n in self.n_values:
                result = self.cells.get((n, d))
                if result is None:
                    continue
                obj = result.to_json_obj()
                del obj["timings"]
                records.append(obj)
        return records


def _table_cell(payload):
    """Worker for one table cell; returns (n, d, result JSON or None, skip
    reason or None).  Runs in worker processes, so it must stay top-level
    and traffic only in picklable plain data."""
    n, d, locus_name, cache_dir, modular_check, max_generators = payload
    locus = parse_locus(locus_name)
    if max_generators is not None:
        generators = len(enumerate_basis(n, d, locus))
        if generators > max_generators:
            return (n, d, None, "generators")
    result = chow_rank(
        n, d, locus, modular_check=modular_check, cache_dir=cache_dir
    )
    return (n, d, result.to_json_obj(), None)


def rank_table(
    n_values,
    d_values,
    locus: LocusPredicate = ALL_LOCUS,
    *,
    jobs: int = 1,
    max_seconds: float | None = None,
    max_generators: int | None = None,
    cache_dir: str | None = None,
    modular_check: bool = False,
) -> RankTable:
    """Compute a grid of dimensions, optionally in parallel.

    Budget limits skip cells instead of aborting: ``max_generators`` skips
    any cell whose basis is larger, and ``max_seconds`` stops starting new
    cells once the wall clock expires (cells already running finish).
    Results are merged in a fixed (d, n) order, so for a given cell set the
    output is identical for every ``jobs`` value.
    """
    n_values = tuple(n_values)
    d_values = tuple(d_values)
    if not n_values or not d_values:
        raise ValueError("n and d ranges must be nonempty")
    order = [(n, d) for d in d_values for n in n_values]
    payloads = {
        (n, d): (n, d, locus.name, cache_dir, modular_check, max_generators)
        for (n, d) in order
    }
    start = time.perf_counter()
    cells: dict = {}
    skipped: dict = {}

    def consume(outcome):
        n, d, obj, reason = outcome
        if reason is None:
            cells[(n, d)] = ChowResult.from_json_obj(obj)
        else:
            skipped[(n, d)] = reason

    if jobs <= 1:
        for cell in order:
            if (
                max_seconds is not None
                and time.perf_counter() - start > max_seconds
            ):
                skipped[cell] = "time"
                continue
            consume(_table_cell(payloads[cell]))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pending = {}
            for cell in order:
                pending[pool.submit(_table_cell, payloads[cell])] = cell
            while pending:
                done, _ = wait(
                    set(pending), timeout=0.05, return_when=FIRST_COMPLETED
                )
                for future in done:
                    consume(future.result())
                    del pending[future]
                if (
                    max_seconds is not None
                    and time.perf_counter() - start > max_seconds
                ):
                    for future in list(pending):
                        if future.cancel():
                            skipped[pending.pop(future)] = "time"
    return RankTable(
        n_values=n_values,
        d_values=d_values,
        locus=locus.name,
        cells=cells,
        skipped=skipped,
    )
