"""Exact sparse rational matrices and rank computations.

Every dimension this package reports comes from exact Gaussian elimination
over arbitrary-precision rationals; modular ranks over random word-size
primes are available as a fast cross-check but are only ever lower bounds
(a prime can collide with a denominator or cancel a pivot).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .rationals import QQ, qq_from_str, qq_str


@dataclass(frozen=True)
class SparseRatMatrix:
    """Immutable coordinate-format matrix over the rationals.

    ``entries`` holds (row, col, value) with no duplicates and no zeros;
    ``column_keys`` optionally names the columns (basis element keys).
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, int, "QQ"], ...]
    column_keys: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        seen = set()
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r},{c}) outside a {self.rows}x{self.cols} matrix")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry at ({r},{c})")
            if v == 0:
                raise ValueError("zero entries must not be stored")
            seen.add((r, c))
        if self.column_keys is not None:
            if len(self.column_keys) != self.cols:
                raise ValueError("column key table length must equal cols")
            if len(set(self.column_keys)) != self.cols:
                raise ValueError("column keys must be unique")

    @staticmethod
    def from_rows(
        rows: list[dict[int, "QQ"]],
        cols: int,
        column_keys: tuple[str, ...] | None = None,
    ) -> "SparseRatMatrix":
        entries = []
        for r, row in enumerate(rows):
            for c, v in sorted(row.items()):
                if v != 0:
                    entries.append((r, c, v))
        return SparseRatMatrix(
            rows=len(rows), cols=cols, entries=tuple(entries), column_keys=column_keys
        )

    def row_dicts(self) -> list[dict[int, "QQ"]]:
        rows: list[dict[int, "QQ"]] = [dict() for _ in range(self.rows)]
        for r, c, v in self.entries:
            rows[r][c] = v
        return rows

    def transpose(self) -> "SparseRatMatrix":
        return SparseRatMatrix(
            rows=self.cols,
            cols=self.rows,
            entries=tuple(sorted((c, r, v) for r, c, v in self.entries)),
        )

    def nnz(self) -> int:
        return len(self.entries)

    def to_triplet_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.nnz()}"]
        for r, c, v in sorted(self.entries):
            lines.append(f"{r} {c} {qq_str(v)}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_triplet_text(
        text: str, column_keys: tuple[str, ...] | None = None
    ) -> "SparseRatMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty triplet text")
        rows, cols, nnz = (int(x) for x in lines[0].split())
        if len(lines) - 1 != nnz:
            raise ValueError("triplet count does not match the header")
        entries = []
        for ln in lines[1:]:
            r, c, value = ln.split()
            entries.append((int(r), int(c), qq_from_str(value)))
        return SparseRatMatrix(
            rows=rows, cols=cols, entries=tuple(sorted(entries)), column_keys=column_keys
        )


# -- exact elimination -----------------------------------------------------


def _eliminate_markowitz(rows: list[dict[int, "QQ"]]) -> tuple[int, list[int]]:
    """Sparse fraction-exact Gaussian elimination.

    Pivots are chosen by the Markowitz fill estimate
    (row nnz − 1)·(column nnz − 1), ties broken by (column, row) for
    determinism.  Returns (rank, pivot column list).
    """
    active: dict[int, dict[int, "QQ"]] = {
        i: dict(row) for i, row in enumerate(rows) if row
    }
    col_rows: dict[int, set[int]] = {}
    for i, row in active.items():
        for c in row:
            col_rows.setdefault(c, set()).add(i)
    rank = 0
    pivot_cols: list[int] = []
    while active:
        best = None
        for i, row in active.items():
            rl = len(row) - 1
            for c in row:
                score = rl * (len(col_rows[c]) - 1)
                key = (score, c, i)
                if best is None or key < best:
                    best = key
        _, pc, pi = best
        pivot_row = active.pop(pi)
        for c in pivot_row:
            col_rows[c].discard(pi)
        pv = pivot_row[pc]
        rank += 1
        pivot_cols.append(pc)
        for i in list(col_rows.get(pc, ())):
            row = active[i]
            factor = row[pc] / pv
            for c, v in pivot_row.items():
                new = row.get(c, QQ(0)) - factor * v
                if new == 0:
                    if c in row:
                        del row[c]
                        col_rows[c].discard(i)
                else:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(i)
                    row[c] = new
            if not row:
                del active[i]
        col_rows.pop(pc, None)
    return rank, sorted(pivot_cols)


def _eliminate_first(rows: list[dict[int, "QQ"]]) -> tuple[int, list[int]]:
    """Leftmost-column / first-row pivoting (the naive strategy)."""
    pivots: dict[int, dict[int, "QQ"]] = {}
    for row in rows:
        r = dict(row)
        while r:
            c = min(r)
            if c in pivots:
                factor = r.pop(c)
                for pc, pv in pivots[c].items():
                    new = r.get(pc, QQ(0)) - factor * pv
                    if new == 0:
                        r.pop(pc, None)
                    else:
                        r[pc] = new
            else:
                lead = r.pop(c)
                pivots[c] = {cc: vv / lead for cc, vv in r.items()}
                break
    return len(pivots), sorted(pivots)


def rank(m: SparseRatMatrix, strategy: str = "markowitz") -> int:
    """Exact rank over the rationals."""
    rows = m.row_dicts()
    if strategy == "markowitz":
        return _eliminate_markowitz(rows)[0]
    if strategy == "first":
        return _eliminate_first(rows)[0]
    raise ValueError(f"unknown pivot strategy {strategy!r}")


def pivot_columns(m: SparseRatMatrix) -> list[int]:
    """Columns carrying a pivot in the echelonization (sorted)."""
    return _eliminate_markowitz(m.row_dicts())[1]


# -- modular cross-checks ----------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n: int) -> bool:
    """Deterministic Miller–Rabin for word-size integers."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_prime(rng: random.Random) -> int:
    while True:
        candidate = rng.getrandbits(61) | (1 << 60) | 1
        if _is_probable_prime(candidate):
            return candidate


def _rank_mod_p(rows: list[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    count = 0
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = min(r)
            if c in pivots:
                factor = r.pop(c)
                for pc, pv in pivots[c].items():
                    new = (r.get(pc, 0) - factor * pv) % p
                    if new:
                        r[pc] = new
                    else:
                        r.pop(pc, None)
            else:
                inv = pow(r.pop(c), p - 2, p)
                pivots[c] = {cc: vv * inv % p for cc, vv in r.items()}
                count += 1
                break
    return count


def rank_modular(
    m: SparseRatMatrix, prime_count: int, seed: int = 0
) -> tuple[int, str]:
    """Maximum rank over reductions modulo random word-size primes.

    The result never exceeds the exact rank, hence the "lower-bound" flag;
    primes dividing any entry denominator are skipped (the reduction would
    be undefined) and replaced by fresh draws.
    """
    if prime_count < 1:
        raise ValueError("prime_count must be at least 1")
    rng = random.Random(seed)
    denominators = [v.denominator for _, _, v in m.entries]
    best = 0
    used = 0
    attempts = 0
    while used < prime_count and attempts < 50 * prime_count:
        attempts += 1
        p = _random_prime(rng)
        if any(d % p == 0 for d in denominators):
            continue
        rows: list[dict[int, int]] = [dict() for _ in range(m.rows)]
        for r, c, v in m.entries:
            rows[r][c] = int(v.numerator) * pow(int(v.denominator), p - 2, p) % p
        best = max(best, _rank_mod_p(rows, p))
        used += 1
    return best, "lower-bound"


# -- span membership ---------------------------------------------------------


@dataclass
class RowSpanBasis:
    """Incrementally eliminated row space, reusable across membership tests."""

    pivots: dict[int, dict[int, "QQ"]] = field(default_factory=dict)

    def add_row(self, row: dict[int, "QQ"]) -> bool:
        """Reduce a row against the basis; absorb it if independent.
        Returns True when the row was already in the span."""
        r = {c: v for c, v in row.items() if v != 0}
        while r:
            c = min(r)
            if c in self.pivots:
                factor = r.pop(c)
                for pc, pv in self.pivots[c].items():
                    new = r.get(pc, QQ(0)) - factor * pv
                    if new == 0:
                        r.pop(pc, None)
                    else:
                        r[pc] = new
            else:
                lead = r.pop(c)
                self.pivots[c] = {cc: vv / lead for cc, vv in r.items()}
                return False
        return True

    def contains(self, row: dict[int, "QQ"]) -> bool:
        r = {c: v for c, v in row.items() if v != 0}
        while r:
            c = min(r)
            if c not in self.pivots:
                return False
            factor = r.pop(c)
            for pc, pv in self.pivots[c].items():
                new = r.get(pc, QQ(0)) - factor * pv
                if new == 0:
                    r.pop(pc, None)
                else:
                    r[pc] = new
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def row_span_basis(m: SparseRatMatrix) -> RowSpanBasis:
    basis = RowSpanBasis()
    for row in m.row_dicts():
        basis.add_row(row)
    return basis


def in_row_span(m: SparseRatMatrix, v) -> bool:
    """Whether v is a rational combination of m's rows.

    ``v`` may be a sequence of length cols, a dict indexed by column number,
    or a dict indexed by column key (requires the matrix's key table).
    """
    if isinstance(v, dict):
        if all(isinstance(k, int) for k in v):
            row = {c: val for c, val in v.items() if val != 0}
            if any(not 0 <= c < m.cols for c in row):
                raise ValueError("vector column index out of range")
        else:
            if m.column_keys is None:
                raise ValueError("key-indexed vector needs a column key table")
            index = {key: i for i, key in enumerate(m.column_keys)}
            row = {}
            for key, val in v.items():
                if key not in index:
                    raise ValueError(f"unknown column key {key!r}")
                if val != 0:
                    row[index[key]] = val
    else:
        values = list(v)
        if len(values) != m.cols:
            raise ValueError("vector length must equal the column count")
        row = {c: val for c, val in enumerate(values) if val != 0}
    return row_span_basis(m).contains(row)
