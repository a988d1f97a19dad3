"""Exact sparse linear algebra over the rationals.

Rows are sparse vectors stored as ``dict[int, Fraction]`` (column -> value).
Two engines live here:

* :func:`rref` is a fully reduced row echelon form over :class:`Fraction`
  with a deterministic pivot rule.  It is meant for the small and medium
  systems in the associator solver and in the quotient coordinates.
* :class:`EchelonBasis` is an incremental, fraction-free echelon form over
  the integers.  Rational input rows are scaled to primitive integer rows
  before insertion.  This is the engine behind :func:`quotient_dim` and
  the degree-7 dimension computations.

Both are exact; no floating point is used anywhere.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Union

Scalar = Union[int, Fraction]
SparseVec = dict[int, Fraction]
VecLike = Union[Mapping[int, Scalar], Sequence[Scalar]]


class LinalgError(ValueError):
    """Raised on dimension mismatches and malformed matrix input."""


def _as_sparse(v: VecLike, length: int | None = None) -> SparseVec:
    if isinstance(v, Mapping):
        out = {int(k): Fraction(x) for k, x in v.items() if x != 0}
        if length is not None:
            for k in out:
                if not 0 <= k < length:
                    raise LinalgError(f"index {k} out of range for length {length}")
        return out
    if length is not None and len(v) != length:
        raise LinalgError(f"vector has length {len(v)}, expected {length}")
    return {i: Fraction(x) for i, x in enumerate(v) if x != 0}


def bit_size(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse rational matrix with no stored zeros."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[tuple[int, int], Fraction] = {}
        for (r, c), x in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise LinalgError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            x = Fraction(x)
            if x:
                clean[(r, c)] = x
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[VecLike], cols: int) -> SparseMatrix:
        entries = {}
        for r, row in enumerate(rows):
            for c, x in _as_sparse(row, cols).items():
                entries[(r, c)] = x
        return cls(len(rows), cols, entries)

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def row_list(self) -> list[SparseVec]:
        out: list[SparseVec] = [{} for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            out[r][c] = x
        return out

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), x in self.entries.items():
            out[r][c] = x
        return out

    def matvec(self, x: Sequence[Scalar]) -> list[Fraction]:
        if len(x) != self.cols:
            raise LinalgError("matvec dimension mismatch")
        y = [Fraction(0)] * self.rows
        for (r, c), a in self.entries.items():
            y[r] += a * x[c]
        return y

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {len(self.entries)}"]
        for (r, c) in sorted(self.entries):
            x = self.entries[(r, c)]
            lines.append(f"{r} {c} {x.numerator}/{x.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SparseMatrix:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise LinalgError("empty matrix text")
        try:
            rows, cols, nnz = (int(t) for t in lines[0].split())
        except ValueError as exc:
            raise LinalgError(f"bad header {lines[0]!r}") from exc
        if len(lines) - 1 != nnz:
            raise LinalgError(f"header announces {nnz} entries, found {len(lines) - 1}")
        entries = {}
        for ln in lines[1:]:
            r, c, x = ln.split()
            entries[(int(r), int(c))] = Fraction(x)
        return cls(rows, cols, entries)


# ---------------------------------------------------------------- rref


def _eliminate(rows: list[SparseVec], idxs: Sequence[int], piv: SparseVec, col: int) -> None:
    for i in idxs:
        row = rows[i]
        f = row.get(col)
        if f is None:
            continue
        for c, x in piv.items():
            y = row.get(c, 0) - f * x
            if y:
                row[c] = y
            else:
                row.pop(c, None)


def _rref_rows(
    rows: list[SparseVec], pivot_cols: Iterable[int] | None = None, threads: int = 1
) -> tuple[list[SparseVec], list[int]]:
    """In-place Gauss-Jordan on a list of sparse rows.

    Returns the rows reordered as (pivot rows in pivot order, zero rows...) and
    the pivot columns.  When ``pivot_cols`` is given, only those columns may be
    chosen as pivots (used for augmented systems).
    """
    allowed = None if pivot_cols is None else set(pivot_cols)
    cand_cols = sorted({c for r in rows for c in r if allowed is None or c in allowed})
    done: list[int] = []
    pivots: list[int] = []
    active = list(range(len(rows)))
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for col in cand_cols:
            best = None
            best_size = 0
            for i in active:
                x = rows[i].get(col)
                if x is None:
                    continue
                s = bit_size(x)
                if best is None or s < best_size:
                    best, best_size = i, s
            if best is None:
                continue
            piv = rows[best]
            inv = 1 / piv[col]
            if inv != 1:
                for c in piv:
                    piv[c] *= inv
            active.remove(best)
            others = [i for i in range(len(rows)) if i != best and col in rows[i]]
            if pool is None or len(others) < 64:
                _eliminate(rows, others, piv, col)
            else:
                # Row updates are independent; chunks are fixed so the result
                # does not depend on scheduling.
                size = -(-len(others) // threads)
                chunks = [others[k : k + size] for k in range(0, len(others), size)]
                list(pool.map(lambda ch: _eliminate(rows, ch, piv, col), chunks))
            done.append(best)
            pivots.append(col)
    finally:
        if pool is not None:
            pool.shutdown()
    used = set(done)
    order = done + [i for i in range(len(rows)) if i not in used]
    return [rows[i] for i in order], pivots


def rref(M: SparseMatrix, threads: int = 1) -> tuple[SparseMatrix, int, list[int]]:
    """Reduced row echelon form of ``M``.

    Pivot rule: the leftmost column with a nonzero entry among unused rows;
    among those rows, the one whose entry has the smallest bit size, ties
    broken by smallest row index.  The output is independent of ``threads``.
    """
    rows, pivots = _rref_rows(M.row_list(), threads=threads)
    out = {}
    for r, row in enumerate(rows):
        for c, x in row.items():
            out[(r, c)] = x
    return SparseMatrix(M.rows, M.cols, out), len(pivots), pivots


def rank(M: SparseMatrix) -> int:
    eb = EchelonBasis(M.cols)
    for row in M.row_list():
        eb.add(row)
    return eb.rank


# ------------------------------------------------------ incremental echelon


def _primitive(v: Mapping[int, Scalar]) -> dict[int, int]:
    """Scale a rational sparse vector to a primitive integer vector with a
    positive leading coefficient."""
    items = {c: Fraction(x) for c, x in v.items() if x}
    if not items:
        return {}
    den = lcm(*(x.denominator for x in items.values()))
    row = {c: int(x * den) for c, x in items.items()}
    return _normalize(row)


def _normalize(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {c: x // g for c, x in row.items()}
    return row


class EchelonBasis:
    """Incremental row echelon basis over the integers.

    Each stored row is primitive and keyed by its leading (smallest) column.
    Insertion reduces the incoming row against stored pivots in increasing
    column order using fraction-free updates, so all arithmetic stays in
    Python integers.  The span is exactly the rational span of the inserted
    rows.
    """

    def __init__(self, length: int | None = None) -> None:
        self.length = length
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _check(self, v: Mapping[int, Scalar]) -> None:
        if self.length is None:
            return
        for c in v:
            if not 0 <= c < self.length:
                raise LinalgError(f"index {c} out of range for length {self.length}")

    def _reduce_int(self, row: dict[int, int]) -> dict[int, int]:
        pivots = self.pivots
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                return row
            a = row[c]
            b = p[c]
            if b == 1:
                for k, x in p.items():
                    y = row.get(k, 0) - a * x
                    if y:
                        row[k] = y
                    else:
                        del row[k]
            else:
                g = gcd(a, b)
                fa, fb = b // g, a // g
                new = {}
                for k, x in row.items():
                    new[k] = x * fa
                for k, x in p.items():
                    y = new.get(k, 0) - fb * x
                    if y:
                        new[k] = y
                    else:
                        new.pop(k, None)
                row = _normalize(new) if new else new
        return row

    def add(self, v: Mapping[int, Scalar]) -> bool:
        """Insert a row; return True iff it enlarged the span."""
        self._check(v)
        row = self._reduce_int(_primitive(v))
        if not row:
            return False
        row = _normalize(row)
        self.pivots[min(row)] = row
        return True

    def contains(self, v: Mapping[int, Scalar]) -> bool:
        self._check(v)
        return not self._reduce_int(_primitive(v))

    def reduce_full(self, v: Mapping[int, Scalar]) -> SparseVec:
        """Canonical representative of ``v`` modulo the span.

        Every pivot column is eliminated (not only the leading one), so the
        result is supported on non-pivot columns and depends only on the
        class of ``v``.
        """
        self._check(v)
        row = {c: Fraction(x) for c, x in v.items() if x}
        pivots = self.pivots
        while True:
            cols = sorted(c for c in row if c in pivots)
            if not cols:
                return row
            c = cols[0]
            p = pivots[c]
            f = row[c] / p[c]
            for k, x in p.items():
                y = row.get(k, 0) - f * x
                if y:
                    row[k] = y
                else:
                    row.pop(k, None)


def quotient_dim(ambient: int, relations: Iterable[VecLike]) -> int:
    """``ambient`` minus the rank of the relation rows."""
    eb = EchelonBasis(ambient)
    for r in relations:
        eb.add(_as_sparse(r, ambient) if not isinstance(r, Mapping) else r)
    return ambient - eb.rank


def in_span(v: VecLike, relations: Iterable[VecLike], length: int | None = None) -> bool:
    """True iff ``v`` lies in the rational span of ``relations``."""
    eb = EchelonBasis(length)
    for r in relations:
        eb.add(_as_sparse(r, length))
    return eb.contains(_as_sparse(v, length))


# ------------------------------------------------------------ solving


@dataclass(frozen=True)
class Inconsistent:
    """Certificate for an unsolvable system: ``y·A = 0`` and ``y·b != 0``."""

    y: list[Fraction]

    def verify(self, A: SparseMatrix, b: Sequence[Scalar]) -> bool:
        yA: dict[int, Fraction] = {}
        for (r, c), x in A.entries.items():
            if self.y[r]:
                yA[c] = yA.get(c, 0) + self.y[r] * x
        yb = sum((self.y[r] * Fraction(b[r]) for r in range(A.rows)), Fraction(0))
        return all(x == 0 for x in yA.values()) and yb != 0


def solve_affine(
    A: SparseMatrix, b: Sequence[Scalar], threads: int = 1
) -> list[Fraction] | Inconsistent:
    """Solve ``A x = b`` exactly with free variables set to zero.

    On failure returns an :class:`Inconsistent` certificate taken from the
    row transformation that produced a ``0 = nonzero`` row.
    """
    if len(b) != A.rows:
        raise LinalgError(f"right-hand side has length {len(b)}, expected {A.rows}")
    n = A.cols
    bcol = n
    rows = A.row_list()
    for r, row in enumerate(rows):
        if b[r]:
            row[bcol] = Fraction(b[r])
        row[n + 1 + r] = Fraction(1)
    rows, pivots = _rref_rows(rows, pivot_cols=range(n), threads=threads)
    for row in rows[len(pivots) :]:
        if row.get(bcol):
            y = [row.get(n + 1 + r, Fraction(0)) for r in range(A.rows)]
            return Inconsistent(y)
    x = [Fraction(0)] * n
    for row, c in zip(rows, pivots):
        x[c] = row.get(bcol, Fraction(0))
    return x
