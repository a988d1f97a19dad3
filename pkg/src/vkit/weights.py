"""Lie algebra weight systems for gl(N) and so(N) in the defining representation.

The invariant form is ``<x, y> = tr(xy)``.  A chord becomes the Casimir
``sum_a g_a (x) g^a`` with ``g^a`` the dual basis element:

* gl(N): ``E_ij`` is dual to ``E_ji``; the chord swaps two index slots.
* so(N): ``A_pq = E_pq - E_qp`` is dual to ``-A_pq / 2``; the chord is half
  the swap minus half the "twist" that glues row to row and column to column.

Closing the slots gives loops, each worth a factor N, so the state sum is an
exact polynomial in N.  :func:`weight_oracle` instead performs the literal
index contraction with numpy for a fixed small N.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Union

import numpy as np

from .diagrams import Code, JacobiDiagram, validate_code
from .qlinalg import SparseMatrix, rank
from .spaces import DiagramVector, chord_quotient, stu_expand

Algebra = Literal["gl", "so"]
ALGEBRAS: tuple[Algebra, ...] = ("gl", "so")
ORACLE_BUDGET = 10**7


class ResourceBudgetError(RuntimeError):
    """The requested computation exceeds the configured size budget."""


# ------------------------------------------------------------ polynomials


class WeightPolynomial:
    """Polynomial in N with rational coefficients; zero coefficients are dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction | int] | None = None):
        self.coeffs: dict[int, Fraction] = {k: Fraction(c) for k, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, k: int, c: Fraction | int = 1) -> WeightPolynomial:
        return cls({k: c})

    def __add__(self, other: WeightPolynomial) -> WeightPolynomial:
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return WeightPolynomial(out)

    def __sub__(self, other: WeightPolynomial) -> WeightPolynomial:
        return self + other.scale(-1)

    def scale(self, s: Fraction | int) -> WeightPolynomial:
        return WeightPolynomial({k: c * s for k, c in self.coeffs.items()})

    def __call__(self, N: int | Fraction) -> Fraction:
        return sum((c * Fraction(N) ** k for k, c in self.coeffs.items()), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            mag = abs(c)
            mono = "" if k == 0 else ("N" if k == 1 else f"N^{k}")
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag} {mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"WeightPolynomial({self})"


# ------------------------------------------------------------ state sum


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _loops(n_points: int, glue: Iterable[tuple[int, int]]) -> int:
    """Loops after joining column k to row k+1 on the circle and the chord gluings.

    Slot ``2k`` is the row index and ``2k+1`` the column index of point k.
    """
    if n_points == 0:
        return 1
    parent = list(range(2 * n_points))

    def union(a: int, b: int) -> None:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[ra] = rb

    for k in range(n_points):
        union(2 * k + 1, 2 * ((k + 1) % n_points))
    for a, b in glue:
        union(a, b)
    return len({_find(parent, x) for x in range(2 * n_points)})


def _chord_pairs(code: Code) -> list[tuple[int, int]]:
    first: dict[int, int] = {}
    pairs = []
    for pos, lab in enumerate(code):
        if lab in first:
            pairs.append((first[lab], pos))
        else:
            first[lab] = pos
    return pairs


@lru_cache(maxsize=None)
def _chord_weight(code: Code, algebra: Algebra) -> WeightPolynomial:
    pairs = _chord_pairs(code)
    n = len(code)
    if algebra == "gl":
        glue = [(2 * p, 2 * q + 1) for p, q in pairs] + [(2 * p + 1, 2 * q) for p, q in pairs]
        return WeightPolynomial.monomial(_loops(n, glue))
    out: dict[int, Fraction] = {}
    scale = Fraction(1, 2 ** len(pairs))
    for state in itertools.product((0, 1), repeat=len(pairs)):
        glue = []
        for (p, q), twist in zip(pairs, state):
            if twist:
                glue += [(2 * p, 2 * q), (2 * p + 1, 2 * q + 1)]
            else:
                glue += [(2 * p, 2 * q + 1), (2 * p + 1, 2 * q)]
        k = _loops(n, glue)
        out[k] = out.get(k, 0) + (-scale if sum(state) % 2 else scale)
    return WeightPolynomial(out)


def _check_algebra(algebra: str) -> Algebra:
    if algebra not in ALGEBRAS:
        raise ValueError(f"unknown algebra {algebra!r}; expected gl or so")
    return algebra  # type: ignore[return-value]


def weight_poly(d: Union[Code, Sequence[int], JacobiDiagram], algebra: Algebra) -> WeightPolynomial:
    """Weight of a chord diagram (code) or a Jacobi diagram, as a polynomial in N."""
    algebra = _check_algebra(algebra)
    if isinstance(d, JacobiDiagram):
        return weight_on_vector(stu_expand(d), algebra)
    return _chord_weight(validate_code(tuple(d)), algebra)


def weight_on_vector(v: DiagramVector, algebra: Algebra) -> WeightPolynomial:
    algebra = _check_algebra(algebra)
    out = WeightPolynomial()
    for key, c in v.items():
        out = out + weight_poly(key, algebra).scale(c)
    return out


# ------------------------------------------------------------ oracle


@dataclass(frozen=True)
class LieData:
    """Basis, dual basis and structure constants for the defining representation.

    ``dual = dual_num / dual_den``; keeping the numerator integral lets the
    oracle contract with exact integer arithmetic.
    """

    algebra: Algebra
    N: int
    basis: np.ndarray  # (dim, N, N) int64
    dual_num: np.ndarray  # (dim, N, N) int64
    dual_den: int
    f: np.ndarray  # (dim, dim, dim) int64: tr([g_a, g_b] g_c)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def metric(self) -> np.ndarray:
        return np.einsum("aij,bji->ab", self.basis, self.basis)


def lie_data(algebra: Algebra, N: int) -> LieData:
    algebra = _check_algebra(algebra)
    if N < 1:
        raise ValueError("N must be positive")
    mats, duals = [], []
    if algebra == "gl":
        for i in range(N):
            for j in range(N):
                m = np.zeros((N, N), dtype=np.int64)
                m[i, j] = 1
                mats.append(m)
                duals.append(m.T.copy())
        den = 1
    else:
        for p in range(N):
            for q in range(p + 1, N):
                m = np.zeros((N, N), dtype=np.int64)
                m[p, q], m[q, p] = 1, -1
                mats.append(m)
                duals.append(-m)
        den = 2
    basis = np.array(mats, dtype=np.int64).reshape(-1, N, N)
    dual = np.array(duals, dtype=np.int64).reshape(-1, N, N)
    comm = np.einsum("aij,bjk->abik", basis, basis) - np.einsum("bij,ajk->abik", basis, basis)
    f = np.einsum("abik,cki->abc", comm, basis)
    data = LieData(algebra, N, basis, dual, den, f)
    _check_lie(data, comm)
    return data


def _check_lie(data: LieData, comm: np.ndarray) -> None:
    pair = np.einsum("aij,bji->ab", data.basis, data.dual_num)
    if not np.array_equal(pair, data.dual_den * np.eye(data.dim, dtype=np.int64)):
        raise AssertionError("dual basis does not pair to the identity")
    f = data.f
    if not (np.array_equal(f, -f.transpose(1, 0, 2)) and np.array_equal(f, f.transpose(1, 2, 0))):
        raise AssertionError("structure constants are not totally antisymmetric")
    # [g_a, g_b] = sum_c tr([g_a, g_b] g^c) g_c
    coeff = np.einsum("abik,cki->abc", comm, data.dual_num)
    rebuilt = np.einsum("abc,cij->abij", coeff, data.basis)
    if not np.array_equal(rebuilt, data.dual_den * comm):
        raise AssertionError("bracket is not closed on the basis")


def _to_jacobi(d: Union[Code, Sequence[int], JacobiDiagram]) -> JacobiDiagram:
    if isinstance(d, JacobiDiagram):
        return d
    return JacobiDiagram.from_chord_code(validate_code(tuple(d)))


def weight_oracle(
    d: Union[Code, Sequence[int], JacobiDiagram],
    algebra: Algebra,
    N: int,
    budget: int = ORACLE_BUDGET,
) -> Fraction:
    """Literal contraction: matrices on the circle, ``tr([X, Y] Z)`` at vertices.

    Half-edge ``2e`` of edge e carries ``g_a`` and ``2e + 1`` carries ``g^a``.
    """
    jd = _to_jacobi(d)
    data = lie_data(algebra, N)
    n_edges = (len(jd.circle) + 3 * len(jd.vertices)) // 2
    if data.dim ** n_edges > budget:
        raise ResourceBudgetError(
            f"oracle needs {data.dim}^{n_edges} index terms, budget is {budget}"
        )
    if not jd.circle:
        if jd.vertices:
            raise ValueError("diagram without legs must be empty")
        return Fraction(N)

    def mat(h: int) -> np.ndarray:
        return data.basis if h % 2 == 0 else data.dual_num

    operands: list = []
    L = len(jd.circle)
    # labels: edges 0..E-1, circle slots E..E+L-1
    for pos, h in enumerate(jd.circle):
        operands += [mat(h), [h // 2, n_edges + pos, n_edges + (pos + 1) % L]]
    for v in jd.vertices:
        x, y, z = (mat(h) for h in v)
        comm = np.einsum("aij,bjk->abik", x, y) - np.einsum("bij,ajk->abik", y, x)
        operands += [np.einsum("abik,cki->abc", comm, z), [h // 2 for h in v]]
    total = np.einsum(*operands, [], optimize=True)
    n_dual = n_edges  # every edge carries exactly one dual element
    return Fraction(int(total), data.dual_den**n_dual)


# ------------------------------------------------------------ span rank


Probe = tuple[Algebra, Sequence[int]]


def default_probes(m: int) -> list[Probe]:
    pts = list(range(1, m + 3))
    return [("gl", pts), ("so", pts)]


def weight_span_rank(m: int, probes: Sequence[Probe] | None = None) -> int:
    """Rank of the probe functionals on a basis of the framed space in degree m."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    codes = chord_quotient(m, "framed").basis_codes()
    probes = default_probes(m) if probes is None else probes
    rows = []
    for algebra, points in probes:
        polys = [weight_poly(c, algebra) for c in codes]
        for N in points:
            rows.append({j: p(N) for j, p in enumerate(polys)})
    if not rows or not codes:
        return 0
    return rank(SparseMatrix.from_rows(rows, len(codes)))


def rank_table_csv(max_m: int, probes_for: callable | None = None) -> str:
    from .spaces import dim_space

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "dim_framed", "weight_span_rank"])
    for m in range(max_m + 1):
        probes = probes_for(m) if probes_for else None
        w.writerow([m, dim_space(m, "framed"), weight_span_rank(m, probes)])
    return buf.getvalue()
