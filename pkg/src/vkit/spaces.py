"""Relations among diagrams and the quotient spaces they cut out.

Framed space ``A_m``: degree-m chord diagrams modulo 4T.
Reduced space ``A^r_m``: additionally modulo FI (isolated chords vanish).

The 4T vector of a seed slides the new endpoint ``x`` (the partner of the
free point) around the anchor chord ``(a, b)``::

    [x before a] - [x after a] + [x before b] - [x after b]

Jacobi diagrams are reduced to chord diagrams by STU, which resolves a
vertex ``(h1, h2, leg)`` next to the circle into ``S - U`` where ``S``
attaches ``h1`` then ``h2`` along the circle and ``U`` the other way round.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Union

from .diagrams import (
    Code,
    DiagramError,
    JacobiDiagram,
    canonical_code,
    chord_index,
    enumerate_jacobi_diagrams,
    format_code,
    has_isolated_chord,
    parse_code,
    relabel,
    validate_code,
)
from .qlinalg import EchelonBasis

Variant = Literal["framed", "reduced"]
Key = Union[Code, JacobiDiagram]


class UnsupportedDiagram(DiagramError):
    """Raised for Jacobi diagrams with a component not touching the circle."""


# ------------------------------------------------------------ vectors


class DiagramVector:
    """Finite rational combination of diagrams of one degree.

    Chord-diagram keys are canonical codes; :meth:`add` canonicalises codes
    unless told they already are.
    """

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping[Key, Fraction | int] | None = None, degree: int | None = None):
        self.terms: dict[Key, Fraction] = {}
        self.degree = degree
        for k, c in (terms or {}).items():
            self.add(k, c, canonical=True)

    @staticmethod
    def _degree_of(key: Key) -> int:
        return key.degree if isinstance(key, JacobiDiagram) else len(key) // 2

    def add(self, key: Key, coef: Fraction | int = 1, canonical: bool = False) -> None:
        if not coef:
            return
        if not isinstance(key, JacobiDiagram) and not canonical:
            key = canonical_code(key)
        d = self._degree_of(key)
        if self.degree is None:
            self.degree = d
        elif d != self.degree:
            raise DiagramError(f"degree {d} term added to a degree {self.degree} vector")
        v = self.terms.get(key, 0) + Fraction(coef)
        if v:
            self.terms[key] = v
        else:
            del self.terms[key]

    def __iadd__(self, other: DiagramVector) -> DiagramVector:
        for k, c in other.terms.items():
            self.add(k, c, canonical=True)
        return self

    def __add__(self, other: DiagramVector) -> DiagramVector:
        out = self.copy()
        out += other
        return out

    def __sub__(self, other: DiagramVector) -> DiagramVector:
        return self + other.scaled(-1)

    def __neg__(self) -> DiagramVector:
        return self.scaled(-1)

    def scaled(self, c: Fraction | int) -> DiagramVector:
        out = DiagramVector(degree=self.degree)
        if c:
            out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def copy(self) -> DiagramVector:
        out = DiagramVector(degree=self.degree)
        out.terms = dict(self.terms)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def __repr__(self) -> str:
        return f"DiagramVector({self.terms!r})"

    def to_text(self) -> str:
        lines = []
        for k in sorted(self.terms, key=_sort_key):
            c = self.terms[k]
            body = format_code(k) if not isinstance(k, JacobiDiagram) else repr(k)
            lines.append(f"{c.numerator}/{c.denominator}\t{body}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> DiagramVector:
        v = cls()
        for raw in text.splitlines():
            if not raw.strip():
                continue
            coef, _, body = raw.partition("\t")
            v.add(parse_code(body), Fraction(coef.strip()))
        return v


def _sort_key(k: Key):
    if isinstance(k, JacobiDiagram):
        return (1, k.vertices, k.circle)
    return (0, k)


# ------------------------------------------------------------ 4T and FI


@dataclass(frozen=True)
class FourTSeed:
    """A chord diagram with one extra chord (the anchor) and a free point.

    ``circle`` lists points counterclockwise: positive integers label the
    background chords, ``0`` marks the two anchor endpoints and ``-1`` the
    free point.
    """

    circle: tuple[int, ...]

    def __post_init__(self) -> None:
        circle = tuple(self.circle)
        object.__setattr__(self, "circle", circle)
        if circle.count(0) != 2:
            raise DiagramError("seed needs exactly two anchor endpoints")
        if circle.count(-1) != 1:
            raise DiagramError("seed needs exactly one free point")
        validate_code([x for x in circle if x > 0])

    @classmethod
    def build(cls, background: Sequence[int], anchor: tuple[int, int], free: int) -> FourTSeed:
        """Seed from a background code on ``2m - 4`` of the ``2m - 1`` points.

        ``anchor`` and ``free`` are positions on the full circle; the
        background labels fill the remaining positions in order.
        """
        n = len(background) + 3
        a, b = anchor
        pos = [a, b, free]
        if len(set(pos)) != 3:
            raise DiagramError(f"degenerate seed: positions {pos} coincide")
        if not all(0 <= p < n for p in pos):
            raise DiagramError("seed position out of range")
        it = iter(background)
        circle = []
        for i in range(n):
            circle.append(0 if i in (a, b) else -1 if i == free else next(it))
        return cls(tuple(circle))

    @property
    def degree(self) -> int:
        return (len(self.circle) + 1) // 2

    def canonical(self) -> FourTSeed:
        return FourTSeed(_canon_tokens(self.circle))

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """The four signed raw codes (before canonicalisation)."""
        return _slide_terms(self.circle, 0, -1)


def _canon_tokens(seq: Sequence[int]) -> tuple[int, ...]:
    """Least rotation; positive labels renumbered, nonpositive kept."""
    best = None
    n = len(seq)
    for r in range(n):
        names: dict[int, int] = {}
        out = []
        for i in range(n):
            x = seq[(r + i) % n]
            if x > 0:
                y = names.get(x)
                if y is None:
                    y = names[x] = len(names) + 1
                x = y
            out.append(x)
        t = tuple(out)
        if best is None or t < best:
            best = t
    return best if best is not None else ()


def _slide_terms(seq: Sequence[int], anchor: int, free: int) -> list[tuple[tuple[int, ...], int]]:
    """Insert the partner of ``free`` around the ``anchor`` chord.

    Returns four (code, sign) pairs; the anchor and the new chord get fresh
    positive labels and other tokens are kept.
    """
    labels = [x for x in seq if x > 0]
    big = max(labels, default=0)
    A, X = big + 1, big + 2
    base = [A if x == anchor else X if x == free else x for x in seq]
    ia = base.index(A)
    ib = base.index(A, ia + 1)
    out = []
    for pos, s in ((ia, 1), (ia + 1, -1), (ib, 1), (ib + 1, -1)):
        out.append((tuple(base[:pos] + [X] + base[pos:]), s))
    return out


def four_t_vector(seed: FourTSeed) -> DiagramVector:
    v = DiagramVector(degree=seed.degree)
    for code, s in seed.terms():
        v.add(code, s)
    return v


def enumerate_four_t_seeds(m: int) -> list[FourTSeed]:
    """All seeds of degree m up to rotation: every background of ``m - 2``
    chords, every choice of anchor chord and every gap for the free point."""
    if m < 2:
        return []
    seen = set()
    for bg in chord_index(m - 1).codes:
        n = len(bg)
        for lab in set(bg):
            toks = [0 if x == lab else x for x in bg]
            for gap in range(n):
                s = _canon_tokens(toks[: gap + 1] + [-1] + toks[gap + 1 :])
                seen.add(s)
    return [FourTSeed(s) for s in sorted(seen)]


def four_t_rows(m: int) -> list[dict[int, int]]:
    """4T relations of degree m as integer rows over ``chord_index(m)``.

    Every seed occurs as (diagram, endpoint x immediately before a), so
    running over all canonical diagrams and positions covers every seed up to
    rotation.  Rows are deduplicated after sign normalisation.
    """
    idx = chord_index(m)
    rows = set()
    for c in idx.codes:
        n = len(c)
        for xi in range(n):
            if c[(xi + 1) % n] == c[xi]:
                continue
            lab = c[xi]
            seq = list(c[xi + 1 :]) + list(c[:xi])
            bi = seq.index(seq[0], 1)
            acc: dict[int, int] = {}
            for pos, s in ((0, 1), (1, -1), (bi, 1), (bi + 1, -1)):
                k = idx.lookup[relabel(seq[:pos] + [lab] + seq[pos:])]
                acc[k] = acc.get(k, 0) + s
            row = tuple(sorted((k, x) for k, x in acc.items() if x))
            if not row:
                continue
            if row[0][1] < 0:
                row = tuple((k, -x) for k, x in row)
            rows.add(row)
    return [dict(r) for r in sorted(rows)]


def fi_indices(m: int) -> list[int]:
    return [i for i, c in enumerate(chord_index(m).codes) if has_isolated_chord(c)]


def fi_vectors(m: int) -> list[DiagramVector]:
    """One singleton vector per canonical diagram with an isolated chord."""
    if m < 1:
        return []
    codes = chord_index(m).codes
    return [DiagramVector({codes[i]: 1}) for i in fi_indices(m)]


class ChordQuotient:
    """Echelon data for degree-m chord diagrams modulo 4T (and FI)."""

    def __init__(self, m: int, variant: Variant = "framed") -> None:
        if variant not in ("framed", "reduced"):
            raise ValueError(f"unknown variant {variant!r}")
        self.m = m
        self.variant = variant
        self.index = chord_index(m)
        self.echelon = EchelonBasis(len(self.index))
        if variant == "reduced":
            for i in fi_indices(m):
                self.echelon.add({i: 1})
        for row in four_t_rows(m):
            self.echelon.add(row)
        self.basis = [i for i in range(len(self.index)) if i not in self.echelon.pivots]

    @property
    def dim(self) -> int:
        return len(self.index) - self.echelon.rank

    def basis_codes(self) -> list[Code]:
        return [self.index.codes[i] for i in self.basis]

    def coordinates(self, v: DiagramVector | Mapping[Code, Fraction]) -> dict[Code, Fraction]:
        """Canonical representative supported on the basis diagrams."""
        terms = v.terms if isinstance(v, DiagramVector) else v
        row = {}
        for code, c in terms.items():
            k = self.index.lookup[relabel(code)]
            row[k] = row.get(k, 0) + c
        red = self.echelon.reduce_full(row)
        return {self.index.codes[k]: c for k, c in sorted(red.items())}

    def contains(self, v: DiagramVector) -> bool:
        return not self.coordinates(v)


@lru_cache(maxsize=32)
def chord_quotient(m: int, variant: Variant = "framed") -> ChordQuotient:
    return ChordQuotient(m, variant)


def dim_space(m: int, variant: Variant = "framed") -> int:
    """dim A_m (framed) or dim A^r_m (reduced)."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    return chord_quotient(m, variant).dim


# ------------------------------------------------------------ STU


def stu_step(d: JacobiDiagram, k: int) -> tuple[JacobiDiagram, JacobiDiagram]:
    """Resolve internal vertex ``k`` (which must touch the circle) into S, U."""
    circle = d.circle
    pos = {h: i for i, h in enumerate(circle)}
    v = d.vertices[k]
    if not any(h ^ 1 in pos for h in v):
        raise UnsupportedDiagram(f"vertex {k} does not touch the circle")
    # resolve along the half-edge whose leg comes first on the circle
    r = min((i for i in range(3) if v[i] ^ 1 in pos), key=lambda i: pos[v[i] ^ 1])
    h1, h2, hl = v[(r + 1) % 3], v[(r + 2) % 3], v[r]
    p = pos[hl ^ 1]
    rest = d.vertices[:k] + d.vertices[k + 1 :]
    S = JacobiDiagram(circle[:p] + (h1, h2) + circle[p + 1 :], rest)
    U = JacobiDiagram(circle[:p] + (h2, h1) + circle[p + 1 :], rest)
    return S, U


def _default_vertex(d: JacobiDiagram) -> int:
    """Internal vertex with the lowest-numbered adjacent leg."""
    pos = {h: i for i, h in enumerate(d.circle)}
    best = None
    for k, v in enumerate(d.vertices):
        for h in v:
            p = pos.get(h ^ 1)
            if p is not None and (best is None or p < best[0]):
                best = (p, k)
    if best is None:
        raise UnsupportedDiagram("no internal vertex is adjacent to the circle")
    return best[1]


def stu_expand(d: JacobiDiagram | Code, choose=None) -> DiagramVector:
    """Expand a Jacobi diagram into chord diagrams by repeated STU.

    ``choose`` picks the vertex to resolve (default: lowest adjacent leg); it
    exists so tests can compare resolution orders.
    """
    if not isinstance(d, JacobiDiagram):
        d = JacobiDiagram.from_chord_code(d)
    choose = choose or _default_vertex
    out = DiagramVector(degree=d.degree)
    stack: list[tuple[JacobiDiagram, int]] = [(d, 1)]
    while stack:
        cur, s = stack.pop()
        if not cur.vertices:
            out.add(cur.chord_code(), s)
            continue
        S, U = stu_step(cur, choose(cur))
        stack.append((S, s))
        stack.append((U, -s))
    return out


def stu_expand_vector(v: DiagramVector, choose=None) -> DiagramVector:
    out = DiagramVector(degree=v.degree)
    for k, c in v.items():
        out += stu_expand(k, choose).scaled(c)
    return out


# ------------------------------------------------------------ AS and IHX


def as_instance(d: JacobiDiagram, k: int) -> DiagramVector:
    """``d + flip_k(d)``, which AS declares to be zero."""
    v = DiagramVector(degree=d.degree)
    v.add(d, 1)
    v.add(d.flip(k), 1)
    return v


def _rotate_to_end(v: tuple[int, int, int], h: int) -> tuple[int, int, int]:
    i = v.index(h)
    return (v[(i + 1) % 3], v[(i + 2) % 3], h)


def ihx_instance(d: JacobiDiagram, edge: int) -> DiagramVector:
    """I + H + X on an internal edge joining two distinct internal vertices.

    With the vertices written ``(a, b, e)`` and ``(e', c, d)`` the three
    terms pair ``(a, b | c)``, ``(b, c | a)`` and ``(c, a | b)`` across the
    edge, which is the Jacobi identity read diagrammatically.
    """
    he, hf = 2 * edge, 2 * edge + 1
    vk = wk = None
    for k, v in enumerate(d.vertices):
        if he in v:
            vk = k
        if hf in v:
            wk = k
    if vk is None or wk is None or vk == wk:
        raise DiagramError(f"edge {edge} does not join two distinct internal vertices")
    a, b, _ = _rotate_to_end(d.vertices[vk], he)
    w = d.vertices[wk]
    i = w.index(hf)
    c, dd = w[(i + 1) % 3], w[(i + 2) % 3]
    out = DiagramVector(degree=d.degree)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        verts = list(d.vertices)
        verts[vk] = (x, y, he)
        verts[wk] = (hf, z, dd)
        out.add(JacobiDiagram(d.circle, tuple(verts)), 1)
    return out


def internal_edges(d: JacobiDiagram) -> list[int]:
    owner = {}
    for k, v in enumerate(d.vertices):
        for h in v:
            owner[h] = k
    return sorted(
        {h >> 1 for h in owner if h ^ 1 in owner and owner[h] != owner[h ^ 1]}
    )


def as_instances(m: int) -> Iterator[DiagramVector]:
    for d in enumerate_jacobi_diagrams(m, max(2 * m - 2, 0)):
        for k in range(d.n_internal):
            yield as_instance(d, k)


def ihx_instances(m: int) -> Iterator[DiagramVector]:
    for d in enumerate_jacobi_diagrams(m, max(2 * m - 2, 0)):
        for e in internal_edges(d):
            yield ihx_instance(d, e)


def is_consequence(v: DiagramVector) -> bool:
    """True iff the STU expansion of ``v`` vanishes modulo 4T."""
    if v.degree is None or not v:
        return True
    return chord_quotient(v.degree, "framed").contains(stu_expand_vector(v))
