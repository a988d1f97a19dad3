"""Boundary maps between 4T/FI relations and the relations among them.

Chains are encoded as circle token sequences read counterclockwise, up to
rotation.  Positive integers are background chords.  Markers:

* D1 ``T4T``: ``0`` twice (anchor chord), ``-1`` once (free point).  The
  boundary is the 4T vector of that seed.
* D1 ``TFI``: ``0`` once, the spot where an isolated chord is inserted.
* D2 ``3T``: ``-1, -2, -3`` are the legs a, b, c of a tripod.  Its boundary
  is ``Gen(ab | c) + Gen(bc | a) + Gen(ca | b)``, where ``Gen(xy | z)``
  anchors on the chord xy and frees z.
* D2 ``8T``: ``-1`` directly followed by ``-2`` are two adjacent feet; the
  first has an arrow to the chord marked ``-3`` and the second to the chord
  marked ``-4``.  The boundary resolves the second arrow into its four 4T
  positions (keeping the first as the seed) minus the same with the roles
  exchanged, eight terms in all.  This reading is the one for which every
  composite boundary vanishes; with a single shared anchor it does not, so
  the smallest 8T instance has degree 4.

D1 is modelled as the free span of its generators, so the reported kernel
is an upper bound for the true one.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .diagrams import DiagramError, chord_index
from .qlinalg import EchelonBasis
from .spaces import DiagramVector, FourTSeed, _canon_tokens, _slide_terms, four_t_vector

Chain = dict["D1Generator", int]


@dataclass(frozen=True, order=True)
class D1Generator:
    kind: Literal["T4T", "TFI"]
    tokens: tuple[int, ...]

    def __post_init__(self) -> None:
        t = tuple(self.tokens)
        if self.kind == "T4T":
            FourTSeed(t)
        elif self.kind == "TFI":
            if t.count(0) != 1 or any(x < 0 for x in t):
                raise DiagramError("TFI needs a single marked point")
        else:
            raise DiagramError(f"unknown D1 kind {self.kind!r}")
        object.__setattr__(self, "tokens", _canon_tokens(t))

    @property
    def degree(self) -> int:
        return (len(self.tokens) + 1) // 2

    def reversed(self) -> D1Generator:
        return D1Generator(self.kind, tuple(reversed(self.tokens)))


@dataclass(frozen=True, order=True)
class D2Generator:
    kind: Literal["3T", "8T"]
    tokens: tuple[int, ...]

    def __post_init__(self) -> None:
        t = tuple(self.tokens)
        if self.kind == "3T":
            if sorted(x for x in t if x <= 0) != [-3, -2, -1]:
                raise DiagramError("3T needs legs -1, -2, -3")
        elif self.kind == "8T":
            if sorted(x for x in t if x <= 0) != [-4, -4, -3, -3, -2, -1]:
                raise DiagramError("8T needs feet -1, -2 and anchors -3, -4")
            i = t.index(-1)
            if t[(i + 1) % len(t)] != -2:
                raise DiagramError("8T feet must be adjacent, -1 then -2")
        else:
            raise DiagramError(f"unknown D2 kind {self.kind!r}")
        object.__setattr__(self, "tokens", _canon_tokens(t))

    @property
    def degree(self) -> int:
        if self.kind == "3T":
            return (len(self.tokens) + 1) // 2
        return (len(self.tokens) + 2) // 2

    def reversed(self) -> D2Generator:
        """Mirror image.  For 8T the feet swap names so ``-1`` stays first."""
        t = tuple(reversed(self.tokens))
        if self.kind == "8T":
            swap = {-1: -2, -2: -1, -3: -4, -4: -3}
            t = tuple(swap.get(x, x) for x in t)
        return D2Generator(self.kind, t)


def _add(chain: Chain, g: D1Generator, c: int) -> None:
    chain[g] = chain.get(g, 0) + c
    if not chain[g]:
        del chain[g]


def _rename(seq: Sequence[int], mapping: Mapping[int, int]) -> tuple[int, ...]:
    return tuple(mapping.get(x, x) for x in seq)


# ------------------------------------------------------------ boundaries


def boundary_d1(g: D1Generator) -> DiagramVector:
    if g.kind == "T4T":
        return four_t_vector(FourTSeed(g.tokens))
    big = max(g.tokens, default=0) + 1
    code: list[int] = []
    for x in g.tokens:
        code += [big, big] if x == 0 else [x]
    out = DiagramVector(degree=g.degree)
    out.add(tuple(code), 1)
    return out


def boundary_3T(g: D2Generator) -> Chain:
    if g.kind != "3T":
        raise DiagramError("boundary_3T needs a 3T generator")
    out: Chain = {}
    for x, y, z in ((-1, -2, -3), (-2, -3, -1), (-3, -1, -2)):
        _add(out, D1Generator("T4T", _rename(g.tokens, {x: 0, y: 0, z: -1})), 1)
    return out


def _resolve(tokens: Sequence[int], anchor: int, free: int, keep_anchor: int, keep_free: int) -> Iterator[tuple[D1Generator, int]]:
    for code, s in _slide_terms(tokens, anchor, free):
        yield D1Generator("T4T", _rename(code, {keep_anchor: 0, keep_free: -1})), s


def boundary_8T(g: D2Generator) -> Chain:
    if g.kind != "8T":
        raise DiagramError("boundary_8T needs an 8T generator")
    out: Chain = {}
    for gen, s in _resolve(g.tokens, -4, -2, -3, -1):
        _add(out, gen, s)
    for gen, s in _resolve(g.tokens, -3, -1, -4, -2):
        _add(out, gen, -s)
    return out


def boundary_d2(g: D2Generator) -> Chain:
    return boundary_3T(g) if g.kind == "3T" else boundary_8T(g)


def d1_of_chain(chain: Mapping[D1Generator, int]) -> DiagramVector:
    out = DiagramVector()
    for g, c in chain.items():
        out += boundary_d1(g).scaled(c)
    return out


# ------------------------------------------------------------ enumeration


def _interleavings(background: Sequence[int], markers: Sequence[int]) -> Iterator[tuple[int, ...]]:
    n = len(background) + len(markers)
    orders = sorted(set(itertools.permutations(markers)))
    for places in itertools.combinations(range(n), len(markers)):
        for order in orders:
            out, it, mk = [], iter(background), dict(zip(places, order))
            for i in range(n):
                out.append(mk[i] if i in mk else next(it))
            yield tuple(out)


def _backgrounds(k: int) -> tuple[tuple[int, ...], ...]:
    return chord_index(k).codes if k >= 0 else ()


def enumerate_d1(m: int, include_fi: bool = False) -> list[D1Generator]:
    gens = {D1Generator("T4T", s.circle) for s in _seeds(m)}
    if include_fi and m >= 1:
        for bg in _backgrounds(m - 1):
            for t in _interleavings(bg, (0,)):
                gens.add(D1Generator("TFI", t))
    return sorted(gens)


def _seeds(m: int):
    from .spaces import enumerate_four_t_seeds

    return enumerate_four_t_seeds(m)


def enumerate_3T(m: int) -> list[D2Generator]:
    gens = set()
    for bg in _backgrounds(m - 2):
        for t in _interleavings(bg, (-1, -2, -3)):
            # legs are read a, b, c counterclockwise; the boundary is symmetric anyway
            gens.add(D2Generator("3T", t))
    return sorted(gens)


def enumerate_8T(m: int) -> list[D2Generator]:
    gens = set()
    for bg in _backgrounds(m - 4):
        for t in _interleavings(bg, (-1, -3, -3, -4, -4)):
            i = t.index(-1)
            gens.add(D2Generator("8T", t[: i + 1] + (-2,) + t[i + 1 :]))
    return sorted(gens)


# ------------------------------------------------------------ report


@dataclass(frozen=True)
class HutchingsReport:
    m: int
    n_d1: int
    n_d2: int
    dim_ker_upper: int
    dim_im_3T8T: int
    im_in_ker: bool

    @property
    def residual_upper(self) -> int:
        return self.dim_ker_upper - self.dim_im_3T8T

    HEADER = "m, dim_ker_upper, dim_im_3T8T, residual_upper"

    def row(self) -> str:
        return f"{self.m}, {self.dim_ker_upper}, {self.dim_im_3T8T}, {self.residual_upper}"


def hutchings_report(m: int, include_fi: bool = False, max_degree: int = 5) -> HutchingsReport:
    """Kernel of the D1 boundary against the span of 3T and 8T boundaries."""
    if m < 0 or m > max_degree:
        raise ValueError(f"degree must be in 0..{max_degree}")
    d1 = enumerate_d1(m, include_fi)
    pos = {g: i for i, g in enumerate(d1)}
    idx = chord_index(m)
    img = EchelonBasis(len(idx.codes))
    for g in d1:
        img.add({idx.lookup[c]: x for c, x in boundary_d1(g).items()})
    ker = len(d1) - img.rank

    d2 = enumerate_3T(m) + enumerate_8T(m)
    span = EchelonBasis(len(d1))
    closed = True
    for g in d2:
        chain = boundary_d2(g)
        if d1_of_chain(chain):
            closed = False
        span.add({pos[h]: Fraction(c) for h, c in chain.items()})
    return HutchingsReport(m, len(d1), len(d2), ker, span.rank, closed)
