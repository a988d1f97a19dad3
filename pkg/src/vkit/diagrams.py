"""Chord diagrams and Jacobi diagrams: canonical forms and enumeration.

A chord diagram of degree ``m`` is a sequence of ``2m`` labels read
counterclockwise around an oriented circle; each label occurs twice.
Diagrams are considered up to rotation of the basepoint and renaming of
labels, never up to reflection.  The canonical code is the least rotation
after renumbering labels by first occurrence, so ``(1, 2, 2, 1)`` becomes
``(1, 1, 2, 2)``.

A Jacobi diagram is stored by half-edges.  Edge ``e`` consists of the
half-edges ``2e`` and ``2e + 1``; the partner of ``h`` is ``h ^ 1``.  The
``circle`` tuple lists the half-edges ending on the circle (the legs) in
counterclockwise order and each entry of ``vertices`` is the cyclic order of
the three half-edges at one internal trivalent vertex.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

Code = tuple[int, ...]


class DiagramError(ValueError):
    """Malformed diagram input."""


# ------------------------------------------------------------ chord codes


def relabel(seq: Iterable[int]) -> Code:
    """Renumber labels 1, 2, ... in order of first occurrence."""
    names: dict[int, int] = {}
    out = []
    for x in seq:
        y = names.get(x)
        if y is None:
            y = names[x] = len(names) + 1
        out.append(y)
    return tuple(out)


def validate_code(code: Sequence[int]) -> Code:
    code = tuple(code)
    counts: dict[int, int] = {}
    for x in code:
        if not isinstance(x, int) or isinstance(x, bool):
            raise DiagramError(f"label {x!r} is not an integer")
        counts[x] = counts.get(x, 0) + 1
    for x, k in counts.items():
        if k != 2:
            raise DiagramError(f"label {x} occurs {k} times, expected 2")
    if len(code) % 2:
        raise DiagramError(f"code length {len(code)} is odd")
    return code


def rotations(code: Code) -> Iterable[Code]:
    for r in range(len(code)):
        yield code[r:] + code[:r]


def canonical_code(code: Sequence[int]) -> Code:
    """Least relabelled rotation of a chord code."""
    code = validate_code(code)
    if not code:
        return ()
    return min(relabel(rot) for rot in rotations(code))


def parse_code(text: str) -> Code:
    try:
        return tuple(int(t) for t in text.split())
    except ValueError as exc:
        raise DiagramError(f"bad chord code {text!r}") from exc


def format_code(code: Sequence[int]) -> str:
    return " ".join(map(str, code))


def has_isolated_chord(code: Code) -> bool:
    n = len(code)
    return any(code[i] == code[(i + 1) % n] for i in range(n))


@dataclass(frozen=True, order=True)
class ChordDiagram:
    code: Code

    def __post_init__(self) -> None:
        object.__setattr__(self, "code", validate_code(self.code))

    @property
    def degree(self) -> int:
        return len(self.code) // 2

    def canonical(self) -> ChordDiagram:
        return ChordDiagram(canonical_code(self.code))

    @classmethod
    def from_text(cls, text: str) -> ChordDiagram:
        return cls(parse_code(text))

    def __str__(self) -> str:
        return format_code(self.code)


def _pairings(m: int) -> Iterable[Code]:
    """All first-occurrence labelled pairings of 2m points, in lex order."""
    n = 2 * m
    seq = [0] * n

    def rec(pos: int, nxt: int, open_: list[int]) -> Iterable[Code]:
        if pos == n:
            yield tuple(seq)
            return
        # labels already opened and still unmatched, then a new label
        for lab in sorted(open_):
            seq[pos] = lab
            open_.remove(lab)
            yield from rec(pos + 1, nxt, open_)
            open_.append(lab)
        if nxt <= m and len(open_) < n - pos:
            seq[pos] = nxt
            open_.append(nxt)
            yield from rec(pos + 1, nxt + 1, open_)
            open_.remove(nxt)

    yield from rec(0, 1, [])


class ChordIndex:
    """Canonical degree-m chord codes together with a lookup table.

    ``lookup`` sends every relabelled rotation of a canonical code to the
    position of that code in ``codes``, so canonicalising a relabelled code
    is a single dictionary access.
    """

    def __init__(self, m: int) -> None:
        self.m = m
        codes: list[Code] = []
        lookup: dict[Code, int] = {}
        # Pairings come out in lex order, so the first member of each rotation
        # orbit that we meet is its least element, i.e. the canonical code.
        for c in _pairings(m):
            if c in lookup:
                continue
            k = len(codes)
            codes.append(c)
            for rot in rotations(c):
                lookup.setdefault(relabel(rot), k)
            if not c:
                lookup[()] = k
        self.codes = codes
        self.lookup = lookup

    def __len__(self) -> int:
        return len(self.codes)

    def index(self, seq: Sequence[int]) -> int:
        """Index of the canonical form of an arbitrary (unrelabelled) code."""
        return self.lookup[relabel(seq)]


@lru_cache(maxsize=16)
def chord_index(m: int) -> ChordIndex:
    if m < 0:
        raise DiagramError("degree must be nonnegative")
    return ChordIndex(m)


def enumerate_chord_diagrams(m: int) -> list[ChordDiagram]:
    """Sorted list of all canonical degree-m chord diagrams."""
    return [ChordDiagram(c) for c in chord_index(m).codes]


# --------------------------------------------------------- Jacobi diagrams


@dataclass(frozen=True)
class JacobiDiagram:
    """Circle legs and internal trivalent vertices, stored by half-edges."""

    circle: tuple[int, ...]
    vertices: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        circle = tuple(self.circle)
        verts = tuple(tuple(v) for v in self.vertices)
        object.__setattr__(self, "circle", circle)
        object.__setattr__(self, "vertices", verts)
        seen: set[int] = set()
        for h in itertools.chain(circle, *verts):
            if h in seen:
                raise DiagramError(f"half-edge {h} used twice")
            seen.add(h)
        for v in verts:
            if len(v) != 3:
                raise DiagramError(f"internal vertex {v} is not trivalent")
        for h in seen:
            if h ^ 1 not in seen:
                raise DiagramError(f"half-edge {h} has no partner")

    @property
    def degree(self) -> int:
        return (len(self.circle) + len(self.vertices)) // 2

    @property
    def n_internal(self) -> int:
        return len(self.vertices)

    def locations(self) -> dict[int, tuple[str, int]]:
        """Map half-edge -> ('leg', position) or ('vertex', index)."""
        loc = {h: ("leg", i) for i, h in enumerate(self.circle)}
        for k, v in enumerate(self.vertices):
            for h in v:
                loc[h] = ("vertex", k)
        return loc

    def chord_code(self) -> Code:
        if self.vertices:
            raise DiagramError("diagram has internal vertices")
        return relabel(h >> 1 for h in self.circle)

    @classmethod
    def from_chord_code(cls, code: Sequence[int]) -> JacobiDiagram:
        code = validate_code(code)
        first: dict[int, int] = {}
        circle = []
        for x in code:
            if x in first:
                circle.append(2 * first[x] + 1)
            else:
                first[x] = len(first)
                circle.append(2 * first[x])
        return cls(tuple(circle))

    def flip(self, k: int) -> JacobiDiagram:
        """Reverse the cyclic order at internal vertex ``k``."""
        a, b, c = self.vertices[k]
        verts = list(self.vertices)
        verts[k] = (b, a, c)
        return JacobiDiagram(self.circle, tuple(verts))

    # text format

    def to_text(self) -> str:
        edges = sorted({h >> 1 for h in self.circle} | {h >> 1 for v in self.vertices for h in v})
        ename = {e: f"e{i + 1}" for i, e in enumerate(edges)}
        node = {}
        for i, h in enumerate(self.circle):
            node[h] = f"l{i + 1}"
        for k, v in enumerate(self.vertices):
            for h in v:
                node[h] = f"v{k + 1}"
        lines = ["legs: " + " ".join(f"l{i + 1}" for i in range(len(self.circle)))]
        for k, v in enumerate(self.vertices):
            lines.append(f"v{k + 1}: " + " ".join(ename[h >> 1] for h in v))
        for e in edges:
            lines.append(f"{node[2 * e]} - {node[2 * e + 1]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> JacobiDiagram:
        legs: list[str] | None = None
        vlines: list[tuple[str, list[str]]] = []
        elines: list[tuple[str, str]] = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("legs:"):
                legs = line[5:].split()
            elif " - " in line:
                x, y = (t.strip() for t in line.split(" - "))
                elines.append((x, y))
            elif ":" in line:
                name, rest = line.split(":", 1)
                vlines.append((name.strip(), rest.split()))
            else:
                raise DiagramError(f"unrecognised line {raw!r}")
        if legs is None:
            raise DiagramError("missing 'legs:' line")
        enames = {f"e{i + 1}": i for i in range(len(elines))}
        vnames = {name for name, _ in vlines}
        for i, (x, y) in enumerate(elines):
            for z in (x, y):
                if z not in vnames and z not in legs:
                    raise DiagramError(f"edge e{i + 1} mentions unknown node {z!r}")
        # Half-edge 2e sits at the first node of the edge line, 2e+1 at the second.
        free: dict[tuple[int, str], list[int]] = {}
        for i, (x, y) in enumerate(elines):
            free.setdefault((i, x), []).append(2 * i)
            free.setdefault((i, y), []).append(2 * i + 1)

        def take(e: int, nd: str) -> int:
            lst = free.get((e, nd))
            if not lst:
                raise DiagramError(f"edge e{e + 1} does not end at {nd!r} often enough")
            return lst.pop(0)

        circle = []
        for leg in legs:
            es = [i for i, (x, y) in enumerate(elines) if leg in (x, y)]
            if len(es) != 1:
                raise DiagramError(f"leg {leg!r} has {len(es)} edges, expected 1")
            circle.append(take(es[0], leg))
        verts = []
        for name, es in vlines:
            if len(es) != 3:
                raise DiagramError(f"vertex {name!r} lists {len(es)} edges, expected 3")
            try:
                verts.append(tuple(take(enames[e], name) for e in es))
            except KeyError as exc:
                raise DiagramError(f"vertex {name!r}: unknown edge {exc.args[0]!r}") from exc
        leftover = [h for lst in free.values() for h in lst]
        if leftover:
            raise DiagramError(f"edges e{leftover[0] // 2 + 1} not attached at both ends")
        return cls(tuple(circle), tuple(verts))


def jacobi_class_key(d: JacobiDiagram) -> tuple:
    """Key identifying the diagram up to rotation and graph isomorphism.

    Cyclic orders at vertices are ignored, so this is the unoriented class.
    For diagrams without internal vertices the first component is the
    canonical chord code.
    """
    L = len(d.circle)
    loc = d.locations()
    # neighbour entity of each leg: ('leg', j) or ('vertex', k)
    nbr = [loc[h ^ 1] for h in d.circle]
    vedges: list[tuple[int, int]] = []
    for k, v in enumerate(d.vertices):
        for h in v:
            kind, j = loc[h ^ 1]
            if kind == "vertex" and (k < j or (k == j and h < h ^ 1)):
                vedges.append((k, j))
    V = len(d.vertices)
    best = None
    for r in range(max(L, 1)):
        labels: dict[object, int] = {}
        code = []
        kinds = []
        for i in range(L):
            p = (i + r) % L
            kind, j = nbr[p]
            ent = ("c", min(p, j), max(p, j)) if kind == "leg" else ("v", j)
            lab = labels.get(ent)
            if lab is None:
                lab = labels[ent] = len(labels) + 1
                kinds.append(0 if kind == "leg" else 1)
            code.append(lab)
        vlab = {ent[1]: lab for ent, lab in labels.items() if ent[0] == "v"}
        rest = [k for k in range(V) if k not in vlab]
        base = len(labels)
        for perm in itertools.permutations(rest):
            vl = dict(vlab)
            for t, k in enumerate(perm):
                vl[k] = base + t + 1
            es = tuple(sorted(tuple(sorted((vl[a], vl[b]))) for a, b in vedges))
            key = (tuple(code), tuple(kinds), len(rest), es)
            if best is None or key < best:
                best = key
    return (V,) + best if best is not None else (V, (), (), 0, ())


def _jacobi_from_key(key: tuple) -> JacobiDiagram:
    V, code, kinds, n_rest, es = key
    # entity label -> node; chords connect legs directly
    n_ent = len(kinds)
    vid: dict[int, int] = {}
    for lab in range(1, n_ent + 1):
        if kinds[lab - 1] == 1:
            vid[lab] = len(vid)
    for t in range(n_rest):
        vid[n_ent + t + 1] = len(vid)
    stubs: list[list[int]] = [[] for _ in range(V)]
    circle = []
    e = 0
    pending: dict[int, int] = {}
    for lab in code:
        if kinds[lab - 1] == 0:
            if lab in pending:
                circle.append(pending.pop(lab) ^ 1)
            else:
                pending[lab] = 2 * e
                circle.append(2 * e)
                e += 1
        else:
            circle.append(2 * e)
            stubs[vid[lab]].append(2 * e + 1)
            e += 1
    for a, b in es:
        stubs[vid[a]].append(2 * e)
        stubs[vid[b]].append(2 * e + 1)
        e += 1
    verts = tuple(tuple(sorted(s)) for s in stubs)
    return JacobiDiagram(tuple(circle), verts)


def _multigraphs(caps: list[int]) -> Iterable[list[tuple[int, int]]]:
    """All multigraphs (loops allowed) realising the given vertex degrees."""
    n = len(caps)
    pairs = [(a, b) for a in range(n) for b in range(a, n)]

    def rec(k: int, caps: list[int], acc: list[tuple[int, int]]):
        if all(c == 0 for c in caps):
            yield list(acc)
            return
        if k == len(pairs):
            return
        a, b = pairs[k]
        # the first vertex with remaining capacity must be served now or later;
        # simple bounded recursion over multiplicities of pair k
        maxm = caps[a] // 2 if a == b else min(caps[a], caps[b])
        for mult in range(maxm, -1, -1):
            if a == b:
                caps[a] -= 2 * mult
            else:
                caps[a] -= mult
                caps[b] -= mult
            ok = True
            # once all pairs touching a are passed, its capacity must be zero
            if b == n - 1 and caps[a] != 0:
                ok = False
            if ok:
                acc.extend([(a, b)] * mult)
                yield from rec(k + 1, caps, acc)
                del acc[len(acc) - mult :]
            if a == b:
                caps[a] += 2 * mult
            else:
                caps[a] += mult
                caps[b] += mult

    yield from rec(0, list(caps), [])


def _leg_assignments(L: int, V: int) -> Iterable[tuple[list[tuple[str, int]], list[int]]]:
    """Assign each leg a partner leg or a vertex; new vertices in order."""
    nbr: list[tuple[str, int] | None] = [None] * L
    used = [0] * V

    def rec(i: int, nv: int):
        if i == L:
            yield [x for x in nbr], [3 - u for u in used], nv  # type: ignore[misc]
            return
        if nbr[i] is not None:
            yield from rec(i + 1, nv)
            return
        for j in range(i + 1, L):
            if nbr[j] is None:
                nbr[i], nbr[j] = ("leg", j), ("leg", i)
                yield from rec(i + 1, nv)
                nbr[i] = nbr[j] = None
        for k in range(min(nv + 1, V)):
            if used[k] < 3:
                used[k] += 1
                nbr[i] = ("vertex", k)
                yield from rec(i + 1, max(nv, k + 1))
                nbr[i] = None
                used[k] -= 1

    for nb, caps, nv in rec(0, 0):
        yield nb, caps


def _jacobi_classes(m: int, V: int) -> list[tuple]:
    L = 2 * m - V
    if V == 0:
        return [(0, c, (0,) * m, 0, ()) for c in chord_index(m).codes]
    keys = set()
    for nb, caps in _leg_assignments(L, V):
        for es in _multigraphs(caps):
            # connectivity: every vertex reachable from a leg-adjacent vertex
            adj: dict[int, set[int]] = {k: set() for k in range(V)}
            for a, b in es:
                adj[a].add(b)
                adj[b].add(a)
            start = {j for kind, j in nb if kind == "vertex"}
            seen = set(start)
            stack = list(start)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != V:
                continue
            d = _build_jacobi(nb, es, V)
            keys.add(jacobi_class_key(d))
    return sorted(keys)


def _build_jacobi(nb: list[tuple[str, int]], es: list[tuple[int, int]], V: int) -> JacobiDiagram:
    circle: list[int] = [0] * len(nb)
    stubs: list[list[int]] = [[] for _ in range(V)]
    e = 0
    for i, (kind, j) in enumerate(nb):
        if kind == "leg":
            if j > i:
                circle[i], circle[j] = 2 * e, 2 * e + 1
                e += 1
        else:
            circle[i] = 2 * e
            stubs[j].append(2 * e + 1)
            e += 1
    for a, b in es:
        stubs[a].append(2 * e)
        stubs[b].append(2 * e + 1)
        e += 1
    return JacobiDiagram(tuple(circle), tuple(tuple(s) for s in stubs))


def enumerate_jacobi_diagrams(m: int, max_internal: int) -> list[JacobiDiagram]:
    """One representative per unoriented isomorphism class.

    Classes are ordered by internal vertex count and then by their key; with
    ``max_internal=0`` the output matches :func:`enumerate_chord_diagrams`.
    Representatives carry the standard orientation (half-edges at each vertex
    in increasing order).  At least two legs are required.
    """
    if m < 0:
        raise DiagramError("degree must be nonnegative")
    bound = max(2 * m - 2, 0)
    if max_internal < 0 or max_internal > bound:
        raise DiagramError(f"max_internal must lie in 0..{bound} at degree {m}")
    out = []
    for V in range(0, max_internal + 1):
        out.extend(_jacobi_from_key(k) for k in _jacobi_classes(m, V))
    return out
