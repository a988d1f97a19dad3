"""Parenthesized-tangle presentations of knots and their universal invariant.

A presentation is a list of events acting on a bracketed word of strand
ends.  Time runs upward and every event contributes an element of the
horizontal chord algebra on the strands it touches:

* ``cup`` and ``cap`` create and annihilate an adjacent pair; both are the
  identity (no chords).
* ``braid +`` / ``braid -`` swap the two halves of a pair ``(X Y)`` and carry
  ``R^{+1}`` / ``R^{-1}`` cabled over the leaves of X and Y.  ``braid *`` is
  a double point and carries ``R - R^{-1}``.
* ``assoc L`` rebrackets ``(X (Y Z))`` into ``((X Y) Z)`` and carries Phi;
  ``assoc R`` is the inverse move and carries ``Phi^{-1}``.  Both are cabled
  over the leaves of X, Y and Z.

A chord endpoint on a strand pointing down contributes a factor -1.  After
all events the strands close up into the knot; chord endpoints are read
along the knot's orientation, giving chord diagrams on the circle.  Those
are reduced modulo 4T and FI (or 4T alone for the framed variant).

The corrected invariant divides by ``hump_value(D) ** (c / 2)`` where ``c``
is the number of cups and caps.

Locators are dot-separated paths of 0 (left) and 1 (right) from the root of
the bracketing; the root itself is ``.``.  ``cup AT p`` places the new pair
at path ``p`` in the resulting word, next to the subtree that used to sit at
the parent of ``p``.  A cup line may end with ``+`` or ``-`` to fix whether
the left end of the new pair points up or down; otherwise orientations are
inferred from the first cup (left end up) through cups and caps.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Literal, Optional, Union

from .assoc import TangleElement, inverse, r_matrix, solve_associator
from .diagrams import Code, chord_index, format_code, relabel
from .spaces import Variant, chord_quotient

Tree = Union[int, tuple["Tree", "Tree"], None]

BUNDLED = (
    "round-unknot",
    "humped-unknot",
    "infty",
    "infty-alt",
    "trefoil-13slice",
    "trefoil-alt",
    "sing1",
    "sing1-alt",
    "sing2",
    "sing2-alt",
)


class PresentationError(ValueError):
    """An event that cannot be applied, or a malformed event file."""


# ------------------------------------------------------------ events


@dataclass(frozen=True)
class Event:
    kind: Literal["cup", "cap", "braid", "assoc"]
    at: tuple[int, ...]
    arg: str = ""  # braid: + - * ; assoc: L R ; cup: optional + -

    def __str__(self) -> str:
        loc = ".".join(map(str, self.at)) or "."
        head = f"{self.kind} {self.arg} " if self.arg and self.kind != "cup" else f"{self.kind} "
        tail = f" {self.arg}" if self.kind == "cup" and self.arg else ""
        return f"{head}AT {loc}{tail}"


def parse_locator(text: str) -> tuple[int, ...]:
    if text in (".", "root", ""):
        return ()
    try:
        path = tuple(int(t) for t in text.split("."))
    except ValueError as exc:
        raise PresentationError(f"bad locator {text!r}") from exc
    if any(p not in (0, 1) for p in path):
        raise PresentationError(f"locator {text!r} may only contain 0 and 1")
    return path


def parse_event(line: str) -> Event:
    toks = line.split()
    if "AT" not in toks:
        raise PresentationError(f"missing AT in {line!r}")
    i = toks.index("AT")
    head, rest = toks[:i], toks[i + 1 :]
    if not rest:
        raise PresentationError(f"missing locator in {line!r}")
    kind = head[0] if head else ""
    at = parse_locator(rest[0])
    if kind in ("cup", "cap"):
        if len(head) != 1:
            raise PresentationError(f"unexpected tokens in {line!r}")
        arg = ""
        if kind == "cup" and len(rest) == 2 and rest[1] in "+-":
            arg = rest[1]
        elif len(rest) != 1:
            raise PresentationError(f"unexpected tokens in {line!r}")
        return Event(kind, at, arg)
    if kind == "braid" and len(head) == 2 and head[1] in ("+", "-", "*") and len(rest) == 1:
        return Event("braid", at, head[1])
    if kind == "assoc" and len(head) == 2 and head[1] in ("L", "R") and len(rest) == 1:
        return Event("assoc", at, head[1])
    raise PresentationError(f"cannot parse event {line!r}")


@dataclass(frozen=True)
class EventSequence:
    events: tuple[Event, ...]
    name: str = ""

    @classmethod
    def parse(cls, text: str, name: str = "") -> EventSequence:
        events = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                events.append(parse_event(line))
        return cls(tuple(events), name)

    @classmethod
    def bundled(cls, name: str) -> EventSequence:
        if name not in BUNDLED:
            raise PresentationError(f"unknown bundled presentation {name!r}")
        text = resources.files("vkit.presentations").joinpath(f"{name}.events").read_text()
        return cls.parse(text, name)

    @classmethod
    def load(cls, ref: str) -> EventSequence:
        """A bundled name or a path to an event file."""
        if ref in BUNDLED:
            return cls.bundled(ref)
        with open(ref) as fh:
            return cls.parse(fh.read(), ref)

    def to_text(self) -> str:
        return "".join(f"{e}\n" for e in self.events)

    @property
    def singular_count(self) -> int:
        return sum(1 for e in self.events if e.kind == "braid" and e.arg == "*")

    def resolutions(self) -> Iterator[tuple[int, EventSequence]]:
        """All (sign, sequence) with double points replaced by crossings.

        The sign is +1 when every double point is resolved into its positive
        crossing with respect to the knot orientation.
        """
        trace = validate(self)
        idx = [k for k, e in enumerate(self.events) if e.kind == "braid" and e.arg == "*"]
        eps = [trace.double_point_sign(k) for k in idx]
        for signs in itertools.product((1, -1), repeat=len(idx)):
            ev = list(self.events)
            for k, s, e in zip(idx, signs, eps):
                ev[k] = Event("braid", ev[k].at, "+" if s * e > 0 else "-")
            sign = 1
            for s in signs:
                sign *= s
            yield sign, EventSequence(tuple(ev), self.name)


# ------------------------------------------------------------ word tree


def _get(t: Tree, path: Sequence[int]) -> Tree:
    for p in path:
        if not isinstance(t, tuple):
            raise PresentationError(f"locator runs past a leaf at {_fmt(path)}")
        t = t[p]
    return t


def _set(t: Tree, path: Sequence[int], new: Tree) -> Tree:
    if not path:
        return new
    if not isinstance(t, tuple):
        raise PresentationError(f"locator runs past a leaf at {_fmt(path)}")
    p = path[0]
    left, right = t
    return (_set(left, path[1:], new), right) if p == 0 else (left, _set(right, path[1:], new))


def _leaves(t: Tree) -> list[int]:
    if t is None:
        return []
    if isinstance(t, int):
        return [t]
    return _leaves(t[0]) + _leaves(t[1])


def _fmt(path: Sequence[int]) -> str:
    return ".".join(map(str, path)) or "."


def _shape(t: Tree, names: Mapping[int, str] | None = None) -> str:
    if t is None:
        return "()"
    if isinstance(t, int):
        return names[t] if names else f"x{t}"
    return f"({_shape(t[0], names)} {_shape(t[1], names)})"


@dataclass
class Step:
    """What one event did: the element to insert and on which leaf blocks."""

    kind: str
    arg: str
    blocks: tuple[tuple[int, ...], ...] = ()
    created: tuple[int, int] | None = None
    removed: tuple[int, int] | None = None
    word: str = ""


@dataclass
class Trace:
    """Result of validating a presentation."""

    steps: list[Step]
    orientation: dict[int, int]
    birth: dict[int, int]
    death: dict[int, int]
    cup_partner: dict[int, int]
    cap_partner: dict[int, int]
    critical_points: int
    components: int
    order: list[int] = field(default_factory=list)

    @property
    def c(self) -> int:
        return self.critical_points

    def double_point_sign(self, k: int) -> int:
        """Sign of the crossing that ``braid +`` would produce at event k.

        For two single strands it is the product of their orientations.
        """
        step = self.steps[k]
        x, y = step.blocks
        return self.orientation[x[0]] * self.orientation[y[0]]


def validate(seq: EventSequence) -> Trace:
    """Replay the events, checking each one applies; infer orientations.

    Raises :class:`PresentationError` naming the first bad event.
    """
    word: Tree = None
    nxt = 0
    steps: list[Step] = []
    birth: dict[int, int] = {}
    death: dict[int, int] = {}
    cup_partner: dict[int, int] = {}
    cap_partner: dict[int, int] = {}
    fixed: dict[int, int] = {}
    for k, ev in enumerate(seq.events):
        where = f"event {k + 1} ({ev})"
        try:
            if ev.kind == "cup":
                a, b = nxt, nxt + 1
                nxt += 2
                pair: Tree = (a, b)
                if word is None:
                    if ev.at:
                        raise PresentationError("the first cup must be AT .")
                    word = pair
                else:
                    if not ev.at:
                        raise PresentationError("a cup into a nonempty word needs a side")
                    parent = ev.at[:-1]
                    old = _get(word, parent)
                    word = _set(word, parent, (pair, old) if ev.at[-1] == 0 else (old, pair))
                birth[a] = birth[b] = k
                cup_partner[a], cup_partner[b] = b, a
                if ev.arg:
                    fixed[a] = 1 if ev.arg == "+" else -1
                steps.append(Step("cup", ev.arg, created=(a, b)))
            elif ev.kind == "cap":
                node = _get(word, ev.at)
                if not (isinstance(node, tuple) and all(isinstance(x, int) for x in node)):
                    raise PresentationError(f"expected a pair of two strand ends, found {_shape(node)}")
                a, b = node  # type: ignore[misc]
                if ev.at:
                    parent = ev.at[:-1]
                    sib = _get(word, parent)[1 - ev.at[-1]]  # type: ignore[index]
                    word = _set(word, parent, sib)
                else:
                    word = None
                death[a] = death[b] = k
                cap_partner[a], cap_partner[b] = b, a
                steps.append(Step("cap", "", removed=(a, b)))
            elif ev.kind == "braid":
                node = _get(word, ev.at)
                if not isinstance(node, tuple):
                    raise PresentationError(f"braid needs a pair (X Y), found {_shape(node)}")
                x, y = node
                if ev.arg == "*" and not (isinstance(x, int) and isinstance(y, int)):
                    raise PresentationError("a double point needs two single strands")
                word = _set(word, ev.at, (y, x))
                steps.append(Step("braid", ev.arg, blocks=(tuple(_leaves(x)), tuple(_leaves(y)))))
            elif ev.kind == "assoc":
                node = _get(word, ev.at)
                if ev.arg == "L":
                    if not (isinstance(node, tuple) and isinstance(node[1], tuple)):
                        raise PresentationError(f"assoc L needs (X (Y Z)), found {_shape(node)}")
                    x, (y, z) = node
                    word = _set(word, ev.at, ((x, y), z))
                else:
                    if not (isinstance(node, tuple) and isinstance(node[0], tuple)):
                        raise PresentationError(f"assoc R needs ((X Y) Z), found {_shape(node)}")
                    (x, y), z = node
                    word = _set(word, ev.at, (x, (y, z)))
                blocks = (tuple(_leaves(x)), tuple(_leaves(y)), tuple(_leaves(z)))
                steps.append(Step("assoc", ev.arg, blocks=blocks))
            else:  # pragma: no cover - parse_event rejects other kinds
                raise PresentationError(f"unknown event kind {ev.kind!r}")
        except PresentationError as exc:
            raise PresentationError(f"{where}: {exc}") from None
        except (IndexError, TypeError):
            raise PresentationError(f"{where}: locator does not match the word {_shape(word)}") from None
        steps[-1].word = _shape(word)
    if word is not None:
        raise PresentationError(f"final word {_shape(word)} is not empty")

    # orientations: cup and cap partners point in opposite directions
    orient: dict[int, int] = {}
    components = 0
    order: list[int] = []
    for start in sorted(birth):
        if start in orient:
            continue
        components += 1
        orient[start] = fixed.get(start, 1)
        # walk the component, alternating cap and cup partners
        cur, d = start, orient[start]
        while True:
            order.append(cur)
            nxt_leaf = cap_partner[cur] if d > 0 else cup_partner[cur]
            d = -d
            if nxt_leaf == start:
                break
            if nxt_leaf in orient and orient[nxt_leaf] != d:
                raise PresentationError("inconsistent strand orientations")
            orient[nxt_leaf] = d
            cur = nxt_leaf
    for leaf, o in fixed.items():
        if orient[leaf] != o:
            raise PresentationError(f"cup orientation marks contradict each other at strand {leaf}")
    if components != 1:
        raise PresentationError(f"presentation closes into {components} components, expected 1")
    c = sum(1 for s in steps if s.kind in ("cup", "cap"))
    return Trace(steps, orient, birth, death, cup_partner, cap_partner, c, components, order)


# ------------------------------------------------------------ chord series


class ChordSeries:
    """Truncated element of A^r (or A) in quotient coordinates by degree."""

    def __init__(self, D: int, variant: Variant, comps: Mapping[int, Mapping[Code, Fraction]] | None = None):
        self.D = D
        self.variant = variant
        self.comps: dict[int, dict[Code, Fraction]] = {}
        for k, v in (comps or {}).items():
            v = {c: Fraction(x) for c, x in v.items() if x}
            if v and k <= D:
                self.comps[k] = v

    @classmethod
    def one(cls, D: int, variant: Variant) -> ChordSeries:
        return cls(D, variant, {0: {(): Fraction(1)}})

    @classmethod
    def from_raw(cls, D: int, variant: Variant, raw: Mapping[int, Mapping[Code, Fraction]]) -> ChordSeries:
        """Reduce raw canonical chord combinations into quotient coordinates."""
        comps = {}
        for k, v in raw.items():
            if k <= D and v:
                comps[k] = chord_quotient(k, variant).coordinates(v)
        return cls(D, variant, comps)

    def component(self, k: int) -> dict[Code, Fraction]:
        return dict(self.comps.get(k, {}))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChordSeries):
            return NotImplemented
        return (self.D, self.variant, self.comps) == (other.D, other.variant, other.comps)

    def _like(self, other: ChordSeries) -> None:
        if (self.D, self.variant) != (other.D, other.variant):
            raise ValueError("series with different truncation or variant")

    def __add__(self, other: ChordSeries) -> ChordSeries:
        self._like(other)
        comps: dict[int, dict[Code, Fraction]] = {k: dict(v) for k, v in self.comps.items()}
        for k, v in other.comps.items():
            dst = comps.setdefault(k, {})
            for c, x in v.items():
                dst[c] = dst.get(c, 0) + x
        return ChordSeries(self.D, self.variant, comps)

    def scale(self, s: Fraction | int) -> ChordSeries:
        return ChordSeries(self.D, self.variant, {k: {c: x * s for c, x in v.items()} for k, v in self.comps.items()})

    def __sub__(self, other: ChordSeries) -> ChordSeries:
        return self + other.scale(-1)

    def __mul__(self, other: ChordSeries) -> ChordSeries:
        """Connected sum, well defined modulo 4T."""
        self._like(other)
        raw: dict[int, dict[Code, Fraction]] = {}
        for k1, v1 in self.comps.items():
            for k2, v2 in other.comps.items():
                k = k1 + k2
                if k > self.D:
                    continue
                idx = chord_index(k)
                dst = raw.setdefault(k, {})
                for c1, x1 in v1.items():
                    for c2, x2 in v2.items():
                        code = idx.codes[idx.lookup[relabel(c1 + tuple(y + k1 for y in c2))]]
                        dst[code] = dst.get(code, 0) + x1 * x2
        return ChordSeries.from_raw(self.D, self.variant, raw)

    def inverse(self) -> ChordSeries:
        one = ChordSeries.one(self.D, self.variant)
        c0 = self.comps.get(0, {}).get((), Fraction(0))
        if c0 != 1:
            raise ValueError("series must have constant term 1 to be inverted")
        x = one - self
        out = one
        term = one
        for _ in range(self.D):
            term = term * x
            out = out + term
        return out

    def __pow__(self, e: int) -> ChordSeries:
        base = self if e >= 0 else self.inverse()
        out = ChordSeries.one(self.D, self.variant)
        for _ in range(abs(e)):
            out = out * base
        return out

    def to_text(self) -> str:
        lines = []
        for k in sorted(self.comps):
            for c in sorted(self.comps[k]):
                x = self.comps[k][c]
                lines.append(f"{k}\t{x.numerator}/{x.denominator}\t{format_code(c) or '-'}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "degree": self.D,
            "variant": self.variant,
            "terms": [
                {"degree": k, "code": list(c), "coef": str(self.comps[k][c])}
                for k in sorted(self.comps)
                for c in sorted(self.comps[k])
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> ChordSeries:
        comps: dict[int, dict[Code, Fraction]] = {}
        for t in data["terms"]:
            comps.setdefault(int(t["degree"]), {})[tuple(t["code"])] = Fraction(t["coef"])
        return cls(int(data["degree"]), data["variant"], comps)

    def __repr__(self) -> str:
        return f"ChordSeries(D={self.D}, {self.variant}, {self.comps})"


# ------------------------------------------------------------ evaluation


@lru_cache(maxsize=8)
def _associator(D: int) -> tuple[TangleElement, TangleElement, TangleElement]:
    R, phi, _ = solve_associator(max(D, 1))
    return R.truncate(D), phi.truncate(D), inverse(phi).truncate(D)


def _by_degree(a: TangleElement) -> dict[int, list[tuple[tuple, Fraction]]]:
    out: dict[int, list[tuple[tuple, Fraction]]] = {}
    for w, c in sorted(a.terms.items()):
        out.setdefault(len(w), []).append((w, c))
    return out


def _cabled(a: TangleElement, blocks: Sequence[Sequence[int]], D: int) -> list[list[tuple[tuple[tuple[int, int], ...], Fraction]]]:
    """Terms of ``a`` with strand k spread over the leaves ``blocks[k]``.

    Returned per degree: lists of (chords, coefficient) where each chord is
    a pair of leaves and chords are in time order.
    """
    per = [[] for _ in range(D + 1)]
    for w, c in a.terms.items():
        if len(w) > D:
            continue
        choices = [[(x, y) for x in blocks[i - 1] for y in blocks[j - 1]] for i, j in w]
        for lifted in itertools.product(*choices):
            per[len(w)].append((lifted, c))
    return per


class _Evaluator:
    def __init__(self, trace: Trace, D: int, variant: Variant):
        self.trace = trace
        self.D = D
        self.variant = variant
        R, phi, phi_inv = _associator(D)
        R_inv = inverse(R)
        self.elements = {
            ("braid", "+"): R,
            ("braid", "-"): R_inv,
            ("braid", "*"): R - R_inv,
            ("assoc", "L"): phi,
            ("assoc", "R"): phi_inv,
        }
        rank = {leaf: i for i, leaf in enumerate(trace.order)}
        self.rank = rank

    def event_terms(self) -> list[list[list[tuple[tuple[tuple[int, int], ...], Fraction]]]]:
        out = []
        for k, step in enumerate(self.trace.steps):
            if step.kind in ("cup", "cap"):
                continue
            elem = self.elements[(step.kind, step.arg)]
            if step.arg == "*":
                elem = elem.scale(self.trace.double_point_sign(k))
            out.append(_cabled(elem, step.blocks, self.D))
        return out

    def run(self) -> dict[int, dict[Code, Fraction]]:
        events = self.event_terms()
        orient = self.trace.orientation
        rank = self.rank
        raw: dict[int, dict[Code, Fraction]] = {}
        D = self.D
        # Each chord gets a time stamp (event, position); endpoints are sorted
        # by (place of the strand along the knot, +-time).
        chords: list[tuple[int, int, int]] = []

        def close(coef: Fraction) -> None:
            m = len(chords)
            pts = []
            sign = 1
            for label, (x, y, t) in enumerate(chords):
                for leaf in (x, y):
                    o = orient[leaf]
                    if o < 0:
                        sign = -sign
                    pts.append((rank[leaf], t * o, label))
            pts.sort()
            idx = chord_index(m)
            code = idx.codes[idx.lookup[relabel(p[2] for p in pts)]]
            dst = raw.setdefault(m, {})
            dst[code] = dst.get(code, 0) + sign * coef

        def rec(e: int, budget: int, coef: Fraction, t0: int) -> None:
            if e == len(events):
                close(coef)
                return
            per = events[e]
            for k in range(0, min(budget, len(per) - 1) + 1):
                for lifted, c in per[k]:
                    for i, (x, y) in enumerate(lifted):
                        chords.append((x, y, t0 + i))
                    rec(e + 1, budget - k, coef * c, t0 + D + 1)
                    del chords[len(chords) - k :]

        rec(0, D, Fraction(1), 0)
        return raw


def evaluate_raw(seq: EventSequence, D: int, variant: Variant = "reduced") -> ChordSeries:
    """Closure of the composed event elements, reduced to quotient coordinates."""
    if D < 0:
        raise PresentationError("truncation degree must be nonnegative")
    trace = validate(seq)
    raw = _Evaluator(trace, D, variant).run()
    return ChordSeries.from_raw(D, variant, raw)


@lru_cache(maxsize=16)
def hump_value(D: int, variant: Variant = "reduced", presentation: str = "infty") -> ChordSeries:
    """Raw value of the four-critical-point unknot."""
    return evaluate_raw(EventSequence.bundled(presentation), D, variant)


def evaluate_corrected(seq: EventSequence, D: int, variant: Variant = "reduced") -> ChordSeries:
    trace = validate(seq)
    raw = ChordSeries.from_raw(D, variant, _Evaluator(trace, D, variant).run())
    return raw * hump_value(D, variant) ** (-(trace.c // 2))


def evaluate_normalized(seq: EventSequence, D: int, variant: Variant = "reduced") -> ChordSeries:
    """Corrected value divided by the corrected unknot, so the unknot maps to 1.

    This normalization is multiplicative under :func:`connected_sum`.
    """
    return evaluate_corrected(seq, D, variant) * hump_value(D, variant)


def evaluate_singular(seq: EventSequence, D: int, variant: Variant = "reduced") -> ChordSeries:
    """Signed sum of corrected values over all resolutions of double points."""
    if seq.singular_count == 0:
        raise PresentationError("presentation has no double points")
    out = None
    for sign, res in seq.resolutions():
        val = evaluate_corrected(res, D, variant).scale(sign)
        out = val if out is None else out + val
    assert out is not None
    return out


def connected_sum(a: EventSequence, b: EventSequence) -> EventSequence:
    """Presentation of ``a # b``: b is run beside the last pair of a, then the two are spliced.

    Both inputs must begin with ``cup AT .`` and end with ``cap AT .``.
    """
    for seq in (a, b):
        ev = seq.events
        if len(ev) < 2 or ev[0] != Event("cup", ()) or ev[-1] != Event("cap", ()):
            raise PresentationError("connected sum needs presentations that open and close at the root")
    inner = [Event(e.kind, (1,) + e.at, "" if e.kind == "cup" else e.arg) for e in b.events[1:-1]]
    splice = [
        Event("assoc", (), "R"),
        Event("assoc", (1,), "L"),
        Event("cap", (1, 0)),
        Event("cap", ()),
    ]
    events = list(a.events[:-1]) + [Event("cup", (1,))] + inner + splice
    name = f"{a.name}#{b.name}" if a.name and b.name else ""
    return EventSequence(tuple(events), name)
