"""Horizontal chord algebras A(n) and a rational associator.

Elements are finite sums of words in the generators ``t_ij`` (``i < j``),
truncated at a degree ``D``.  A word lists its chords from the bottom of the
strands to the top, i.e. in time order.  The product is composition:
``a * b`` means "first ``b``, then ``a``", so its words are
``word(b) + word(a)``.

Normal form.  The defining relations are ``[t_ij, t_ik + t_jk] = 0`` and
``[t_ij, t_kl] = 0`` for disjoint index pairs.  Put ``block(t_ij) = j``.
Normal words are those whose block sequence is weakly decreasing; inside a
block the letters are free.  Any word is brought to normal form with the
rewriting rule ``x y -> y x + [x, y]`` for ``block(x) < block(y)``, where the
commutator lands in ``block(y)``::

    [t_ij, t_kp] = 0                       if k not in {i, j}
    [t_ij, t_ip] = t_ip t_jp - t_jp t_ip
    [t_ij, t_jp] = t_jp t_ip - t_ip t_jp

The number of normal words of degree k is the coefficient of ``x^k`` in
``prod_{j<n} 1/(1 - j x)``, the known Hilbert series, and the test suite
cross-checks this against a direct rank computation of the relation ideal.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .qlinalg import EchelonBasis, Inconsistent, SparseMatrix, solve_affine

Letter = tuple[int, int]
Word = tuple[Letter, ...]


class AssocError(ValueError):
    pass


class InconsistentDegree(ArithmeticError):
    """The degree step of the associator solver has no solution."""

    def __init__(self, degree: int, certificate: Inconsistent):
        super().__init__(f"associator equations inconsistent at degree {degree}")
        self.degree = degree
        self.certificate = certificate


def letter(i: int, j: int) -> Letter:
    if i == j:
        raise AssocError(f"t_{i}{j} is not a generator")
    return (i, j) if i < j else (j, i)


def letter_name(l: Letter) -> str:
    i, j = l
    return f"t{i}{j}" if max(i, j) < 10 else f"t{i},{j}"


def parse_letter(s: str) -> Letter:
    body = s[1:] if s.startswith("t") else s
    if "," in body:
        i, j = body.split(",")
    elif len(body) == 2:
        i, j = body[0], body[1]
    else:
        raise AssocError(f"cannot parse generator {s!r}")
    return letter(int(i), int(j))


# ------------------------------------------------------------ normal form


def _comm(x: Letter, y: Letter) -> tuple[tuple[Word, int], ...]:
    """[x, y] for block(x) < block(y), written in block(y)."""
    i, j = x
    k, p = y
    if k == i:
        a, b = (i, p), (j, p)
    elif k == j:
        a, b = (j, p), (i, p)
    else:
        return ()
    return (((a, b), 1), ((b, a), -1))


@lru_cache(maxsize=None)
def _front(x: Letter, u: Word) -> tuple[tuple[Word, int], ...]:
    """Normal form of ``x`` followed by the normal word ``u``."""
    if not u or x[1] >= u[0][1]:
        return (((x,) + u, 1),)
    y, rest = u[0], u[1:]
    acc: dict[Word, int] = {}
    for w, c in _front(x, rest):
        k = (y,) + w
        acc[k] = acc.get(k, 0) + c
    for w, c in _comm(x, y):
        k = w + rest
        acc[k] = acc.get(k, 0) + c
    return tuple((w, c) for w, c in acc.items() if c)


@lru_cache(maxsize=None)
def normal_word(word: Word) -> tuple[tuple[Word, int], ...]:
    """Normal form of a single word as integer combination of normal words."""
    if len(word) <= 1:
        return ((word, 1),)
    acc: dict[Word, int] = {}
    for u, c in normal_word(word[1:]):
        for w, d in _front(word[0], u):
            acc[w] = acc.get(w, 0) + c * d
    return tuple(sorted((w, c) for w, c in acc.items() if c))


def is_normal(word: Word) -> bool:
    return all(word[i][1] >= word[i + 1][1] for i in range(len(word) - 1))


@lru_cache(maxsize=None)
def normal_basis(n: int, k: int) -> tuple[Word, ...]:
    """Sorted normal words of degree k on n strands."""
    blocks = [[(i, p) for i in range(1, p)] for p in range(n, 1, -1)]

    def rec(b: int, left: int) -> Iterable[Word]:
        if b == len(blocks):
            if left == 0:
                yield ()
            return
        for size in range(left, -1, -1):
            for head in itertools.product(blocks[b], repeat=size):
                for tail in rec(b + 1, left - size):
                    yield head + tail

    return tuple(sorted(rec(0, k)))


def hilbert_dims(n: int, D: int) -> list[int]:
    """Coefficients of prod_{j=1}^{n-1} 1/(1 - j x) up to x^D."""
    c = [1] + [0] * D
    for j in range(1, n):
        for k in range(1, D + 1):
            c[k] += j * c[k - 1]
    return c


def relation_generators(n: int) -> list[dict[Word, int]]:
    """Degree-2 defining relations as combinations of free words."""
    gens = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    rels = []
    for x, y in itertools.combinations(gens, 2):
        if not set(x) & set(y):
            rels.append({(x, y): 1, (y, x): -1})
    for i, j, k in itertools.permutations(range(1, n + 1), 3):
        a, b, c = letter(i, j), letter(i, k), letter(j, k)
        rels.append({(a, b): 1, (a, c): 1, (b, a): -1, (c, a): -1})
    return rels


def ideal_rank(n: int, k: int) -> tuple[int, int]:
    """(number of free words, rank of the relation ideal) in degree k.

    Used only to cross-check the rewriting normal form.
    """
    gens = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    words = list(itertools.product(gens, repeat=k))
    index = {w: t for t, w in enumerate(words)}
    eb = EchelonBasis(len(words))
    if k >= 2:
        for rel in relation_generators(n):
            for s in range(k - 1):
                for u in itertools.product(gens, repeat=s):
                    for v in itertools.product(gens, repeat=k - 2 - s):
                        eb.add({index[u + w + v]: c for w, c in rel.items()})
    return len(words), eb.rank


# ------------------------------------------------------------ elements


def _clean(terms: Mapping[Word, Fraction], D: int) -> dict[Word, Fraction]:
    return {w: Fraction(c) for w, c in terms.items() if c and len(w) <= D}


@dataclass(frozen=True)
class TangleElement:
    """Degree-truncated element of A(n) in normal form."""

    n: int
    D: int
    terms: Mapping[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _clean(self.terms, self.D))

    # construction

    @classmethod
    def one(cls, n: int, D: int) -> TangleElement:
        return cls(n, D, {(): Fraction(1)})

    @classmethod
    def zero(cls, n: int, D: int) -> TangleElement:
        return cls(n, D, {})

    @classmethod
    def generator(cls, i: int, j: int, n: int, D: int) -> TangleElement:
        return normal_form([letter(i, j)], n, D)

    @classmethod
    def from_words(cls, terms: Mapping[Word, Fraction | int], n: int, D: int) -> TangleElement:
        acc: dict[Word, Fraction] = {}
        for w, c in terms.items():
            if not c or len(w) > D:
                continue
            for u, d in normal_word(tuple(w)):
                acc[u] = acc.get(u, 0) + c * d
        return cls(n, D, acc)

    # arithmetic

    def _check(self, other: TangleElement) -> None:
        if (self.n, self.D) != (other.n, other.D):
            raise AssocError(f"shape mismatch: ({self.n}, {self.D}) vs ({other.n}, {other.D})")

    def __add__(self, other: TangleElement) -> TangleElement:
        self._check(other)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return TangleElement(self.n, self.D, acc)

    def __neg__(self) -> TangleElement:
        return TangleElement(self.n, self.D, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: TangleElement) -> TangleElement:
        return self + (-other)

    def scale(self, c: Fraction | int) -> TangleElement:
        return TangleElement(self.n, self.D, {w: x * c for w, x in self.terms.items()})

    def __mul__(self, other: TangleElement) -> TangleElement:
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TangleElement):
            return NotImplemented
        return (self.n, self.D, self.terms) == (other.n, other.D, other.terms)

    def __hash__(self) -> int:
        return hash((self.n, self.D, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def component(self, k: int) -> dict[Word, Fraction]:
        return {w: c for w, c in self.terms.items() if len(w) == k}

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def truncate(self, D: int) -> TangleElement:
        return TangleElement(self.n, D, {w: c for w, c in self.terms.items() if len(w) <= D})

    def coords(self, k: int) -> list[Fraction]:
        """Coefficients on ``normal_basis(n, k)``."""
        return [self.terms.get(w, Fraction(0)) for w in normal_basis(self.n, k)]

    def to_text(self) -> str:
        lines = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            mono = " ".join(letter_name(l) for l in w) or "1"
            lines.append(f"{c.numerator}/{c.denominator}\t{mono}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"TangleElement(n={self.n}, D={self.D}, terms={len(self.terms)})"


def normal_form(word: Sequence[Letter], n: int, D: int) -> TangleElement:
    word = tuple(letter(*l) for l in word)
    for i, j in word:
        if not (1 <= i < j <= n):
            raise AssocError(f"generator t{i}{j} out of range for n={n}")
    return TangleElement.from_words({word: 1}, n, D)


def multiply(a: TangleElement, b: TangleElement) -> TangleElement:
    """Composition ``a * b``: ``b`` happens first."""
    a._check(b)
    D = a.D
    acc: dict[Word, Fraction] = {}
    for wb, cb in b.terms.items():
        for wa, ca in a.terms.items():
            if len(wa) + len(wb) > D:
                continue
            c = ca * cb
            if not wb or not wa:
                w = wb + wa
                acc[w] = acc.get(w, 0) + c
                continue
            for u, d in normal_word(wb + wa):
                acc[u] = acc.get(u, 0) + c * d
    return TangleElement(a.n, D, acc)


def product(*factors: TangleElement) -> TangleElement:
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = multiply(f, out)
    return out


def power(a: TangleElement, k: int) -> TangleElement:
    out = TangleElement.one(a.n, a.D)
    for _ in range(k):
        out = multiply(a, out)
    return out


def exp_trunc(a: TangleElement) -> TangleElement:
    if a.constant():
        raise AssocError("exp needs zero constant term")
    out = TangleElement.one(a.n, a.D)
    term = out
    for k in range(1, a.D + 1):
        term = multiply(a, term).scale(Fraction(1, k))
        out = out + term
    return out


def log_trunc(a: TangleElement) -> TangleElement:
    if a.constant() != 1:
        raise AssocError("log needs constant term 1")
    x = a - TangleElement.one(a.n, a.D)
    out = TangleElement.zero(a.n, a.D)
    term = TangleElement.one(a.n, a.D)
    for k in range(1, a.D + 1):
        term = multiply(x, term)
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out


def inverse(a: TangleElement) -> TangleElement:
    c = a.constant()
    if not c:
        raise AssocError("element with zero constant term is not invertible")
    one = TangleElement.one(a.n, a.D)
    x = one - a.scale(1 / c)
    out = one
    term = one
    for _ in range(a.D):
        term = multiply(x, term)
        out = out + term
    return out.scale(1 / c)


# ------------------------------------------------------------ strand maps


def _map_words(
    a: TangleElement, images: Mapping[int, Sequence[int]], n: int
) -> TangleElement:
    """Send strand s to the sum of strands ``images[s]`` letter by letter."""
    acc: dict[Word, Fraction] = {}
    for w, c in a.terms.items():
        choices = []
        for i, j in w:
            choices.append([letter(x, y) for x in images[i] for y in images[j]])
        for lifted in itertools.product(*choices):
            acc[lifted] = acc.get(lifted, 0) + c
    return TangleElement.from_words(acc, n, a.D)


def strand_image(a: TangleElement, pattern: str | Sequence[int], n: int | None = None) -> TangleElement:
    """Place strand k of ``a`` on strand ``pattern[k-1]``."""
    pat = [int(ch) for ch in pattern] if isinstance(pattern, str) else list(pattern)
    if len(pat) != a.n:
        raise AssocError(f"pattern {pattern!r} has {len(pat)} entries, element has {a.n} strands")
    if len(set(pat)) != len(pat) or min(pat, default=1) < 1:
        raise AssocError(f"pattern {pattern!r} must list distinct positive strands")
    n = max(pat, default=0) if n is None else n
    if max(pat, default=0) > n:
        raise AssocError(f"pattern {pattern!r} exceeds {n} strands")
    return _map_words(a, {k + 1: [p] for k, p in enumerate(pat)}, n)


def delta(i: int, a: TangleElement) -> TangleElement:
    """Double strand ``i``: its chords are summed over the two copies."""
    if not 1 <= i <= a.n:
        raise AssocError(f"strand {i} out of range 1..{a.n}")
    images = {s: [s] if s < i else [s + 1] if s > i else [i, i + 1] for s in range(1, a.n + 1)}
    return _map_words(a, images, a.n + 1)


def cable(a: TangleElement, sizes: Sequence[int]) -> TangleElement:
    """Replace strand k by ``sizes[k-1]`` parallel strands (iterated delta)."""
    if len(sizes) != a.n or min(sizes, default=1) < 1:
        raise AssocError("cable sizes must be positive, one per strand")
    start = 1
    images = {}
    for k, s in enumerate(sizes):
        images[k + 1] = list(range(start, start + s))
        start += s
    return _map_words(a, images, start - 1)


def differential_d(a: TangleElement) -> TangleElement:
    n = a.n
    out = strand_image(a, list(range(2, n + 2)), n + 1)
    for i in range(1, n + 1):
        term = delta(i, a)
        out = out - term if i % 2 else out + term
    last = strand_image(a, list(range(1, n + 1)), n + 1)
    return out - last if (n + 1) % 2 else out + last


# ------------------------------------------------------------ axioms


def r_matrix(D: int, sign: int = 1) -> TangleElement:
    """R^{sign} = exp(sign * t12 / 2)."""
    return exp_trunc(TangleElement.generator(1, 2, 2, D).scale(Fraction(sign, 2)))


def pentagon_lhs(phi: TangleElement) -> TangleElement:
    inv = inverse(phi)
    return product(
        strand_image(phi, "123", 4),
        delta(2, phi),
        strand_image(phi, "234", 4),
        delta(3, inv),
        delta(1, inv),
    )


def hexagon_sides(R: TangleElement, phi: TangleElement, sign: int) -> tuple[TangleElement, TangleElement]:
    Rs = R if sign > 0 else inverse(R)
    inv = inverse(phi)
    lhs = delta(1, Rs)
    rhs = product(
        phi,
        strand_image(Rs, "23", 3),
        strand_image(inv, "132"),
        strand_image(Rs, "13", 3),
        strand_image(phi, "312"),
    )
    return lhs, rhs


def verify_axioms(R: TangleElement, phi: TangleElement, D: int) -> tuple[TangleElement, TangleElement, TangleElement]:
    """Pentagon, hexagon+ and hexagon- residuals truncated at degree D."""
    R, phi = R.truncate(D), phi.truncate(D)
    pent = pentagon_lhs(phi) - TangleElement.one(4, D)
    hp = hexagon_sides(R, phi, 1)
    hm = hexagon_sides(R, phi, -1)
    return pent, hp[0] - hp[1], hm[0] - hm[1]


def mirror_defect(phi: TangleElement) -> TangleElement:
    """Phi^{321} * Phi - 1, zero exactly when Phi^{321} = Phi^{-1}."""
    return multiply(strand_image(phi, "321"), phi) - TangleElement.one(3, phi.D)


def hexagon_cocycle_terms(psi: TangleElement) -> tuple[TangleElement, TangleElement]:
    """The two alternating sums of permuted hexagon errors that must vanish."""
    p = {s: strand_image(psi, s) for s in ("123", "132", "213", "231", "312", "321")}
    first = p["123"] - p["132"] + p["213"] - p["231"]
    second = p["213"] - p["231"] + p["312"] - p["321"]
    return first, second


@dataclass
class SolveLog:
    """Per-degree diagnostics of the associator solver."""

    degree: int
    unknowns: int
    equations: int
    d_mu_zero: bool
    psi_relations_zero: bool
    psi_plus_equals_minus: bool


@lru_cache(maxsize=None)
def lie_basis(n: int, k: int) -> tuple[TangleElement, ...]:
    """Independent right-normed brackets of degree k in A(n), in a fixed order.

    These span the degree-k part of the Lie algebra generated by the t_ij.
    """
    gens = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    basis = normal_basis(n, k)
    index = {w: t for t, w in enumerate(basis)}
    eb = EchelonBasis(len(basis))
    out = []
    for seq in itertools.product(gens, repeat=k):
        e = TangleElement(n, k, {(seq[-1],): Fraction(1)})
        for l in reversed(seq[:-1]):
            g = TangleElement(n, k, {(l,): Fraction(1)})
            e = multiply(g, e) - multiply(e, g)
        if e.is_zero():
            continue
        row = {index[w]: c for w, c in e.terms.items()}
        if eb.add(row):
            out.append(e)
    return tuple(out)


def solve_associator(
    D: int = 4, group_like: bool = True
) -> tuple[TangleElement, TangleElement, list[SolveLog]]:
    """Build R = exp(t12/2) and Phi degree by degree up to D.

    At degree k the lower-degree part of Phi is fixed and the degree-k
    unknown enters the pentagon and hexagon defects affinely, with linear
    parts d(phi) and phi - phi^{132} + phi^{312}.  The gauge condition
    Phi^{321} Phi = 1 is imposed in the same way and solve_affine zeroes the
    remaining free variables.

    With ``group_like`` (the default) Phi = exp(phi) and each phi_k is a
    combination of Lie brackets; otherwise phi_k ranges over all of A(3)_k.
    """
    if D < 1:
        raise AssocError("truncation degree must be at least 1")
    R = r_matrix(D)
    log_phi = TangleElement.zero(3, D)
    phi = TangleElement.one(3, D)
    logs: list[SolveLog] = []
    for k in range(2, D + 1):
        Rk = R.truncate(k)
        phik = exp_trunc(log_phi.truncate(k)) if group_like else phi.truncate(k)
        mu = pentagon_lhs(phik) - TangleElement.one(4, k)
        hp = hexagon_sides(Rk, phik, 1)
        hm = hexagon_sides(Rk, phik, -1)
        psi_p = hp[1] - hp[0]
        psi_m = hm[1] - hm[0]
        gauge = mirror_defect(phik)
        for name, err in (("pentagon", mu), ("hexagon+", psi_p), ("hexagon-", psi_m), ("gauge", gauge)):
            if any(len(w) < k for w in err.terms):
                raise AssertionError(f"{name} defect nonzero below degree {k}")
        if group_like:
            unknowns = list(lie_basis(3, k))
        else:
            unknowns = [TangleElement(3, k, {w: Fraction(1)}) for w in normal_basis(3, k)]
        cols = []
        for e in unknowns:
            pent = differential_d(e)
            hexa = e - strand_image(e, "132") + strand_image(e, "312")
            gau = e + strand_image(e, "321")
            cols.append(pent.coords(k) + hexa.coords(k) + hexa.coords(k) + gau.coords(k))
        rhs = [-x for err in (mu, psi_p, psi_m, gauge) for x in err.coords(k)]
        entries = {(r, c): x for c, col in enumerate(cols) for r, x in enumerate(col) if x}
        A = SparseMatrix(len(rhs), len(unknowns), entries)
        sol = solve_affine(A, rhs)
        if isinstance(sol, Inconsistent):
            raise InconsistentDegree(k, sol)
        step = TangleElement.zero(3, D)
        for e, x in zip(unknowns, sol):
            if x:
                step = step + TangleElement(3, D, e.terms).scale(x)
        if group_like:
            log_phi = log_phi + step
            phi = exp_trunc(log_phi)
        else:
            phi = phi + step
        mu_k = TangleElement(4, k, mu.component(k))
        psi_k = TangleElement(3, k, psi_p.component(k))
        first, second = hexagon_cocycle_terms(psi_k)
        logs.append(
            SolveLog(
                degree=k,
                unknowns=len(unknowns),
                equations=len(rhs),
                d_mu_zero=differential_d(mu_k).is_zero(),
                psi_relations_zero=first.is_zero() and second.is_zero(),
                psi_plus_equals_minus=psi_p.component(k) == psi_m.component(k),
            )
        )
    pent, hp, hm = verify_axioms(R, phi, D)
    if not (pent.is_zero() and hp.is_zero() and hm.is_zero()):
        raise AssertionError("solved associator fails verification")
    return R, phi, logs


# ------------------------------------------------------------ export


def _span_length(l: Letter) -> int:
    return l[1] - l[0]


@lru_cache(maxsize=None)
def _export_reducer(n: int, k: int) -> tuple[dict[Word, int], EchelonBasis]:
    """Relation ideal in degree k with columns ordered so that words using
    long chords (like t13) are eliminated first."""
    gens = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    words = sorted(
        itertools.product(gens, repeat=k),
        key=lambda w: (-sum(_span_length(l) - 1 for l in w), w),
    )
    index = {w: t for t, w in enumerate(words)}
    eb = EchelonBasis(len(words))
    if k >= 2:
        for rel in relation_generators(n):
            for s in range(k - 1):
                for u in itertools.product(gens, repeat=s):
                    for v in itertools.product(gens, repeat=k - 2 - s):
                        eb.add({index[u + w + v]: c for w, c in rel.items()})
    return index, eb


def export_terms(a: TangleElement) -> dict[Word, Fraction]:
    """Representative of ``a`` preferring words in adjacent generators.

    For n = 3 this writes ``1/24 [t12, t23]`` as ``t12 t23`` and ``t23 t12``
    rather than through t13, which the rewriting normal form would use.
    """
    out: dict[Word, Fraction] = {}
    for k in range(a.D + 1):
        comp = a.component(k)
        if not comp:
            continue
        index, eb = _export_reducer(a.n, k)
        words = {t: w for w, t in index.items()}
        red = eb.reduce_full({index[w]: c for w, c in comp.items()})
        for t, c in red.items():
            out[words[t]] = c
    return out


def export_text(a: TangleElement) -> str:
    """Lines ``num/den<TAB>t_ij t_kl ...`` ordered by degree."""
    terms = export_terms(a)
    lines = []
    for w in sorted(terms, key=lambda w: (len(w), w)):
        c = terms[w]
        mono = " ".join(letter_name(l) for l in w) or "1"
        lines.append(f"{c.numerator}/{c.denominator}\t{mono}")
    return "\n".join(lines) + "\n"


def parse_export(text: str, n: int, D: int) -> TangleElement:
    terms: dict[Word, Fraction] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        coef, mono = line.split("\t")
        w = () if mono.strip() == "1" else tuple(parse_letter(t) for t in mono.split())
        terms[w] = terms.get(w, 0) + Fraction(coef)
    return TangleElement.from_words(terms, n, D)
