from __future__ import annotations

from fractions import Fraction

import pytest

from oracles import brute_canonical, brute_four_t_rank
from vkit.diagrams import DiagramError, JacobiDiagram, enumerate_jacobi_diagrams
from vkit.spaces import (
    DiagramVector,
    FourTSeed,
    UnsupportedDiagram,
    _default_vertex,
    as_instances,
    chord_quotient,
    dim_space,
    enumerate_four_t_seeds,
    fi_vectors,
    four_t_vector,
    ihx_instances,
    is_consequence,
    stu_expand,
    stu_expand_vector,
)

REDUCED = [1, 0, 1, 1, 3, 4, 9]
FRAMED = [1, 1, 2, 3, 6, 10, 19]


@pytest.mark.parametrize("m", range(7))
def test_dimension_table(m):
    assert dim_space(m, "reduced") == REDUCED[m]
    assert dim_space(m, "framed") == FRAMED[m]
    assert dim_space(m, "reduced") <= dim_space(m, "framed")


@pytest.mark.parametrize("m", range(1, 5))
def test_dimensions_against_brute_force(m):
    n, r = brute_four_t_rank(m, with_fi=False)
    assert n - r == dim_space(m, "framed")
    n, r = brute_four_t_rank(m, with_fi=True)
    assert n - r == dim_space(m, "reduced")


def test_four_t_vector_by_hand():
    # background chord 1 at positions 0 and 3, anchor (0) at 1 and 4, free point at 2
    seed = FourTSeed((1, 0, -1, 1, 0))
    v = four_t_vector(seed)
    # x is the partner of the free point, placed around the anchor A
    raw = {
        (1, "x", "A", "x", 1, "A"): 1,
        (1, "A", "x", "x", 1, "A"): -1,
        (1, "A", "x", 1, "x", "A"): 1,
        (1, "A", "x", 1, "A", "x"): -1,
    }
    expect = {}
    for word, s in raw.items():
        code = brute_canonical([{"A": 2, "x": 3}.get(t, t) for t in word])
        expect[code] = expect.get(code, 0) + s
    assert dict(v.items()) == {c: Fraction(s) for c, s in expect.items() if s}


def test_degenerate_seed():
    with pytest.raises(DiagramError):
        FourTSeed.build((1, 1), (0, 0), 1)


def test_degree_two_four_t_vanishes():
    for s in enumerate_four_t_seeds(2):
        assert not four_t_vector(s)


@pytest.mark.parametrize("m", range(2, 6))
def test_four_t_vectors_vanish_in_framed_quotient(m):
    q = chord_quotient(m, "framed")
    assert all(q.contains(four_t_vector(s)) for s in enumerate_four_t_seeds(m))


def test_fi_vectors():
    assert fi_vectors(0) == []
    assert [list(v.items()) for v in fi_vectors(1)] == [[((1, 1), 1)]]
    assert [dict(v.items()) for v in fi_vectors(2)] == [{(1, 1, 2, 2): 1}]


def test_vector_text_roundtrip():
    v = DiagramVector()
    v.add((2, 1, 2, 1), Fraction(3, 4))
    v.add((1, 1, 2, 2), -2)
    assert DiagramVector.from_text(v.to_text()) == v
    assert dict(v.items())[(1, 2, 1, 2)] == Fraction(3, 4)


def test_stu_on_chord_diagram_is_identity():
    assert dict(stu_expand((1, 2, 1, 2)).items()) == {(1, 2, 1, 2): 1}


def test_stu_tripod_by_hand():
    # tripod with legs l1 l2 l3 counterclockwise on the circle
    y = JacobiDiagram.from_text("legs: l1 l2 l3\nv1: e1 e2 e3\nl1 - v1\nl2 - v1\nl3 - v1\n")
    v = stu_expand(y)
    # Resolve at l1: the vertex read from its leg is (e2, e3 | e1).  S puts the
    # ends of e2, e3 at l1's spot in that order, giving A B A B = "1 2 1 2";
    # U swaps them, giving B A A B, whose canonical form is "1 1 2 2".
    assert dict(v.items()) == {(1, 2, 1, 2): 1, (1, 1, 2, 2): -1}


def test_closed_component_unsupported():
    theta = JacobiDiagram.from_text(
        "legs: l1 l2\nv1: e2 e3 e4\nv2: e2 e4 e3\nl1 - l2\nv1 - v2\nv1 - v2\nv1 - v2\n"
    )
    with pytest.raises(UnsupportedDiagram):
        stu_expand(theta)


def test_as_pair_cancels():
    for d in enumerate_jacobi_diagrams(3, 2):
        if d.n_internal:
            s = stu_expand(d) + stu_expand(d.flip(0))
            assert chord_quotient(3, "framed").contains(s)


@pytest.mark.parametrize("m", range(1, 4))
def test_as_ihx_consequences(m):
    assert all(is_consequence(v) for v in as_instances(m))
    assert all(is_consequence(v) for v in ihx_instances(m))


def test_single_chord_diagram_is_not_a_consequence():
    v = DiagramVector({(1, 2, 1, 2): 1})
    assert not is_consequence(v)


def _last_vertex(d):
    pos = {h: i for i, h in enumerate(d.circle)}
    best = None
    for k, v in enumerate(d.vertices):
        for h in v:
            p = pos.get(h ^ 1)
            if p is not None and (best is None or p > best[0]):
                best = (p, k)
    return best[1]


@pytest.mark.parametrize("m", range(2, 5))
def test_resolution_order_independence(m):
    q = chord_quotient(m, "framed")
    for d in enumerate_jacobi_diagrams(m, min(2, 2 * m - 2)):
        if not d.n_internal:
            continue
        try:
            _default_vertex(d)
        except UnsupportedDiagram:
            continue
        a = stu_expand(d)
        b = stu_expand(d, choose=_last_vertex)
        assert q.contains(a - b)


def test_quotient_coordinates_are_canonical():
    q = chord_quotient(4, "framed")
    for s in enumerate_four_t_seeds(4)[:20]:
        base = DiagramVector({(1, 2, 3, 4, 1, 2, 3, 4): 1})
        assert q.coordinates(base + four_t_vector(s)) == q.coordinates(base)


def test_stu_expand_vector_linear():
    d = next(j for j in enumerate_jacobi_diagrams(2, 1) if j.n_internal == 1 and len(j.circle) == 3)
    v = DiagramVector()
    v.add(d, 2)
    assert stu_expand_vector(v) == stu_expand(d).scaled(2)
