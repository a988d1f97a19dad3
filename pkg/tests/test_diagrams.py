from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_pairings, brute_canonical, rotation_classes
from vkit.diagrams import (
    ChordDiagram,
    DiagramError,
    JacobiDiagram,
    canonical_code,
    enumerate_chord_diagrams,
    enumerate_jacobi_diagrams,
    format_code,
    jacobi_class_key,
    parse_code,
    validate_code,
)


def test_canonical_examples():
    assert canonical_code(()) == ()
    assert canonical_code(parse_code("2 1 2 1")) == (1, 2, 1, 2)
    assert canonical_code(parse_code("1 2 2 1")) == (1, 1, 2, 2)


@pytest.mark.parametrize("bad", ["1 2 1", "1 1 1 1", "1 2 2 3"])
def test_malformed_codes_rejected(bad):
    with pytest.raises(DiagramError):
        validate_code(tuple(int(t) for t in bad.split()))


def test_error_names_offending_label():
    with pytest.raises(DiagramError, match="3"):
        validate_code((1, 1, 3))


def test_parse_format_roundtrip():
    assert format_code(parse_code("1 2 1 2")) == "1 2 1 2"
    assert ChordDiagram.from_text("2 1 2 1").canonical().code == (1, 2, 1, 2)


@pytest.mark.parametrize("m,count", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 18), (5, 105)])
def test_enumeration_counts(m, count):
    assert len(enumerate_chord_diagrams(m)) == count


@pytest.mark.parametrize("m", range(0, 6))
def test_enumeration_matches_orbit_oracle(m):
    assert {d.code for d in enumerate_chord_diagrams(m)} == rotation_classes(m)


def test_degree_two_list():
    assert [d.code for d in enumerate_chord_diagrams(2)] == [(1, 1, 2, 2), (1, 2, 1, 2)]


def test_canonical_is_idempotent_through_degree_six():
    for m in range(7):
        for d in enumerate_chord_diagrams(m):
            assert canonical_code(d.code) == d.code


codes = st.integers(1, 6).flatmap(
    lambda m: st.permutations([k for k in range(1, m + 1) for _ in range(2)])
)


@settings(max_examples=200, deadline=None)
@given(codes, st.integers(0, 20))
def test_rotation_invariance(code, shift):
    code = tuple(code)
    r = shift % len(code)
    assert canonical_code(code[r:] + code[:r]) == canonical_code(code)
    assert canonical_code(code) == brute_canonical(code)


def test_jacobi_without_vertices_equals_chords():
    for m in range(6):
        jac = [d.chord_code() for d in enumerate_jacobi_diagrams(m, 0)]
        assert jac == [d.code for d in enumerate_chord_diagrams(m)]


def test_jacobi_small_cases():
    assert len(enumerate_jacobi_diagrams(1, 0)) == 1
    two = enumerate_jacobi_diagrams(2, 1)
    assert len(two) > 2
    assert all(d.degree == 2 for d in two)
    # unoriented classes are distinct
    keys = [jacobi_class_key(d) for d in two]
    assert len(keys) == len(set(keys))


def test_jacobi_internal_bound():
    with pytest.raises(DiagramError):
        enumerate_jacobi_diagrams(2, 3)


def test_jacobi_degree_two_hand_count():
    # legs + 3V = 2E and legs + V = 4.  By hand:
    #   V=1: tripod; chord plus a one-leg tadpole
    #   V=2: both legs on one vertex whose third edge ends in a tadpole;
    #        two one-leg tadpoles; two legs joined through a double edge
    by_v = {}
    for d in enumerate_jacobi_diagrams(2, 2):
        by_v[d.n_internal] = by_v.get(d.n_internal, 0) + 1
    assert by_v == {0: 2, 1: 2, 2: 3}


def test_jacobi_text_roundtrip():
    for d in enumerate_jacobi_diagrams(3, 4):
        e = JacobiDiagram.from_text(d.to_text())
        assert jacobi_class_key(e) == jacobi_class_key(d)
        assert e.degree == d.degree


def test_jacobi_text_errors():
    with pytest.raises(DiagramError):
        JacobiDiagram.from_text("v1: e1 e2 e3\n")
    with pytest.raises(DiagramError):
        JacobiDiagram.from_text("legs: l1 l2\nl1 - l2\nl1 - l2\n")


def test_from_chord_code_roundtrip():
    for d in enumerate_chord_diagrams(4):
        assert JacobiDiagram.from_chord_code(d.code).chord_code() == d.code


def test_pairing_oracle_sizes():
    # (2m - 1)!! pairings
    assert sum(1 for _ in all_pairings(list(range(8)))) == 105
