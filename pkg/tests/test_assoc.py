from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vkit.assoc import (
    AssocError,
    TangleElement,
    cable,
    delta,
    exp_trunc,
    export_text,
    hilbert_dims,
    ideal_rank,
    inverse,
    is_normal,
    letter,
    log_trunc,
    mirror_defect,
    multiply,
    normal_basis,
    normal_form,
    parse_export,
    product,
    r_matrix,
    solve_associator,
    strand_image,
    verify_axioms,
)


def gen(i, j, n, D):
    return TangleElement.generator(i, j, n, D)


def test_hilbert_series_values():
    # prod 1/(1-x)(1-2x): 1, 3, 7, 15
    assert hilbert_dims(3, 3) == [1, 3, 7, 15]


@pytest.mark.parametrize("n,k", [(3, 2), (3, 3), (3, 4), (4, 2), (4, 3)])
def test_normal_basis_matches_relation_ideal(n, k):
    assert len(normal_basis(n, k)) == hilbert_dims(n, k)[k]
    words, r = ideal_rank(n, k)
    assert words - r == len(normal_basis(n, k))


def test_normal_words_are_normal():
    for w in normal_basis(4, 3):
        assert is_normal(w)


def test_relations_hold():
    D = 2
    t12, t13, t23 = gen(1, 2, 3, D), gen(1, 3, 3, D), gen(2, 3, 3, D)
    assert t12 * (t13 + t23) == (t13 + t23) * t12
    t34 = gen(3, 4, 4, D)
    assert gen(1, 2, 4, D) * t34 == t34 * gen(1, 2, 4, D)
    # t12 t23 is not t23 t12
    assert t12 * t23 != t23 * t12


def test_bad_generator():
    with pytest.raises(AssocError):
        letter(2, 2)
    with pytest.raises(AssocError):
        normal_form([(1, 4)], 3, 2)


def words(n, D):
    gens = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return st.dictionaries(
        st.lists(st.sampled_from(gens), max_size=D).map(tuple),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        max_size=4,
    ).map(lambda d: TangleElement.from_words(d, n, D))


@settings(max_examples=40, deadline=None)
@given(words(3, 3), words(3, 3), words(3, 3))
def test_multiplication_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(words(3, 3))
def test_exp_log_inverse(a):
    x = a - TangleElement.one(3, 3).scale(a.constant())
    assert log_trunc(exp_trunc(x)) == x
    e = exp_trunc(x)
    assert multiply(e, inverse(e)) == TangleElement.one(3, 3)


def test_time_order_convention():
    D = 2
    a, b = gen(1, 2, 3, D), gen(2, 3, 3, D)
    # a * b means b first: the word lists b before a
    assert is_normal(((2, 3), (1, 2)))
    assert (a * b).terms == {((2, 3), (1, 2)): 1}


def test_strand_maps():
    D = 2
    t12 = gen(1, 2, 2, D)
    assert strand_image(t12, "13", 3) == gen(1, 3, 3, D)
    assert delta(1, t12) == gen(1, 3, 3, D) + gen(2, 3, 3, D)
    assert cable(t12, [1, 2]) == gen(1, 2, 3, D) + gen(1, 3, 3, D)


@pytest.fixture(scope="module")
def solved():
    return solve_associator(4)


def test_solver_verifies(solved):
    R, phi, logs = solved
    for res in verify_axioms(R, phi, 4):
        assert res.is_zero()
    assert [l.degree for l in logs] == [2, 3, 4]
    for l in logs:
        assert l.d_mu_zero and l.psi_relations_zero and l.psi_plus_equals_minus


def test_degree_two_part(solved):
    _, phi, _ = solved
    t12, t23 = gen(1, 2, 3, 2), gen(2, 3, 3, 2)
    # time order: t12 t23 as a word is (t23 * t12) as a product
    expect = (t23 * t12 - t12 * t23).scale(Fraction(1, 24))
    assert TangleElement(3, 2, phi.component(2)) == expect
    assert not phi.component(1)


def test_gauge(solved):
    _, phi, _ = solved
    assert mirror_defect(phi).is_zero()


def test_export_lines_and_roundtrip(solved):
    _, phi, _ = solved
    text = export_text(phi.truncate(2))
    assert text.splitlines() == ["1/1\t1", "1/24\tt12 t23", "-1/24\tt23 t12"]
    assert parse_export(export_text(phi), 3, 4) == phi


def test_non_group_like_solution_also_verifies():
    R, phi, _ = solve_associator(3, group_like=False)
    for res in verify_axioms(R, phi, 3):
        assert res.is_zero()


def test_locality(solved):
    D = 3
    _, phi, _ = solved
    R12 = strand_image(r_matrix(D), "12", 5)
    P345 = strand_image(phi.truncate(D), "345", 5)
    assert R12 * P345 == P345 * R12


def test_r3_cabling():
    D = 3
    R = r_matrix(D)
    lhs = delta(1, R)
    R12 = strand_image(R, "12", 3)
    assert lhs * R12 == R12 * lhs
    assert product(lhs, R12) - product(R12, lhs) == TangleElement.zero(3, D)


def test_solver_rejects_degree_zero():
    with pytest.raises(AssocError):
        solve_associator(0)
