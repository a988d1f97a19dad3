from __future__ import annotations

from fractions import Fraction

import pytest

from vkit.tangle import (
    BUNDLED,
    ChordSeries,
    Event,
    EventSequence,
    PresentationError,
    connected_sum,
    evaluate_corrected,
    evaluate_normalized,
    evaluate_raw,
    evaluate_singular,
    hump_value,
    parse_event,
    parse_locator,
    validate,
)

B = EventSequence.bundled


def mirror(seq: EventSequence) -> EventSequence:
    flip = {"+": "-", "-": "+"}
    return EventSequence(
        tuple(Event(e.kind, e.at, flip[e.arg]) if e.kind == "braid" else e for e in seq.events)
    )


# ------------------------------------------------------------ parsing


def test_parse_locators():
    assert parse_locator(".") == ()
    assert parse_locator("0.1") == (0, 1)
    with pytest.raises(PresentationError):
        parse_locator("0.2")
    with pytest.raises(PresentationError):
        parse_locator("a")


def test_parse_events():
    assert parse_event("braid + AT 0.0") == Event("braid", (0, 0), "+")
    assert parse_event("assoc L AT 1") == Event("assoc", (1,), "L")
    assert parse_event("cup AT 0") == Event("cup", (0,))
    for bad in ("braid AT 0", "cup 0", "twist + AT 0", "assoc X AT 0", "cap AT"):
        with pytest.raises(PresentationError):
            parse_event(bad)


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_roundtrip_and_valid(name):
    seq = B(name)
    assert EventSequence.parse(seq.to_text()).events == seq.events
    tr = validate(seq)
    assert tr.components == 1
    assert tr.c % 2 == 0


def test_invalid_sequences_name_the_event():
    seq = EventSequence.parse("cup AT .\ncup AT 0\ncap AT .\n")
    with pytest.raises(PresentationError, match="event"):
        validate(seq)
    # cap on two strands that do not sit side by side as a pair
    seq = EventSequence.parse("cup AT .\ncup AT 1\ncap AT 0\ncap AT .\n")
    with pytest.raises(PresentationError):
        validate(seq)


def test_critical_points():
    assert validate(B("round-unknot")).c == 2
    assert validate(B("infty")).c == 4
    assert validate(B("trefoil-13slice")).c == 4


def test_unknown_bundled():
    with pytest.raises(PresentationError):
        B("figure-eight")


# ------------------------------------------------------------ values


def test_round_unknot_raw_is_one():
    for v in ("reduced", "framed"):
        assert evaluate_raw(B("round-unknot"), 4, v) == ChordSeries.one(4, v)


def test_hump_low_degrees():
    h = hump_value(4)
    assert h.component(0) == {(): 1}
    assert h.component(1) == {}
    assert h.component(2) == {(1, 2, 1, 2): Fraction(1, 24)}
    assert hump_value(4, "reduced", "infty-alt") == h


def test_infty_corrected_is_inverse_hump():
    assert evaluate_corrected(B("infty"), 4) == hump_value(4).inverse()


@pytest.mark.parametrize("variant", ["reduced", "framed"])
def test_unknot_invariance(variant):
    a = evaluate_corrected(B("round-unknot"), 4, variant)
    for name in ("humped-unknot", "infty", "infty-alt"):
        assert evaluate_corrected(B(name), 4, variant) == a


def test_trefoil_invariance():
    a = evaluate_corrected(B("trefoil-13slice"), 3)
    b = evaluate_corrected(B("trefoil-alt"), 3)
    assert a == b
    assert a.component(3) == {(1, 2, 3, 1, 2, 3): Fraction(1, 2)}


def test_trefoil_is_knotted():
    t = evaluate_normalized(B("trefoil-alt"), 2)
    u = evaluate_normalized(B("round-unknot"), 2)
    assert u == ChordSeries.one(2, "reduced")
    assert t.component(2) == {(1, 2, 1, 2): 1}


def test_mirror_trefoil():
    t = evaluate_normalized(B("trefoil-alt"), 3)
    m = evaluate_normalized(mirror(B("trefoil-alt")), 3)
    assert m.component(2) == t.component(2)
    assert m.component(3) == {c: -x for c, x in t.component(3).items()}


def test_negative_degree_rejected():
    with pytest.raises(PresentationError):
        evaluate_raw(B("round-unknot"), -1)


# ------------------------------------------------------------ singular


@pytest.mark.parametrize("name", ["sing1", "sing1-alt", "sing2", "sing2-alt"])
def test_direct_insertion_equals_resolution_sum(name):
    seq = B(name)
    c = validate(seq).c
    direct = evaluate_raw(seq, 3, "framed") * hump_value(3, "framed") ** (-(c // 2))
    assert direct == evaluate_singular(seq, 3, "framed")


def test_universality():
    for name in ("sing1", "sing1-alt"):
        v = evaluate_singular(B(name), 1, "framed")
        assert v.comps == {1: {(1, 1): 1}}
    for name in ("sing2", "sing2-alt"):
        for variant in ("reduced", "framed"):
            v = evaluate_singular(B(name), 2, variant)
            assert v.comps == {2: {(1, 2, 1, 2): 1}}


def test_resolutions_count():
    res = list(B("sing2").resolutions())
    assert len(res) == 4
    assert sorted(s for s, _ in res) == [-1, -1, 1, 1]
    assert all(r.singular_count == 0 for _, r in res)


def test_non_singular_rejected():
    with pytest.raises(PresentationError):
        evaluate_singular(B("trefoil-alt"), 2)


# ------------------------------------------------------------ connected sum


def test_connected_sum_multiplicative():
    t, u = B("trefoil-alt"), B("round-unknot")
    tt = connected_sum(t, t)
    assert validate(tt).components == 1
    a = evaluate_normalized(t, 4)
    assert evaluate_normalized(tt, 4) == a * a
    assert evaluate_normalized(connected_sum(t, u), 4) == a


def test_series_algebra():
    h = hump_value(4)
    one = ChordSeries.one(4, "reduced")
    assert h * h.inverse() == one
    assert h ** 2 == h * h
    assert h ** -1 == h.inverse()
    assert (h - h) == ChordSeries(4, "reduced")


def test_series_text():
    text = hump_value(2).to_text()
    assert text.splitlines() == ["0\t1/1\t-", "2\t1/24\t1 2 1 2"]
