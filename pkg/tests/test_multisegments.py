import pytest
from hypothesis import given, strategies as st

from glblocks.errors import BlockError
from glblocks.multisegments import (
    Multisegment,
    Segment,
    UnramLine,
    steinberg,
    transfer_base_change_tr,
    transfer_levi,
    transfer_unipotent,
    twist_unramified,
    untransfer_base_change_tr,
    untransfer_unipotent,
    validate_for_block,
    weight,
)

L0, L1, L2 = UnramLine("l0"), UnramLine("l1"), UnramLine("l2")
PI = {L0: UnramLine("pi0"), L1: UnramLine("pi1"), L2: UnramLine("pi2")}

segments = st.builds(
    Segment, st.sampled_from([L0, L1, L2]), st.integers(-3, 3), st.integers(1, 3)
)
multisegments = st.lists(segments, max_size=4).map(lambda s: Multisegment(tuple(s)))


def ms(*triples):
    return Multisegment(tuple(Segment(line, k, a) for line, k, a in triples))


def test_weight_and_validity():
    assert validate_for_block(steinberg(3), (3, 1))
    assert weight(Multisegment()) == 0 and not validate_for_block(Multisegment(), (1, 1))
    assert weight(ms((L0, 0, 2), (L1, 0, 1))) == 3
    with pytest.raises(BlockError):
        Segment(L0, 0, 0)


def test_levi_examples():
    assert transfer_levi([ms((L0, 0, 1)), ms((L1, 0, 1))]) == ms((L0, 0, 1), (L1, 0, 1))
    m = ms((L0, 1, 2))
    assert transfer_levi([m, Multisegment()]) == m
    st1 = steinberg(1)
    assert transfer_levi([st1, st1]).segments == (Segment(L0, 0, 1),) * 2
    with pytest.raises(BlockError):
        transfer_levi([Multisegment(convention="Z"), Multisegment(convention="L")])


def test_base_change_examples():
    m = ms((L0, 0, 2), (L1, 1, 1))
    assert transfer_base_change_tr(m) == m
    assert transfer_base_change_tr(Multisegment()) == Multisegment()
    assert transfer_base_change_tr(steinberg(4)) == steinberg(4)
    assert transfer_base_change_tr(m, PI) == ms((PI[L0], 0, 2), (PI[L1], 1, 1))
    with pytest.raises(BlockError):
        transfer_base_change_tr(m, totally_ramified=False)


def test_unipotent_examples():
    assert transfer_unipotent(steinberg(3), PI) == steinberg(3, PI[L0])
    assert transfer_unipotent(Multisegment(), PI) == Multisegment()
    m = ms((L0, 0, 1), (L0, 1, 1))
    assert transfer_unipotent(m, PI) == ms((PI[L0], 0, 1), (PI[L0], 1, 1))
    with pytest.raises(BlockError):
        transfer_unipotent(ms((L0, 0, 1), (L1, 0, 1)), {L0: L2, L1: L2})
    with pytest.raises(BlockError):
        transfer_unipotent(ms((L2, 0, 1)), {L0: L1})


def test_twist_examples():
    m = ms((L0, 0, 2))
    assert twist_unramified(m, 0) == m
    assert twist_unramified(m, 3) == ms((L0, 3, 2))
    assert twist_unramified(ms((L0, 0, 1), (L1, 0, 1)), {L1: -2}) == ms((L0, 0, 1), (L1, -2, 1))


def test_json_roundtrip():
    m = ms((L0, -1, 2), (L1, 0, 1))
    assert Multisegment.from_json(m.to_json()) == m
    assert m.to_json() == {
        "segments": [
            {"line": "l0", "offset": -1, "length": 2},
            {"line": "l1", "offset": 0, "length": 1},
        ]
    }


@given(multisegments, st.integers(-5, 5), st.integers(-5, 5))
def test_twist_is_a_group_action(m, s, t):
    assert twist_unramified(twist_unramified(m, t), s) == twist_unramified(m, s + t)
    assert twist_unramified(twist_unramified(m, 1), -1) == m
    assert weight(twist_unramified(m, s)) == weight(m)


@given(multisegments, st.integers(-5, 5))
def test_unipotent_transfer_properties(m, s):
    image = transfer_unipotent(m, PI)
    assert weight(image) == weight(m)
    assert sorted(x.length for x in image.segments) == sorted(x.length for x in m.segments)
    assert untransfer_unipotent(image, PI) == m
    assert transfer_unipotent(twist_unramified(m, s), PI) == twist_unramified(image, s)


@given(multisegments)
def test_base_change_inverse(m):
    assert untransfer_base_change_tr(transfer_base_change_tr(m, PI), PI) == m


@given(multisegments, multisegments, multisegments)
def test_levi_commutative_and_associative(a, b, c):
    assert transfer_levi([a, b]) == transfer_levi([b, a])
    assert transfer_levi([transfer_levi([a, b]), c]) == transfer_levi([a, transfer_levi([b, c])])
    assert weight(transfer_levi([a, b, c])) == weight(a) + weight(b) + weight(c)
