import pytest
from hypothesis import given, strategies as st

from univext.category import DomainError, FormalObject, HomElement, Indec, LinearA, hom_basis, hom_dim, list_indecomposables
from univext.oracle import certify_exact
from univext.torsion import (
    MAX_ENUMERATION_N,
    InconsistentPair,
    Membership,
    TorsionPair,
    TubeCase2,
    brute_force_torsion_classes,
    enumerate_torsion_pairs,
    explicit_pair,
    free_members,
    is_free,
    is_functorially_finite,
    is_torsion,
    membership,
    torsion_functor_on_hom,
    torsion_members,
    torsion_sequence,
    torsion_trace,
    torsion_length,
    verify_torsion_pair,
)

from conftest import iv

A4_PAIRS = enumerate_torsion_pairs(4)


def test_a3_membership(a3, a3_pair):
    assert membership(a3_pair, iv(a3, 2, 2)) is Membership.TORSION
    assert membership(a3_pair, iv(a3, 1, 3)) is Membership.FREE
    assert membership(a3_pair, iv(a3, 2, 3)) is Membership.NEITHER
    assert set(a3_pair.description.free) == {iv(a3, 1, 1), iv(a3, 1, 2), iv(a3, 1, 3), iv(a3, 3, 3)}


def test_case2_membership(case2):
    t = case2.spec
    assert membership(case2, iv(t, 1, 4)) is Membership.FREE
    assert membership(case2, iv(t, 5, 5)) is Membership.TORSION
    # the coray ending at 0 contains [1,5]; see the decisions ledger
    assert membership(case2, iv(t, 1, 5)) is Membership.TORSION
    assert membership(case2, iv(t, 1, 6)) is Membership.NEITHER
    for k in range(1, 5):
        assert is_free(case2, iv(t, 1, k))


def test_case2_wing_is_derived(case2):
    (wing,) = case2.wings
    assert (wing.lo, wing.hi) == (1, 5)
    t = case2.spec
    want_free = {(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (4, 4)}
    assert wing.free == {iv(t, a, b) for a, b in want_free}


def test_membership_rejects_bad_objects(a3_pair):
    with pytest.raises(DomainError):
        membership(a3_pair, Indec(3, 2))


def test_overlapping_sets_rejected(a3):
    with pytest.raises(ValueError):
        explicit_pair(a3, [iv(a3, 2, 2)], [iv(a3, 2, 2)])


def test_bad_wing_choice_rejected(case2):
    # [1,1] is Ext-projective in the wing and must stay torsion-free
    with pytest.raises(ValueError, match="Ext-projective"):
        TorsionPair(case2.spec, TubeCase2((0,), (frozenset({Indec(1, 1)}),)))
    # [2,3] without its quotient [3,3] is not a torsion class
    with pytest.raises(ValueError, match="torsion class"):
        TorsionPair(case2.spec, TubeCase2((0,), (frozenset({Indec(2, 2)}),)))


def test_verify_trivial_pairs(a3):
    everything = explicit_pair(a3, list_indecomposables(a3))
    assert verify_torsion_pair(everything).passed
    assert verify_torsion_pair(explicit_pair(a3, [])).passed


def test_verify_builtin_pairs(a3_pair, case1, case2):
    assert verify_torsion_pair(a3_pair).passed
    assert verify_torsion_pair(case1, 10).passed
    assert verify_torsion_pair(case2, 10).passed


def test_closure_failure_names_p2(a3):
    bad = explicit_pair(a3, [iv(a3, 1, 1), iv(a3, 2, 2)])
    rep = verify_torsion_pair(bad)
    assert not rep.passed
    (ext,) = [c for c in rep.checks if c.name == "closed-under-extensions"]
    assert ext.witnesses and ext.witnesses[0].startswith("[1,2]")


def test_torsion_sequences(a3, a3_pair):
    s2, i2, s3, p3 = iv(a3, 2, 2), iv(a3, 2, 3), iv(a3, 3, 3), iv(a3, 1, 3)
    seq = torsion_sequence(a3_pair, i2)
    assert (seq.sub, seq.quot) == (FormalObject.of(s2), FormalObject.of(s3))
    assert certify_exact(seq)
    seq = torsion_sequence(a3_pair, s2)
    assert seq.middle == seq.sub and not seq.quot
    seq = torsion_sequence(a3_pair, p3)
    assert not seq.sub and seq.quot == seq.middle


def test_strict_torsion_sequence_flags_non_pairs(a3):
    bad = explicit_pair(a3, [iv(a3, 1, 1), iv(a3, 2, 2)])
    with pytest.raises(InconsistentPair):
        torsion_sequence(bad, iv(a3, 1, 2))


def test_torsion_functor_on_hom(a3, a3_pair):
    i2 = FormalObject.of(iv(a3, 2, 3))
    tf, ff = torsion_functor_on_hom(a3_pair, HomElement.identity(a3, i2))
    assert tf == HomElement.identity(a3, tf.source)
    assert ff == HomElement.identity(a3, ff.source)
    tf, ff = torsion_functor_on_hom(a3_pair, HomElement.zero(a3, i2, i2))
    assert tf.is_zero() and ff.is_zero()
    (epi,) = hom_basis(a3, iv(a3, 1, 3), iv(a3, 2, 3))
    _, ff = torsion_functor_on_hom(a3_pair, epi)
    (canonical,) = hom_basis(a3, iv(a3, 1, 3), iv(a3, 3, 3))
    assert ff == canonical


def test_enumeration_counts():
    assert [len(enumerate_torsion_pairs(n)) for n in range(1, 5)] == [2, 5, 14, 42]
    for n in range(1, 5):
        found = {p.description.torsion for p in enumerate_torsion_pairs(n)}
        assert found == set(brute_force_torsion_classes(n))


def test_a2_classes():
    a2 = LinearA(2)
    got = {frozenset(str(m) for m in p.description.torsion) for p in enumerate_torsion_pairs(a2)}
    assert got == {frozenset(), frozenset({"[1,1]"}), frozenset({"[2,2]"}), frozenset({"[2,2]", "[1,2]"}),
                   frozenset({"[1,1]", "[2,2]", "[1,2]"})}


def test_enumeration_guard():
    with pytest.raises(ValueError):
        enumerate_torsion_pairs(MAX_ENUMERATION_N + 1)


def test_functorial_finiteness(a3_pair, case1, case2):
    assert is_functorially_finite(a3_pair)[0]
    assert not is_functorially_finite(case1)[0]
    assert not is_functorially_finite(case2)[0]


@given(pair=st.sampled_from(A4_PAIRS), data=st.data())
def test_torsion_sequence_properties(pair, data):
    spec = pair.spec
    ind = list_indecomposables(spec)
    x = FormalObject(tuple(data.draw(st.lists(st.sampled_from(ind), min_size=1, max_size=3))))
    seq = torsion_sequence(pair, x)
    assert certify_exact(seq)
    assert all(is_torsion(pair, m) for m in seq.sub)
    assert all(is_free(pair, m) for m in seq.quot)


@given(pair=st.sampled_from(A4_PAIRS))
def test_hom_orthogonality_and_maximality(pair):
    spec = pair.spec
    t, f = torsion_members(pair), free_members(pair)
    assert all(hom_dim(spec, a, b) == 0 for a in t for b in f)
    for m in list_indecomposables(spec):
        if all(hom_dim(spec, a, m) == 0 for a in t):
            assert is_free(pair, m)
        if all(hom_dim(spec, m, b) == 0 for b in f):
            assert is_torsion(pair, m)


@given(pair=st.sampled_from(A4_PAIRS), m=st.sampled_from(list_indecomposables(LinearA(4))))
def test_trace_agrees_with_largest_torsion_sub(pair, m):
    assert torsion_trace(pair, m) == torsion_length(pair, m)


@given(m=st.builds(Indec, st.integers(0, 4), st.integers(1, 10)))
def test_tube_trace_agrees(case1, case2, m):
    for pair in (case1, case2):
        assert torsion_trace(pair, m, 10) == torsion_length(pair, m)
