import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actfort.disclosure import (
    VOCABULARY,
    Disclosure,
    FactorKind,
    InfoCategory,
    Mask,
    categorize_info,
    mask_is_complete,
    mask_merge,
    parse_factor_kind,
)
from actfort.errors import LengthMismatch, MissingQualifier, UnknownFactorKind


def index_set_union(a, b):
    """Oracle: explicit index sets, regrouped into maximal runs."""
    idx = sorted(set(a.indices()) | set(b.indices()))
    runs = []
    for i in idx:
        if runs and runs[-1][1] == i:
            runs[-1][1] = i + 1
        else:
            runs.append([i, i + 1])
    return tuple(tuple(r) for r in runs)


@st.composite
def masks(draw, length=None):
    n = length if length is not None else draw(st.integers(1, 24))
    bits = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return Mask.from_pattern("".join("X" if b else "#" for b in bits))


@st.composite
def mask_pairs(draw, count=2):
    n = draw(st.integers(1, 24))
    return [draw(masks(n)) for _ in range(count)]


def test_parse_plain_kind():
    assert parse_factor_kind("sms-code") == FactorKind("sms-code")
    assert parse_factor_kind("sms-code").qualifier is None


def test_parse_linked_account_qualifier():
    k = parse_factor_kind("linked-account:gmail")
    assert (k.tag, k.qualifier) == ("linked-account", "gmail")


@pytest.mark.parametrize("text", ["fingerprint-magic", "SMS-CODE", "", "sms code", "sms-code:x"])
def test_parse_rejects_unknown(text):
    with pytest.raises(UnknownFactorKind):
        parse_factor_kind(text)


def test_bare_linked_account_needs_qualifier():
    with pytest.raises(MissingQualifier):
        parse_factor_kind("linked-account")


@pytest.mark.parametrize("tag", [t for t in VOCABULARY if t != "linked-account"])
def test_render_parse_round_trip(tag):
    k = FactorKind(tag)
    assert parse_factor_kind(str(k)) == k


@given(st.from_regex(r"[a-z0-9][a-z0-9._-]{0,12}", fullmatch=True))
def test_linked_round_trip(qualifier):
    k = FactorKind.linked(qualifier)
    assert parse_factor_kind(str(k)) == k


def test_merge_disjoint_halves_completes():
    m = mask_merge(Mask(8, ((0, 4),)), Mask(8, ((4, 8),)))
    assert m == Mask(8, ((0, 8),))
    assert mask_is_complete(m)


def test_merge_overlapping():
    a, b = Mask(12, ((0, 6),)), Mask(12, ((4, 10),))
    expected = index_set_union(a, b)
    assert expected == ((0, 10),)
    assert mask_merge(a, b).revealed == expected


def test_merge_length_mismatch():
    with pytest.raises(LengthMismatch):
        mask_merge(Mask(8, ((0, 1),)), Mask(10, ((0, 1),)))


def test_completeness_examples():
    assert mask_is_complete(Mask(4, ((0, 4),)))
    assert not mask_is_complete(Mask(4, ((0, 3),)))
    m = Mask(18, ((0, 6), (6, 18)))
    assert set(range(18)) == set(m.indices())
    assert mask_is_complete(m)


@pytest.mark.parametrize(
    "intervals", [((2, 1),), ((0, 5),), ((0, 2), (1, 3)), ((2, 3), (0, 1)), ((-1, 2),)]
)
def test_invalid_intervals_rejected(intervals):
    with pytest.raises(ValueError):
        Mask(4, intervals)


def test_pattern_round_trip():
    m = Mask.from_pattern("XX##X#XX")
    assert m.revealed == ((0, 2), (4, 5), (6, 8))
    assert m.to_pattern() == "XX##X#XX"
    with pytest.raises(ValueError):
        Mask.from_pattern("XX*#")


def test_complete_disclosure_drops_mask():
    assert Disclosure(FactorKind("citizen-id"), Mask.from_pattern("XXXX")).mask is None


@pytest.mark.parametrize(
    "tag, category",
    [
        ("citizen-id", InfoCategory.IDENTITY),
        ("bankcard-number", InfoCategory.PROPERTY),
        ("acquaintance-name", InfoCategory.SOCIAL_RELATIONSHIP),
        ("email-address", InfoCategory.ACCOUNT),
        ("device-type", InfoCategory.HISTORICAL_RECORDS),
    ],
)
def test_default_categories(tag, category):
    assert categorize_info(Disclosure(FactorKind(tag))) is category


def test_declared_category_wins():
    d = Disclosure(FactorKind("email-code"), category=InfoCategory.ACCOUNT)
    assert categorize_info(d) is InfoCategory.ACCOUNT


@settings(max_examples=500)
@given(mask_pairs(2))
def test_merge_commutative_and_idempotent(pair):
    a, b = pair
    assert mask_merge(a, b) == mask_merge(b, a)
    assert mask_merge(a, a) == a


@settings(max_examples=500)
@given(mask_pairs(3))
def test_merge_associative(triple):
    a, b, c = triple
    assert mask_merge(mask_merge(a, b), c) == mask_merge(a, mask_merge(b, c))


@settings(max_examples=500)
@given(mask_pairs(2))
def test_merge_against_index_oracle(pair):
    a, b = pair
    merged = mask_merge(a, b)
    assert merged.revealed == index_set_union(a, b)
    assert len(merged.indices()) >= max(len(a.indices()), len(b.indices()))
    covered = [False] * a.total_length
    for i in a.indices() | b.indices():
        covered[i] = True
    assert mask_is_complete(merged) == all(covered)
