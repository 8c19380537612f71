"""Credential-factor vocabulary, masked partial disclosures and their merge algebra.

A :class:`Mask` records which positions of a value (a bankcard number, a
citizen ID) an account reveals.  Services hide different digits, so an
attacker who collects several masked views can merge them; once the merged
mask covers every position the value counts as fully known.

>>> a = Mask.from_pattern("XXXX####")
>>> b = Mask.from_pattern("####XXXX")
>>> mask_is_complete(mask_merge(a, b))
True
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Iterable, Optional

from .errors import LengthMismatch, MissingQualifier, UnknownFactorKind

VOCABULARY: tuple[str, ...] = (
    "phone-number",
    "sms-code",
    "email-address",
    "email-code",
    "password",
    "citizen-id",
    "bankcard-number",
    "real-name",
    "address",
    "user-id",
    "acquaintance-name",
    "device-type",
    "security-question",
    "biometric",
    "payment-password",
    "custom-service",
    "linked-account",
)
LINKED_ACCOUNT = "linked-account"

_KIND_RE = re.compile(r"^([a-z]+(?:-[a-z]+)*)(?::(.+))?$")
_MASK_RE = re.compile(r"^[X#]+$")


class InfoCategory(str, Enum):
    IDENTITY = "identity"
    ACCOUNT = "account"
    SOCIAL_RELATIONSHIP = "social-relationship"
    PROPERTY = "property"
    HISTORICAL_RECORDS = "historical-records"


@dataclass(frozen=True)
class FactorKind:
    """One vocabulary entry; ``qualifier`` names the provider of a linked account."""

    tag: str
    qualifier: Optional[str] = None

    def __post_init__(self) -> None:
        if self.tag not in VOCABULARY:
            raise UnknownFactorKind(f"unknown factor kind {self.tag!r}")
        if self.tag == LINKED_ACCOUNT and not self.qualifier:
            raise MissingQualifier("linked-account requires a qualifier, e.g. 'linked-account:gmail'")
        if self.tag != LINKED_ACCOUNT and self.qualifier is not None:
            raise UnknownFactorKind(f"factor kind {self.tag!r} takes no qualifier")

    @classmethod
    def linked(cls, account_id: str) -> FactorKind:
        return cls(LINKED_ACCOUNT, account_id)

    def __str__(self) -> str:
        if self.qualifier is None:
            return self.tag
        return f"{self.tag}:{self.qualifier}"


def parse_factor_kind(text: str) -> FactorKind:
    """Parse ``kind`` or ``linked-account:<id>``.

    >>> parse_factor_kind("linked-account:gmail")
    FactorKind(tag='linked-account', qualifier='gmail')
    """
    m = _KIND_RE.match(text)
    if m is None:
        raise UnknownFactorKind(f"unknown factor kind {text!r}")
    tag, qualifier = m.group(1), m.group(2)
    if tag not in VOCABULARY:
        raise UnknownFactorKind(f"unknown factor kind {text!r}")
    return FactorKind(tag, qualifier)


def sort_kinds(kinds: Iterable[FactorKind]) -> list[FactorKind]:
    return sorted(kinds, key=str)


@dataclass(frozen=True)
class Mask:
    """Revealed positions of a value of ``total_length`` symbols.

    ``revealed`` holds sorted, disjoint half-open intervals; adjacent ones are
    coalesced on construction so equal coverage means equal masks.
    """

    total_length: int
    revealed: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.total_length <= 0:
            raise ValueError("mask length must be positive")
        prev_end = 0
        for start, end in self.revealed:
            if not 0 <= start < end <= self.total_length:
                raise ValueError(f"interval [{start},{end}) outside [0,{self.total_length})")
            if start < prev_end:
                raise ValueError("mask intervals must be sorted and disjoint")
            prev_end = end
        object.__setattr__(self, "revealed", _normalize(self.revealed))

    @classmethod
    def from_intervals(cls, total_length: int, intervals: Iterable[tuple[int, int]]) -> Mask:
        return cls(total_length, _normalize(intervals))

    @classmethod
    def from_pattern(cls, pattern: str) -> Mask:
        if not _MASK_RE.match(pattern):
            raise ValueError(f"mask pattern {pattern!r} must match ^[X#]+$")
        spans = [(m.start(), m.end()) for m in re.finditer("X+", pattern)]
        return cls(len(pattern), tuple(spans))

    def to_pattern(self) -> str:
        chars = ["#"] * self.total_length
        for start, end in self.revealed:
            chars[start:end] = "X" * (end - start)
        return "".join(chars)

    def indices(self) -> frozenset[int]:
        return frozenset(i for start, end in self.revealed for i in range(start, end))

    @property
    def coverage(self) -> int:
        return sum(end - start for start, end in self.revealed)

    @property
    def complete(self) -> bool:
        return mask_is_complete(self)


def _normalize(intervals: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    merged: list[list[int]] = []
    for start, end in sorted(i for i in intervals if i[0] < i[1]):
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((s, e) for s, e in merged)


def mask_merge(a: Mask, b: Mask) -> Mask:
    if a.total_length != b.total_length:
        raise LengthMismatch(
            f"cannot merge masks of length {a.total_length} and {b.total_length}"
        )
    return Mask(a.total_length, _normalize(a.revealed + b.revealed))


def mask_is_complete(m: Mask) -> bool:
    return m.coverage == m.total_length


def merge_by_length(masks: Iterable[Mask]) -> dict[int, Mask]:
    """Merge masks that share a total length; different lengths stay apart."""
    groups: dict[int, list[Mask]] = {}
    for m in masks:
        groups.setdefault(m.total_length, []).append(m)
    return {n: reduce(mask_merge, ms) for n, ms in sorted(groups.items())}


@dataclass(frozen=True)
class Disclosure:
    """A piece of personal information an account shows after log-in.

    A fully revealed value carries ``mask=None``; ``category=None`` means the
    default category for the kind applies (see :func:`default_category`).
    """

    kind: FactorKind
    mask: Optional[Mask] = None
    category: Optional[InfoCategory] = None

    def __post_init__(self) -> None:
        if self.mask is not None and self.mask.complete:
            object.__setattr__(self, "mask", None)

    @property
    def complete(self) -> bool:
        return self.mask is None

    def sort_key(self) -> tuple[str, str]:
        return (str(self.kind), self.mask.to_pattern() if self.mask else "")


_DEFAULT_CATEGORY = {
    "real-name": InfoCategory.IDENTITY,
    "citizen-id": InfoCategory.IDENTITY,
    "address": InfoCategory.IDENTITY,
    "email-address": InfoCategory.ACCOUNT,
    "user-id": InfoCategory.ACCOUNT,
    "linked-account": InfoCategory.ACCOUNT,
    "phone-number": InfoCategory.ACCOUNT,
    "acquaintance-name": InfoCategory.SOCIAL_RELATIONSHIP,
    "bankcard-number": InfoCategory.PROPERTY,
}


def default_category(kind: FactorKind) -> InfoCategory:
    return _DEFAULT_CATEGORY.get(kind.tag, InfoCategory.HISTORICAL_RECORDS)


def categorize_info(d: Disclosure) -> InfoCategory:
    if d.category is not None:
        return d.category
    return default_category(d.kind)
