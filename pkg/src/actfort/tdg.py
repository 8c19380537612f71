"""Transformation dependency graph construction.

An account's exposed information becomes another account's credential.
This module links the two: factor edges connect an exposed kind to an
identical required kind, a *strong* edge ``u -> v`` says that ``u`` alone
(with the attacker profile) opens some path of ``v``, and a *couple group*
is a minimal set of accounts that only together open a path of ``v``.
Each couple member gets a *weak* edge to ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .disclosure import Disclosure, FactorKind, merge_by_length
from .ecosystem import Account, AttackerProfile, AuthPath, Ecosystem

__all__ = [
    "CoupleGroup",
    "Coverage",
    "FactorEdge",
    "StrongEdge",
    "TransformationDependencyGraph",
    "build_factor_edges",
    "build_tdg",
    "couple_groups",
    "effective_disclosures",
    "fringe_nodes",
    "full_capacity_parents",
    "path_satisfied",
]


def coverage_of(profile: AttackerProfile, accounts: Iterable[Account]) -> frozenset[FactorKind]:
    """Kinds known after compromising ``accounts``.

    Masked disclosures of one kind are pooled across all providers and the
    profile's prior knowledge; the kind counts once some same-length merge
    is complete.
    """
    known = set(profile.capabilities)
    partial: dict[FactorKind, list] = {}

    def take(d: Disclosure) -> None:
        if d.mask is None:
            known.add(d.kind)
        else:
            partial.setdefault(d.kind, []).append(d.mask)

    for d in profile.prior_knowledge:
        take(d)
    for acc in accounts:
        known.add(FactorKind.linked(acc.account_id))
        for d in acc.exposes:
            take(d)
    for kind, masks in partial.items():
        if kind not in known and any(m.complete for m in merge_by_length(masks).values()):
            known.add(kind)
    return frozenset(known)


def effective_disclosures(
    e: Ecosystem, providers: Iterable[str], profile: Optional[AttackerProfile] = None
) -> frozenset[FactorKind]:
    profile = e.profile if profile is None else profile
    return coverage_of(profile, [e.account(p) for p in sorted(set(providers))])


def path_satisfied(p: AuthPath, known: Iterable[FactorKind]) -> bool:
    return p.factors <= frozenset(known)


class Coverage:
    """Memoised :func:`effective_disclosures` over one ecosystem."""

    def __init__(self, e: Ecosystem) -> None:
        self.e = e
        self._cache: dict[frozenset[str], frozenset[FactorKind]] = {}

    def __call__(self, providers: Iterable[str] = ()) -> frozenset[FactorKind]:
        key = frozenset(providers)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = effective_disclosures(self.e, key)
        return hit

    def satisfied_path(self, account_id: str, providers: Iterable[str] = ()) -> Optional[AuthPath]:
        """First path of ``account_id`` (declaration order) opened by ``providers``."""
        known = self(providers)
        for p in self.e.effective_paths(account_id):
            if p.factors <= known:
                return p
        return None


@dataclass(frozen=True)
class FactorEdge:
    from_account: str
    disclosure_kind: FactorKind
    to_account: str
    path_id: str
    factor_kind: FactorKind

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.from_account, self.to_account, self.path_id, str(self.factor_kind))


@dataclass(frozen=True)
class StrongEdge:
    parent: str
    child: str
    satisfied_path_id: str
    ap_only: bool = False

    def sort_key(self) -> tuple[str, str, str]:
        return (self.child, self.parent, self.satisfied_path_id)


@dataclass(frozen=True)
class CoupleGroup:
    members: tuple[str, ...]
    child: str
    satisfied_path_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if len(self.members) < 2:
            raise ValueError("a couple group needs at least two members")

    def sort_key(self) -> tuple:
        return (self.child, len(self.members), self.members, self.satisfied_path_id)


def _outputs(cov: Coverage, acc: Account) -> frozenset[FactorKind]:
    """Kinds an account hands over by itself: complete exposures plus its link token."""
    own = cov([acc.account_id])
    out = {d.kind for d in acc.exposes if d.kind in own}
    out.add(FactorKind.linked(acc.account_id))
    return frozenset(out)


def build_factor_edges(e: Ecosystem, cov: Optional[Coverage] = None) -> tuple[FactorEdge, ...]:
    cov = cov or Coverage(e)
    edges = []
    for provider in e.accounts:
        outputs = _outputs(cov, provider)
        for consumer in e.accounts:
            if consumer.account_id == provider.account_id:
                continue
            for path in e.effective_paths(consumer.account_id):
                for kind in path.factors & outputs:
                    edges.append(
                        FactorEdge(provider.account_id, kind, consumer.account_id, path.path_id, kind)
                    )
    return tuple(sorted(edges, key=FactorEdge.sort_key))


def full_capacity_parents(
    e: Ecosystem, child: str, cov: Optional[Coverage] = None
) -> tuple[StrongEdge, ...]:
    cov = cov or Coverage(e)
    paths = e.effective_paths(child)
    base = cov()
    edges = []
    for parent in e.ids:
        if parent == child:
            continue
        known = cov([parent])
        for p in paths:
            if p.factors <= known:
                edges.append(StrongEdge(parent, child, p.path_id, ap_only=p.factors <= base))
    return tuple(sorted(edges, key=StrongEdge.sort_key))


def _contributors(e: Ecosystem, child: str, missing: frozenset[FactorKind]) -> list[str]:
    out = []
    for acc in e.accounts:
        if acc.account_id == child:
            continue
        if FactorKind.linked(acc.account_id) in missing or any(d.kind in missing for d in acc.exposes):
            out.append(acc.account_id)
    return out


def couple_groups(
    e: Ecosystem, child: str, max_group_size: Optional[int] = 2, cov: Optional[Coverage] = None
) -> tuple[CoupleGroup, ...]:
    """Minimal member sets (size 2..``max_group_size``) jointly opening a path of ``child``.

    ``max_group_size=None`` lifts the size cap.
    """
    if max_group_size is not None and max_group_size < 2:
        raise ValueError("max_group_size must be at least 2")
    cov = cov or Coverage(e)
    paths = e.effective_paths(child)
    base = cov()
    groups = []
    for p in paths:
        if p.factors <= base:
            continue
        # accounts providing nothing missing can never be in a minimal group
        pool = _contributors(e, child, p.factors - base)
        limit = len(pool) if max_group_size is None else min(max_group_size, len(pool))
        for size in range(2, limit + 1):
            for members in combinations(pool, size):
                if not p.factors <= cov(members):
                    continue
                if any(p.factors <= cov(set(members) - {m}) for m in members):
                    continue
                groups.append(CoupleGroup(members, child, p.path_id))
    return tuple(sorted(groups, key=CoupleGroup.sort_key))


def fringe_nodes(e: Ecosystem, cov: Optional[Coverage] = None) -> tuple[str, ...]:
    """Accounts opened by the attacker profile alone."""
    cov = cov or Coverage(e)
    return tuple(a for a in e.ids if cov.satisfied_path(a) is not None)


@dataclass(frozen=True)
class TransformationDependencyGraph:
    node_ids: tuple[str, ...]
    factor_edges: tuple[FactorEdge, ...]
    strong_edges: tuple[StrongEdge, ...]
    weak_edges: tuple[tuple[str, str], ...]
    couple_file: tuple[CoupleGroup, ...]
    profile: AttackerProfile
    fringe: tuple[str, ...] = ()

    @property
    def internal(self) -> tuple[str, ...]:
        fringe = set(self.fringe)
        return tuple(n for n in self.node_ids if n not in fringe)

    def parents(self, child: str, include_ap_only: bool = False) -> tuple[str, ...]:
        return tuple(
            sorted(
                {s.parent for s in self.strong_edges if s.child == child and (include_ap_only or not s.ap_only)}
            )
        )

    def groups_for(self, child: str) -> tuple[CoupleGroup, ...]:
        return tuple(g for g in self.couple_file if g.child == child)


def build_tdg(e: Ecosystem, max_group_size: Optional[int] = 2) -> TransformationDependencyGraph:
    cov = Coverage(e)
    strong: list[StrongEdge] = []
    groups: list[CoupleGroup] = []
    for child in e.ids:
        strong.extend(full_capacity_parents(e, child, cov))
        groups.extend(couple_groups(e, child, max_group_size, cov))
    weak = sorted({(m, g.child) for g in groups for m in g.members}, key=lambda w: (w[1], w[0]))
    return TransformationDependencyGraph(
        node_ids=e.ids,
        factor_edges=build_factor_edges(e, cov),
        strong_edges=tuple(sorted(strong, key=StrongEdge.sort_key)),
        weak_edges=tuple(weak),
        couple_file=tuple(sorted(groups, key=CoupleGroup.sort_key)),
        profile=e.profile,
        fringe=fringe_nodes(e, cov),
    )
