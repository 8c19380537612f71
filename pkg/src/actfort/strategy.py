"""Strategy queries over an ecosystem.

* :func:`victim_closure` -- which accounts fall once a seed set is compromised
  (least fixpoint, round by round).
* :func:`attack_chain` -- backward search from a chosen target down to
  accounts the attacker profile opens directly.
* :func:`classify_depth` -- how many layers of intermediate accounts a
  compromise needs.
* :func:`harden` -- greedy what-if search for disclosures whose removal
  protects a target best.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Mapping, NamedTuple, Optional, Union

from .disclosure import FactorKind, Mask, merge_by_length, sort_kinds
from .ecosystem import Ecosystem
from .errors import NoChainFound, UnknownAccount
from .tdg import Coverage, couple_groups, full_capacity_parents

__all__ = [
    "AttackChain",
    "ChainStep",
    "ClosureResult",
    "Cut",
    "Depth",
    "DepthClass",
    "KnowledgeBase",
    "Victim",
    "apply_cuts",
    "attack_chain",
    "classify_all",
    "classify_depth",
    "dependency_relations",
    "exhaustive_harden",
    "harden",
    "replay_chain",
    "victim_closure",
]


@dataclass(frozen=True)
class KnowledgeBase:
    """What the attacker holds at some point of an attack.

    ``partials`` keeps, per kind, the merged mask for each value length that
    has not completed yet.  ``provenance`` maps every possessed kind and
    every compromised account id to the step that produced it.
    """

    possessed: frozenset[FactorKind]
    partials: Mapping[FactorKind, tuple[Mask, ...]]
    compromised: tuple[str, ...]
    provenance: Mapping[Union[FactorKind, str], str] = field(default_factory=dict)


class Victim(NamedTuple):
    account_id: str
    round: int
    path_id: Optional[str]


@dataclass(frozen=True)
class ClosureResult:
    victims: tuple[Victim, ...]
    rounds: int
    final_knowledge: KnowledgeBase

    @property
    def victim_ids(self) -> tuple[str, ...]:
        return tuple(v.account_id for v in self.victims)

    def round_of(self, account_id: str) -> Optional[int]:
        for v in self.victims:
            if v.account_id == account_id:
                return v.round
        return None


class _Builder:
    """Mutable knowledge base used while a closure runs."""

    def __init__(self, e: Ecosystem) -> None:
        self.e = e
        self.compromised: list[str] = []
        self.masks: list[tuple[FactorKind, Mask]] = []
        self.possessed: set[FactorKind] = set()
        self.provenance: dict[Union[FactorKind, str], str] = {}
        for kind in sort_kinds(e.profile.capabilities):
            self._gain(kind, "capability")
        for d in sorted(e.profile.prior_knowledge, key=lambda d: d.sort_key()):
            self._take(d, "prior-knowledge")

    def _gain(self, kind: FactorKind, source: str) -> None:
        if kind not in self.possessed:
            self.possessed.add(kind)
            self.provenance[kind] = source

    def _take(self, d, source: str) -> None:
        if d.mask is None:
            self._gain(d.kind, source)
            return
        self.masks.append((d.kind, d.mask))
        if d.kind in self.possessed:
            return
        merged = merge_by_length(m for k, m in self.masks if k == d.kind)
        if any(m.complete for m in merged.values()):
            self._gain(d.kind, f"mask merge via {source}")

    def absorb(self, account_id: str, label: str) -> None:
        acc = self.e.account(account_id)
        self.compromised.append(account_id)
        self.provenance[account_id] = label
        self._gain(FactorKind.linked(account_id), account_id)
        for d in acc.sorted_exposures():
            self._take(d, account_id)

    def freeze(self) -> KnowledgeBase:
        partials = {}
        kinds = {k for k, _ in self.masks if k not in self.possessed}
        for kind in sort_kinds(kinds):
            merged = merge_by_length(m for k, m in self.masks if k == kind)
            partials[kind] = tuple(merged.values())
        return KnowledgeBase(
            possessed=frozenset(self.possessed),
            partials=partials,
            compromised=tuple(self.compromised),
            provenance=dict(self.provenance),
        )


def victim_closure(e: Ecosystem, seed: Iterable[str] = ()) -> ClosureResult:
    """Compromise everything reachable from ``seed`` under ``e.profile``.

    Round 0 lists the seed.  Each later round takes every account with a
    path satisfied by the knowledge held at the start of the round, in
    account-id order.
    """
    seed = sorted(set(seed))
    for s in seed:
        e.account(s)
    kb = _Builder(e)
    victims = [Victim(s, 0, None) for s in seed]
    for s in seed:
        kb.absorb(s, "seed")
    done = set(seed)
    rounds = 0
    while True:
        known = frozenset(kb.possessed)
        fresh = []
        for acc_id in e.ids:
            if acc_id in done:
                continue
            for p in e.effective_paths(acc_id):
                if p.factors <= known:
                    fresh.append(Victim(acc_id, rounds + 1, p.path_id))
                    break
        if not fresh:
            break
        rounds += 1
        for v in fresh:
            kb.absorb(v.account_id, f"round {rounds}")
            done.add(v.account_id)
        victims.extend(fresh)
    return ClosureResult(tuple(victims), rounds, kb.freeze())


# ---------------------------------------------------------------------------
# attack chains


class ChainStep(NamedTuple):
    account_id: str
    path_id: str
    factors_consumed: frozenset[FactorKind]
    factors_gained: frozenset[FactorKind]


@dataclass(frozen=True)
class AttackChain:
    steps: tuple[ChainStep, ...]
    target: str

    @property
    def accounts(self) -> tuple[str, ...]:
        return tuple(s.account_id for s in self.steps)

    def __str__(self) -> str:
        return " -> ".join(self.accounts)


class _Predecessors:
    """Strong parents and minimal couple groups of each account, computed lazily."""

    def __init__(self, e: Ecosystem, cov: Coverage, max_group_size: Optional[int]) -> None:
        self.e = e
        self.cov = cov
        self.max_group_size = max_group_size
        self._cache: dict[str, tuple[frozenset[str], ...]] = {}

    def direct(self, account_id: str) -> bool:
        return self.cov.satisfied_path(account_id) is not None

    def __call__(self, account_id: str) -> tuple[frozenset[str], ...]:
        hit = self._cache.get(account_id)
        if hit is None:
            options = {frozenset({s.parent}) for s in full_capacity_parents(self.e, account_id, self.cov)}
            options |= {
                frozenset(g.members)
                for g in couple_groups(self.e, account_id, self.max_group_size, self.cov)
            }
            hit = self._cache[account_id] = tuple(sorted(options, key=lambda o: (len(o), sorted(o))))
        return hit


def _antichain(sets: Iterable[frozenset[str]]) -> set[frozenset[str]]:
    keep: list[frozenset[str]] = []
    for s in sorted(set(sets), key=len):
        if not any(k <= s for k in keep):
            keep.append(s)
    return set(keep)


def _supports(
    preds: _Predecessors, target: str, max_depth: int, minimal_only: bool
) -> set[frozenset[str]]:
    """Account sets (target included) whose compromise in some order opens ``target``.

    Each set comes from a derivation tree that never revisits an account on
    a root-to-leaf branch and has at most ``max_depth`` layers.  With
    ``minimal_only`` only inclusion-minimal sets are kept at every node,
    which preserves every minimum-cardinality answer.
    """
    memo: dict[tuple[str, frozenset[str], int], set[frozenset[str]]] = {}

    def derive(v: str, banned: frozenset[str], depth: int) -> set[frozenset[str]]:
        if preds.direct(v):
            return {frozenset({v})}
        if depth <= 1:
            return set()
        key = (v, banned, depth)
        if key in memo:
            return memo[key]
        inner = banned | {v}
        out: set[frozenset[str]] = set()
        for option in preds(v):
            if option & inner:
                continue
            parts = []
            for m in sorted(option):
                sub = derive(m, inner, depth - 1)
                if not sub:
                    break
                parts.append(sub)
            else:
                for combo in product(*parts):
                    out.add(frozenset().union(*combo) | {v})
                if minimal_only:
                    out = _antichain(out)
        memo[key] = out
        return out

    return derive(target, frozenset(), max_depth)


def _linearize(cov: Coverage, accounts: frozenset[str], target: str) -> AttackChain:
    placed: list[str] = []
    remaining = set(accounts) - {target}
    steps = []

    def step(acc_id: str) -> None:
        path = cov.satisfied_path(acc_id, placed)
        before = cov(placed)
        placed.append(acc_id)
        steps.append(ChainStep(acc_id, path.path_id, path.factors, cov(placed) - before))

    while remaining:
        ready = min(a for a in remaining if cov.satisfied_path(a, placed) is not None)
        remaining.discard(ready)
        step(ready)
    step(target)
    return AttackChain(tuple(steps), target)


def attack_chain(
    e: Ecosystem,
    target: str,
    max_depth: int = 8,
    find_all: bool = False,
    max_group_size: Optional[int] = None,
) -> list[AttackChain]:
    """Chains of compromises ending at ``target``; shortest first.

    ``max_depth`` bounds the number of account layers, the target included,
    so a directly reachable target needs ``max_depth >= 1``.  Couple groups
    are treated as one merged predecessor requiring all members.  Raises
    :class:`NoChainFound` when the profile cannot reach ``target``.
    """
    e.account(target)
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    cov = Coverage(e)
    preds = _Predecessors(e, cov, max_group_size)
    sets = _supports(preds, target, max_depth, minimal_only=not find_all)
    if not sets:
        raise NoChainFound(target)
    chains = sorted((_linearize(cov, s, target) for s in sets), key=lambda c: (len(c.steps), c.accounts))
    if not find_all:
        return chains[:1]
    return chains


def replay_chain(e: Ecosystem, chain: AttackChain) -> bool:
    """Check a chain step by step against the profile and earlier gains."""
    cov = Coverage(e)
    placed: list[str] = []
    gained: set[FactorKind] = set(cov())
    if not chain.steps or chain.steps[-1].account_id != chain.target:
        return False
    for step in chain.steps:
        path = {p.path_id: p for p in e.effective_paths(step.account_id)}.get(step.path_id)
        if path is None or path.factors != step.factors_consumed:
            return False
        if not path.factors <= cov(placed) or not path.factors <= gained:
            return False
        placed.append(step.account_id)
        gained |= step.factors_gained
    return True


# ---------------------------------------------------------------------------
# depth classes


class Depth(str, Enum):
    DIRECT = "direct"
    ONE_LAYER = "one-layer"
    TWO_LAYER_FULL = "two-layer-full"
    TWO_LAYER_MIXED = "two-layer-mixed"
    UNREACHABLE = "unreachable"

    @property
    def rank(self) -> int:
        return list(Depth).index(self)


@dataclass(frozen=True)
class DepthClass:
    """Depth class of one account.

    ``minimal_depth`` counts intermediate layers when couple groups of any
    size may be used (``None`` when the account cannot be reached at all);
    ``strong_depth`` is the same over strong edges only.  Accounts needing
    three or more layers land in ``UNREACHABLE`` but keep their depth.
    """

    cls: Depth
    minimal_depth: Optional[int] = None
    strong_depth: Optional[int] = None

    @property
    def severity(self) -> tuple[int, float]:
        return (self.cls.rank, math.inf if self.minimal_depth is None else self.minimal_depth)


def _strong_depths(e: Ecosystem, cov: Coverage) -> dict[str, Optional[int]]:
    depth: dict[str, Optional[int]] = {
        a: (0 if cov.satisfied_path(a) is not None else None) for a in e.ids
    }
    parents = {
        a: sorted({s.parent for s in full_capacity_parents(e, a, cov) if not s.ap_only}) for a in e.ids
    }
    changed = True
    while changed:
        changed = False
        for a in e.ids:
            best = depth[a]
            for p in parents[a]:
                if depth[p] is not None and (best is None or depth[p] + 1 < best):
                    best = depth[p] + 1
            if best != depth[a]:
                depth[a] = best
                changed = True
    return depth


def _classify(minimal: Optional[int], strong: Optional[int]) -> Depth:
    if minimal == 0:
        return Depth.DIRECT
    if minimal == 1:
        return Depth.ONE_LAYER
    if minimal == 2:
        return Depth.TWO_LAYER_FULL if strong == 2 else Depth.TWO_LAYER_MIXED
    return Depth.UNREACHABLE


def classify_all(e: Ecosystem) -> dict[str, DepthClass]:
    """Depth class of every account, keyed by account id.

    The minimal layer count of an account equals its closure round minus
    one: any account first opened in round ``r`` uses only accounts from
    earlier rounds.
    """
    closure = victim_closure(e)
    strong = _strong_depths(e, Coverage(e))
    out = {}
    for a in e.ids:
        r = closure.round_of(a)
        minimal = None if r is None else r - 1
        out[a] = DepthClass(_classify(minimal, strong[a]), minimal, strong[a])
    return out


def classify_depth(e: Ecosystem, account: str) -> DepthClass:
    e.account(account)
    return classify_all(e)[account]


def dependency_relations(e: Ecosystem, account: str) -> frozenset[Depth]:
    """Every dependency relationship through which ``account`` can fall.

    Unlike :func:`classify_depth`, which reports the minimal class only,
    an account may satisfy several relationships at once.
    """
    e.account(account)
    cov = Coverage(e)
    preds = _Predecessors(e, cov, None)
    classes = classify_all(e)
    direct = {a for a, c in classes.items() if c.cls is Depth.DIRECT}

    def one_layer(v: str) -> bool:
        return v not in direct and any(o <= direct for o in preds(v))

    out = set()
    if classes[account].minimal_depth is None:
        out.add(Depth.UNREACHABLE)
    if account in direct:
        out.add(Depth.DIRECT)
    if one_layer(account):
        out.add(Depth.ONE_LAYER)
    for option in preds(account):
        if not all(m in direct or one_layer(m) for m in option) or option <= direct:
            continue
        strong_only = len(option) == 1 and all(
            m in direct or any(len(o) == 1 and o <= direct for o in preds(m)) for m in option
        )
        out.add(Depth.TWO_LAYER_FULL if strong_only else Depth.TWO_LAYER_MIXED)
    return frozenset(out)


# ---------------------------------------------------------------------------
# hardening


@dataclass(frozen=True)
class Cut:
    """Removing every disclosure of ``kind`` from ``account_id``.

    ``before``/``after`` are the target's depth class around this cut, with
    all earlier recommended cuts already applied.
    """

    account_id: str
    kind: FactorKind
    before: DepthClass
    after: DepthClass


def _score(e: Ecosystem, target: str) -> tuple[DepthClass, tuple]:
    dc = classify_depth(e, target)
    if dc.minimal_depth is None:
        supports = 0
    else:
        preds = _Predecessors(e, Coverage(e), None)
        supports = len(_supports(preds, target, len(e), minimal_only=True))
    return dc, dc.severity + (-supports,)


def _candidates(e: Ecosystem, target: str) -> list[tuple[str, FactorKind]]:
    required = {k for a in e.ids for p in e.effective_paths(a) for k in p.factors}
    out = set()
    for acc in e.accounts:
        if acc.account_id == target:
            continue
        out |= {(acc.account_id, d.kind) for d in acc.exposes if d.kind in required}
    return sorted(out, key=lambda c: (c[0], str(c[1])))


def apply_cuts(e: Ecosystem, cuts: Iterable[Union[Cut, tuple[str, FactorKind]]]) -> Ecosystem:
    for c in cuts:
        acc_id, kind = (c.account_id, c.kind) if isinstance(c, Cut) else c
        e = e.without_disclosure(acc_id, kind)
    return e


def harden(e: Ecosystem, target: str, budget: int = 1) -> tuple[Cut, ...]:
    """Greedily pick up to ``budget`` disclosure removals protecting ``target``.

    Each round evaluates every remaining single cut and keeps the one that
    raises the target's depth class (then minimal depth, then lowers the
    number of minimal supporting account sets) the most; ties go to the
    lexicographically first ``(account, kind)``.  Stops early once the
    target is unreachable or no cut helps.  ``e`` itself is never modified.
    """
    e.account(target)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    current = e
    before, score = _score(current, target)
    cuts: list[Cut] = []
    while len(cuts) < budget and before.minimal_depth is not None:
        best = None
        for acc_id, kind in _candidates(current, target):
            trial = current.without_disclosure(acc_id, kind)
            after, trial_score = _score(trial, target)
            if trial_score > score and (best is None or trial_score > best[0]):
                best = (trial_score, acc_id, kind, after, trial)
        if best is None:
            break
        score, acc_id, kind, after, current = best
        cuts.append(Cut(acc_id, kind, before, after))
        before = after
    return tuple(cuts)


def exhaustive_harden(e: Ecosystem, target: str, budget: int) -> tuple[DepthClass, tuple]:
    """Best depth class reachable with at most ``budget`` cuts, by brute force."""
    candidates = _candidates(e, target)
    best_dc, best_score = _score(e, target)
    best_cuts: tuple = ()
    for size in range(1, budget + 1):
        for combo in combinations(candidates, size):
            dc, score = _score(apply_cuts(e, combo), target)
            if score > best_score:
                best_dc, best_score, best_cuts = dc, score, combo
    return best_dc, best_cuts
