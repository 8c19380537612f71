"""Measurement statistics and DOT / JSON export of graphs and reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Mapping, Optional

from .disclosure import FactorKind, Mask, parse_factor_kind, sort_kinds
from .ecosystem import (
    SMS_CAPABILITIES,
    Ecosystem,
    PathClass,
    Purpose,
    classify_auth_path,
    dump_profile,
    load_profile,
)
from .errors import EmptyEcosystem
from .strategy import ClosureResult, Depth, KnowledgeBase, Victim, classify_all
from .tdg import CoupleGroup, FactorEdge, StrongEdge, TransformationDependencyGraph

SCHEMA_VERSION = "1"

__all__ = [
    "SCHEMA_VERSION",
    "SmsOnly",
    "StatsReport",
    "closure_from_json",
    "compute_stats",
    "dumps_report",
    "export_dot",
    "export_json",
    "graph_from_json",
    "percent",
    "report_schema",
    "stats_from_json",
]


def percent(part: int, whole: int) -> float:
    """``100 * part / whole`` rounded half-up to two decimals, in exact arithmetic.

    >>> percent(2, 3), percent(1, 8)
    (66.67, 12.5)
    """
    if whole <= 0:
        raise ZeroDivisionError("percentage of an empty population")
    return ((part * 20000 + whole) // (2 * whole)) / 100


@dataclass(frozen=True)
class SmsOnly:
    """Share of accounts in a platform group that an SMS code alone opens."""

    accounts: int
    sign_in: float
    reset: float
    total: float


@dataclass(frozen=True)
class StatsReport:
    account_count: int = 0
    path_count: int = 0
    sms_only: Mapping[str, SmsOnly] = field(default_factory=dict)
    factor_usage: Mapping[str, float] = field(default_factory=dict)
    path_classes: Mapping[str, float] = field(default_factory=dict)
    info_exposure: Mapping[str, float] = field(default_factory=dict)
    depth_counts: Mapping[str, int] = field(default_factory=dict)
    depth_percent: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> StatsReport:
        return cls()


def _sms_only(paths) -> bool:
    return any(p.factors <= SMS_CAPABILITIES for p in paths)


def compute_stats(e: Ecosystem) -> StatsReport:
    """Aggregate measurement statistics over the declared paths and exposures.

    Platform groups are every platform present plus ``all``; each uses its
    own account count as denominator.  Factor usage and path classes are
    fractions of all declared paths, info exposure a fraction of accounts.
    """
    if not e.accounts:
        raise EmptyEcosystem("ecosystem has no accounts to aggregate")

    groups: dict[str, list] = {}
    for acc in e.accounts:
        groups.setdefault(acc.platform.value, []).append(acc)
    groups = {k: groups[k] for k in sorted(groups)}
    groups["all"] = list(e.accounts)

    sms_only = {}
    for name, accs in groups.items():
        n = len(accs)
        sign_in = sum(_sms_only([p for p in a.auth_paths if p.purpose is Purpose.SIGN_IN]) for a in accs)
        reset = sum(_sms_only([p for p in a.auth_paths if p.purpose is Purpose.PASSWORD_RESET]) for a in accs)
        total = sum(_sms_only(a.auth_paths) for a in accs)
        sms_only[name] = SmsOnly(n, percent(sign_in, n), percent(reset, n), percent(total, n))

    paths = [p for a in e.accounts for p in a.auth_paths]
    usage: dict[FactorKind, int] = {}
    for p in paths:
        for k in p.factors:
            usage[k] = usage.get(k, 0) + 1
    classes = {c: 0 for c in PathClass}
    for p in paths:
        classes[classify_auth_path(p)] += 1

    exposure: dict[FactorKind, int] = {}
    for acc in e.accounts:
        for k in acc.exposed_kinds():
            exposure[k] = exposure.get(k, 0) + 1

    depth = {d.value: 0 for d in Depth}
    for dc in classify_all(e).values():
        depth[dc.cls.value] += 1

    n = len(e.accounts)
    return StatsReport(
        account_count=n,
        path_count=len(paths),
        sms_only=sms_only,
        factor_usage={str(k): percent(usage[k], len(paths)) for k in sort_kinds(usage)},
        path_classes={c.value: percent(v, len(paths)) for c, v in classes.items()},
        info_exposure={str(k): percent(exposure[k], n) for k in sort_kinds(exposure)},
        depth_counts=depth,
        depth_percent={k: percent(v, n) for k, v in depth.items()},
    )


# ---------------------------------------------------------------------------
# DOT


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: TransformationDependencyGraph) -> str:
    """Render the graph in DOT.

    Fringe nodes (opened by the attacker profile alone) get ``class=fringe``,
    the rest ``class=internal``.  Strong edges are solid, weak edges dashed
    and each couple group is annotated by a comment.
    """
    if not g.node_ids:
        return "digraph tdg { }\n"
    fringe = set(g.fringe)
    lines = ["digraph tdg {"]
    for n in g.node_ids:
        cls = "fringe" if n in fringe else "internal"
        color = "red" if n in fringe else "blue"
        lines.append(f"  {_q(n)} [class={cls}, color={color}];")
    for s in g.strong_edges:
        attrs = f"style=solid, path={_q(s.satisfied_path_id)}"
        if s.ap_only:
            attrs += ", ap_only=true"
        lines.append(f"  {_q(s.parent)} -> {_q(s.child)} [{attrs}];")
    for grp in g.couple_file:
        members = ", ".join(grp.members)
        lines.append(f"  // couple {{{members}}} -> {grp.child} via {grp.satisfied_path_id}")
    for member, child in g.weak_edges:
        lines.append(f"  {_q(member)} -> {_q(child)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON


def _graph_doc(g: TransformationDependencyGraph) -> dict[str, Any]:
    return {
        "node_ids": list(g.node_ids),
        "fringe": list(g.fringe),
        "factor_edges": [
            {
                "from": f.from_account,
                "disclosure_kind": str(f.disclosure_kind),
                "to": f.to_account,
                "path": f.path_id,
                "factor_kind": str(f.factor_kind),
            }
            for f in g.factor_edges
        ],
        "strong_edges": [
            {"parent": s.parent, "child": s.child, "path": s.satisfied_path_id, "ap_only": s.ap_only}
            for s in g.strong_edges
        ],
        "weak_edges": [[m, c] for m, c in g.weak_edges],
        "couple_file": [
            {"members": list(c.members), "child": c.child, "path": c.satisfied_path_id}
            for c in g.couple_file
        ],
        "profile": dump_profile(g.profile),
    }


def _stats_doc(r: StatsReport) -> dict[str, Any]:
    return {
        "account_count": r.account_count,
        "path_count": r.path_count,
        "sms_only": {
            k: {"accounts": v.accounts, "sign_in": v.sign_in, "reset": v.reset, "total": v.total}
            for k, v in r.sms_only.items()
        },
        "factor_usage": dict(r.factor_usage),
        "path_classes": dict(r.path_classes),
        "info_exposure": dict(r.info_exposure),
        "depth_counts": dict(r.depth_counts),
        "depth_percent": dict(r.depth_percent),
    }


def _key_doc(key) -> str:
    return f"kind:{key}" if isinstance(key, FactorKind) else f"account:{key}"


def _closure_doc(c: ClosureResult) -> dict[str, Any]:
    kb = c.final_knowledge
    return {
        "rounds": c.rounds,
        "victims": [{"account": v.account_id, "round": v.round, "path": v.path_id} for v in c.victims],
        "knowledge": {
            "possessed": [str(k) for k in sort_kinds(kb.possessed)],
            "partials": {str(k): [m.to_pattern() for m in ms] for k, ms in kb.partials.items()},
            "compromised": list(kb.compromised),
            "provenance": [[_key_doc(k), v] for k, v in kb.provenance.items()],
        },
    }


def export_json(
    g: TransformationDependencyGraph, r: StatsReport, c: Optional[ClosureResult] = None
) -> dict[str, Any]:
    """One report document with ``graph``, ``stats`` and, if given, ``closure``."""
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "graph": _graph_doc(g), "stats": _stats_doc(r)}
    if c is not None:
        doc["closure"] = _closure_doc(c)
    return doc


def dumps_report(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def report_schema() -> dict[str, Any]:
    text = resources.files("actfort").joinpath("data/report.schema.json").read_text("utf-8")
    return json.loads(text)


def graph_from_json(doc: Mapping[str, Any]) -> TransformationDependencyGraph:
    g = doc["graph"] if "graph" in doc else doc
    kind = parse_factor_kind
    return TransformationDependencyGraph(
        node_ids=tuple(g["node_ids"]),
        factor_edges=tuple(
            FactorEdge(f["from"], kind(f["disclosure_kind"]), f["to"], f["path"], kind(f["factor_kind"]))
            for f in g["factor_edges"]
        ),
        strong_edges=tuple(StrongEdge(s["parent"], s["child"], s["path"], s["ap_only"]) for s in g["strong_edges"]),
        weak_edges=tuple((m, c) for m, c in g["weak_edges"]),
        couple_file=tuple(CoupleGroup(tuple(c["members"]), c["child"], c["path"]) for c in g["couple_file"]),
        profile=load_profile(g["profile"]),
        fringe=tuple(g["fringe"]),
    )


def stats_from_json(doc: Mapping[str, Any]) -> StatsReport:
    s = doc["stats"] if "stats" in doc else doc
    return StatsReport(
        account_count=s["account_count"],
        path_count=s["path_count"],
        sms_only={k: SmsOnly(**v) for k, v in s["sms_only"].items()},
        factor_usage=dict(s["factor_usage"]),
        path_classes=dict(s["path_classes"]),
        info_exposure=dict(s["info_exposure"]),
        depth_counts=dict(s["depth_counts"]),
        depth_percent=dict(s["depth_percent"]),
    )


def closure_from_json(doc: Mapping[str, Any]) -> ClosureResult:
    c = doc["closure"] if "closure" in doc else doc
    kb = c["knowledge"]
    provenance = {}
    for key, source in kb["provenance"]:
        tag, _, value = key.partition(":")
        provenance[parse_factor_kind(value) if tag == "kind" else value] = source
    return ClosureResult(
        victims=tuple(Victim(v["account"], v["round"], v["path"]) for v in c["victims"]),
        rounds=c["rounds"],
        final_knowledge=KnowledgeBase(
            possessed=frozenset(parse_factor_kind(k) for k in kb["possessed"]),
            partials={
                parse_factor_kind(k): tuple(Mask.from_pattern(p) for p in ms) for k, ms in kb["partials"].items()
            },
            compromised=tuple(kb["compromised"]),
            provenance=provenance,
        ),
    )
