"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the verdicts; the lines
are written past pytest's capture so they appear even on success.
"""

import io
import json
import random
import time

import pydot
import pytest

from actfort import (
    NoChainFound,
    build_tdg,
    classify_depth,
    compute_stats,
    dumps_ecosystem,
    load_ecosystem,
    load_ecosystem_file,
    victim_closure,
)
from actfort.cli import run
from actfort.disclosure import Mask, mask_is_complete, mask_merge
from actfort.ecosystem import AttackerProfile
from actfort.disclosure import FactorKind
from actfort.reporting import dumps_report, export_dot, export_json, graph_from_json
from actfort.strategy import apply_cuts, attack_chain, classify_all, exhaustive_harden, harden, replay_chain
from actfort.synth import random_ecosystem

from oracles import closure_oracle, couple_groups_oracle, index_cover, reachable_by_dfs, strong_edges_oracle
from support import GOLDEN, corpus, fixture_path

CORPUS_SIZE = 1000
PROPERTY_CASES = 500


@pytest.fixture(scope="module")
def random_corpus():
    return corpus(CORPUS_SIZE, seed=2024)


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {number}] {status}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def test_criterion_1_case_chains(verdict):
    cases = [("case1.json", "baidu-wallet", "baidu-wallet"),
             ("case2.json", "paypal", "gmail -> paypal"),
             ("case3.json", "alipay", "ctrip -> alipay")]
    start = time.perf_counter()
    got = [str(c) for name, target, _ in cases for c in attack_chain(load_ecosystem_file(fixture_path(name)), target)]
    elapsed = time.perf_counter() - start
    ok = got == [want for *_, want in cases] and elapsed < 1.0
    verdict(1, "bundled case chains match exactly", ok, f"{got}, {elapsed:.3f}s")


def test_criterion_2_oracle_equivalence(random_corpus, verdict):
    start = time.perf_counter()
    mismatches = []
    checks = 0
    for i, e in enumerate(random_corpus):
        rng = random.Random(i)
        seeds = [(), tuple(rng.sample(e.ids, rng.randint(1, min(2, len(e)))))]
        for seed in seeds:
            checks += 1
            if set(victim_closure(e, seed).victim_ids) != closure_oracle(e, seed, rng):
                mismatches.append((i, "closure", seed))
        for target in e.ids:
            checks += 1
            try:
                found = bool(attack_chain(e, target, max_depth=len(e)))
            except NoChainFound:
                found = False
            if found != reachable_by_dfs(e, target):
                mismatches.append((i, "chain", target))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    verdict(2, f"closure and chain existence agree with brute force on {len(random_corpus)} ecosystems", ok,
            f"{checks} checks, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_3_edge_definitions(random_corpus, verdict):
    mismatches = 0
    for e in random_corpus:
        unbounded, pairs = build_tdg(e, None), build_tdg(e, 2)
        strong = {(s.parent, s.child, s.satisfied_path_id, s.ap_only) for s in unbounded.strong_edges}
        groups = {(c.members, c.child, c.satisfied_path_id) for c in unbounded.couple_file}
        capped = {(c.members, c.child, c.satisfied_path_id) for c in pairs.couple_file}
        oracle_groups = couple_groups_oracle(e)
        mismatches += strong != strong_edges_oracle(e)
        mismatches += groups != oracle_groups
        mismatches += capped != {g for g in oracle_groups if len(g[0]) <= 2}
    verdict(3, "strong edges and minimal couple groups equal exhaustive enumeration", mismatches == 0,
            f"{mismatches} disagreeing ecosystems of {len(random_corpus)}")


def _mask_triples(rng):
    n = rng.randint(1, 24)
    return [Mask.from_pattern("".join(rng.choice("X#") for _ in range(n))) for _ in range(3)]


def test_criterion_4_property_suite(verdict):
    rng = random.Random(4)
    failures: dict[str, int] = {}

    def check(name, ok):
        failures[name] = failures.get(name, 0) + (not ok)

    extra_kinds = ["email-code", "password", "citizen-id", "bankcard-number", "real-name"]
    for _ in range(PROPERTY_CASES):
        e = random_ecosystem(rng, prior_probability=0.2, link_probability=0.1, mask_probability=0.5)
        ids = list(e.ids)
        small = set(rng.sample(ids, rng.randint(0, len(ids))))
        large = small | set(rng.sample(ids, rng.randint(0, len(ids))))
        check("closure monotone in seed",
              set(victim_closure(e, small).victim_ids) <= set(victim_closure(e, large).victim_ids))
        richer = e.with_profile(AttackerProfile(
            e.profile.capabilities | {FactorKind(t) for t in rng.sample(extra_kinds, rng.randint(1, 3))},
            e.profile.prior_knowledge,
        ))
        check("closure monotone in capabilities",
              set(victim_closure(e).victim_ids) <= set(victim_closure(richer).victim_ids))
        first = victim_closure(e)
        check("closure idempotent", set(victim_closure(e, first.victim_ids).victim_ids) == set(first.victim_ids))
        sound = True
        for target in first.victim_ids:
            sound &= all(replay_chain(e, c) for c in attack_chain(e, target, max_depth=len(e), find_all=True))
        check("chain replay soundness", sound)

        a, b, c = _mask_triples(rng)
        check("mask merge commutative", mask_merge(a, b) == mask_merge(b, a))
        check("mask merge associative", mask_merge(mask_merge(a, b), c) == mask_merge(a, mask_merge(b, c)))
        check("mask merge idempotent", mask_merge(a, a) == a)
        check("mask completeness vs per-index oracle",
              mask_is_complete(mask_merge(a, b)) == all(index_cover([a, b], a.total_length)))

    bad = {k: v for k, v in failures.items() if v}
    verdict(4, f"{len(failures)} properties hold over {PROPERTY_CASES} cases each", not bad, str(bad or ""))


def test_criterion_5_stats_golden(verdict):
    golden = json.loads((GOLDEN / "sample_stats.json").read_text())
    e = load_ecosystem_file(fixture_path("sample.json"))
    r = compute_stats(e)
    got = {
        "account_count": r.account_count,
        "path_count": r.path_count,
        "sms_only": {k: vars(v) for k, v in r.sms_only.items()},
        "factor_usage": dict(r.factor_usage),
        "path_classes": dict(r.path_classes),
        "info_exposure": dict(r.info_exposure),
        "depth_counts": dict(r.depth_counts),
        "depth_percent": dict(r.depth_percent),
        "depth_by_account": {a: dc.cls.value for a, dc in classify_all(e).items()},
    }
    diff = sorted(k for k in golden if golden[k] != got[k])
    verdict(5, "sample statistics match the hand-counted golden file", not diff, ", ".join(diff))


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_6_determinism_and_round_trip(random_corpus, verdict):
    problems = []
    sample = str(fixture_path("sample.json"))
    for argv in (["validate", sample], ["graph", sample], ["graph", sample, "--format", "json"],
                 ["closure", sample, "--seed", "gmail"], ["chain", sample, "--target", "alipay-web", "--all"],
                 ["stats", sample], ["harden", sample, "--target", "alipay-web", "--budget", "2"]):
        runs = {_cli(argv) for _ in range(3)}
        if len(runs) != 1 or next(iter(runs))[0] != 0:
            problems.append(" ".join(argv[:1]))
    named = [load_ecosystem_file(fixture_path(n)) for n in
             ("case1.json", "case2.json", "case3.json", "sample.json", "fortress.json", "couple.json")]
    for e in named + random_corpus[:200]:
        text = dumps_ecosystem(e)
        if load_ecosystem(text) != e or dumps_ecosystem(load_ecosystem(text)) != text:
            problems.append("ecosystem round-trip")
        g = build_tdg(e)
        doc = json.loads(dumps_report(export_json(g, compute_stats(e))))
        if graph_from_json(doc) != g:
            problems.append("graph round-trip")
        (parsed,) = pydot.graph_from_dot_data(export_dot(g))
        nodes = [n for n in parsed.get_nodes() if n.get_name() not in ("node", "edge", "graph")]
        if len(nodes) != len(g.node_ids) or len(parsed.get_edges()) != len(g.strong_edges) + len(g.weak_edges):
            problems.append("dot cardinality")
    verdict(6, "CLI output is byte-stable; JSON round-trips; DOT parses with matching counts", not problems,
            ", ".join(sorted(set(problems))))


def test_criterion_7_hardening(verdict):
    mismatched = []
    for name in ("case1.json", "case2.json", "case3.json", "sample.json", "couple.json",
                 "masked_split.json", "two_layer_full.json", "two_layer_mixed.json", "fortress.json"):
        e = load_ecosystem_file(fixture_path(name))
        for target in e.ids:
            for budget in (1, 2, 3):
                cuts = harden(e, target, budget)
                if cuts and classify_depth(apply_cuts(e, cuts), target) != cuts[-1].after:
                    mismatched.append((name, target, budget))

    rng = random.Random(7)
    within, suboptimal, total = 0, [], 0
    for _ in range(150):
        e = random_ecosystem(rng, max_accounts=6, link_probability=0.1)
        target = rng.choice(e.ids)
        for budget in (1, 2):
            total += 1
            cuts = harden(e, target, budget)
            achieved = classify_depth(apply_cuts(e, cuts), target).cls.rank
            best = exhaustive_harden(e, target, budget)[0].cls.rank
            one_less = exhaustive_harden(e, target, budget - 1)[0].cls.rank if budget > 1 else None
            within += one_less is None or achieved >= one_less
            if achieved < best:
                suboptimal.append((target, budget, achieved, best))
    with_note = f"greedy below exhaustive optimum in {len(suboptimal)}/{total} random instances"
    ok = not mismatched and within == total
    verdict(7, "hardening cuts reproduce reported classes and stay within one budget unit", ok,
            f"{len(mismatched)} replay mismatches; {with_note}")
