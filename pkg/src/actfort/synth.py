"""Random ecosystems for experiments and randomized testing."""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .disclosure import Disclosure, FactorKind, Mask
from .ecosystem import Account, AttackerProfile, AuthPath, Ecosystem, Platform, Purpose

# ten of the most common factors and exposures
DEFAULT_VOCABULARY: tuple[str, ...] = (
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
)
MASKABLE = frozenset({"citizen-id", "bankcard-number"})


def random_mask(rng: random.Random, length: int) -> Mask:
    start = rng.randrange(length)
    end = rng.randrange(start + 1, length + 1)
    return Mask.from_intervals(length, [(start, end)])


def random_ecosystem(
    rng: random.Random,
    n_accounts: Optional[int] = None,
    max_accounts: int = 8,
    max_paths: int = 3,
    max_factors: int = 4,
    vocabulary: Sequence[str] = DEFAULT_VOCABULARY,
    mask_probability: float = 0.3,
    mask_length: int = 4,
    link_probability: float = 0.05,
    capabilities: Optional[Sequence[str]] = None,
    prior_probability: float = 0.0,
) -> Ecosystem:
    """Draw an ecosystem; pass ``n_accounts`` to fix its size.

    Maskable kinds are exposed under a random single-interval mask with
    ``mask_probability``, so some values only complete after merging.
    """
    n = n_accounts if n_accounts is not None else rng.randint(1, max_accounts)
    ids = [f"a{i}" for i in range(n)]
    accounts = []
    for acc_id in ids:
        paths = []
        for k in range(rng.randint(1, max_paths)):
            size = rng.randint(1, min(max_factors, len(vocabulary)))
            factors = frozenset(FactorKind(t) for t in rng.sample(list(vocabulary), size))
            paths.append(AuthPath(f"p{k}", rng.choice(list(Purpose)), factors))
        exposes = set()
        for tag in rng.sample(list(vocabulary), rng.randint(0, len(vocabulary) // 2)):
            mask = None
            if tag in MASKABLE and rng.random() < mask_probability:
                mask = random_mask(rng, mask_length)
            exposes.add(Disclosure(FactorKind(tag), mask))
        linked = frozenset(o for o in ids if o != acc_id and rng.random() < link_probability)
        accounts.append(
            Account(
                acc_id,
                acc_id.upper(),
                rng.choice(["email", "fintech", "social", "travel"]),
                rng.choice(list(Platform)),
                tuple(paths),
                frozenset(exposes),
                linked,
            )
        )
    if capabilities is None:
        caps = frozenset({FactorKind("phone-number"), FactorKind("sms-code")})
    else:
        caps = frozenset(FactorKind(t) for t in capabilities)
    prior = set()
    for tag in sorted(MASKABLE & set(vocabulary)):
        if rng.random() < prior_probability:
            prior.add(Disclosure(FactorKind(tag), random_mask(rng, mask_length)))
    return Ecosystem(tuple(accounts), AttackerProfile(caps, frozenset(prior)))
