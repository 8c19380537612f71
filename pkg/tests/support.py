"""Shared paths and corpus helpers for the test modules."""

import random
from pathlib import Path

from actfort import sample_path
from actfort.synth import random_ecosystem

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def fixture_path(name: str) -> Path:
    local = FIXTURES / name
    return local if local.exists() else sample_path(name)


def corpus(n: int, seed: int, **kw):
    """``n`` random ecosystems with at most 8 accounts, 3 paths, 4 factors per path."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        caps = rng.choice([None, None, ["sms-code"], [], ["phone-number", "sms-code", "email-code"]])
        out.append(random_ecosystem(rng, capabilities=caps, prior_probability=0.15, **kw))
    return out
