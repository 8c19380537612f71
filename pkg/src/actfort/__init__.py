"""Account-takeover chain analysis over an ecosystem of online accounts.

Load an ecosystem document, build its transformation dependency graph and
ask which accounts fall from a seed set or how a target can be reached::

    from actfort import load_ecosystem_file, attack_chain

    e = load_ecosystem_file("case3.json")
    print(attack_chain(e, "alipay")[0])   # ctrip -> alipay
"""

from importlib import resources as _resources
from pathlib import Path as _Path

from .disclosure import (
    Disclosure,
    FactorKind,
    InfoCategory,
    Mask,
    categorize_info,
    mask_is_complete,
    mask_merge,
    parse_factor_kind,
)
from .ecosystem import (
    Account,
    AttackerProfile,
    AuthPath,
    Diagnostic,
    Ecosystem,
    PathClass,
    Platform,
    Purpose,
    classify_auth_path,
    dump_ecosystem,
    dumps_ecosystem,
    load_ecosystem,
    load_ecosystem_file,
    validate,
)
from .errors import (
    ActFortError,
    DanglingReference,
    DuplicateAccountId,
    EmptyEcosystem,
    LengthMismatch,
    MissingQualifier,
    NoChainFound,
    SchemaError,
    UnknownAccount,
    UnknownFactorKind,
)
from .reporting import (
    StatsReport,
    closure_from_json,
    compute_stats,
    export_dot,
    export_json,
    graph_from_json,
    stats_from_json,
)
from .strategy import (
    AttackChain,
    ClosureResult,
    Cut,
    Depth,
    DepthClass,
    KnowledgeBase,
    apply_cuts,
    attack_chain,
    classify_all,
    classify_depth,
    dependency_relations,
    exhaustive_harden,
    harden,
    replay_chain,
    victim_closure,
)
from .tdg import (
    CoupleGroup,
    FactorEdge,
    StrongEdge,
    TransformationDependencyGraph,
    build_factor_edges,
    build_tdg,
    couple_groups,
    effective_disclosures,
    full_capacity_parents,
    path_satisfied,
)

__version__ = "0.1.0"


def sample_path(name: str) -> _Path:
    """Filesystem path of a bundled ecosystem document such as ``"case2.json"``."""
    return _Path(str(_resources.files(__name__).joinpath("data", name)))
