"""Account, attacker profile and ecosystem schema; JSON ingestion and checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union

import jsonschema

from .disclosure import (
    LINKED_ACCOUNT,
    Disclosure,
    FactorKind,
    InfoCategory,
    Mask,
    categorize_info,
    parse_factor_kind,
    sort_kinds,
)
from .errors import (
    ActFortError,
    DanglingReference,
    DuplicateAccountId,
    SchemaError,
    UnknownAccount,
)

__all__ = [
    "Account",
    "AttackerProfile",
    "AuthPath",
    "Diagnostic",
    "Ecosystem",
    "PathClass",
    "Platform",
    "Purpose",
    "SMS_CAPABILITIES",
    "categorize_info",
    "classify_auth_path",
    "dump_ecosystem",
    "dump_profile",
    "dumps_ecosystem",
    "load_ecosystem",
    "load_ecosystem_file",
    "load_profile",
    "validate",
]

PHONE = FactorKind("phone-number")
SMS = FactorKind("sms-code")
SMS_CAPABILITIES = frozenset({PHONE, SMS})
LINKED_PATH_PREFIX = "linked:"


class Purpose(str, Enum):
    SIGN_IN = "sign-in"
    PASSWORD_RESET = "password-reset"
    PAYMENT = "payment"


class Platform(str, Enum):
    WEB = "web"
    MOBILE = "mobile"


class PathClass(str, Enum):
    GENERAL = "general"
    INFO = "info"
    UNIQUE = "unique"


@dataclass(frozen=True)
class AuthPath:
    path_id: str
    purpose: Purpose
    factors: frozenset[FactorKind]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError(f"auth path {self.path_id!r} has no factors")


@dataclass(frozen=True)
class Account:
    account_id: str
    display_name: str
    service_domain: str
    platform: Platform
    auth_paths: tuple[AuthPath, ...]
    exposes: frozenset[Disclosure] = frozenset()
    linked_to: frozenset[str] = frozenset()

    def sorted_exposures(self) -> list[Disclosure]:
        return sorted(self.exposes, key=Disclosure.sort_key)

    def exposed_kinds(self) -> frozenset[FactorKind]:
        return frozenset(d.kind for d in self.exposes)


@dataclass(frozen=True)
class AttackerProfile:
    """What the attacker brings before touching any account.

    The default models the SMS-interception attacker: the victim's phone
    number plus every SMS code sent to it.  Random and targeted attacks
    differ only in ``prior_knowledge``.
    """

    capabilities: frozenset[FactorKind] = SMS_CAPABILITIES
    prior_knowledge: frozenset[Disclosure] = frozenset()

    def without_sms(self) -> AttackerProfile:
        return replace(self, capabilities=self.capabilities - SMS_CAPABILITIES)


@dataclass(frozen=True)
class Ecosystem:
    """One victim's accounts plus the attacker profile they are analysed under.

    Accounts are kept sorted by id.  Every account ``p`` listing ``c`` in
    ``linked_to`` gives ``c`` an implicit sign-in path ``{linked-account:p}``;
    :meth:`effective_paths` returns declared and implicit paths together.
    """

    accounts: tuple[Account, ...] = ()
    profile: AttackerProfile = field(default_factory=AttackerProfile)
    _index: dict = field(default=None, init=False, repr=False, compare=False)
    _paths: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        accounts = tuple(sorted(self.accounts, key=lambda a: a.account_id))
        object.__setattr__(self, "accounts", accounts)
        index = {}
        for acc in accounts:
            if acc.account_id in index:
                raise DuplicateAccountId(
                    f"duplicate account id {acc.account_id!r}", f"accounts[{acc.account_id}]"
                )
            index[acc.account_id] = acc
        object.__setattr__(self, "_index", index)
        paths: dict[str, list[AuthPath]] = {a.account_id: list(a.auth_paths) for a in accounts}
        for acc in accounts:
            for child in sorted(acc.linked_to):
                if child in paths:
                    paths[child].append(
                        AuthPath(
                            LINKED_PATH_PREFIX + acc.account_id,
                            Purpose.SIGN_IN,
                            frozenset({FactorKind.linked(acc.account_id)}),
                        )
                    )
        object.__setattr__(self, "_paths", {k: tuple(v) for k, v in paths.items()})

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(self._index)

    def __len__(self) -> int:
        return len(self.accounts)

    def __contains__(self, account_id: object) -> bool:
        return account_id in self._index

    def account(self, account_id: str) -> Account:
        try:
            return self._index[account_id]
        except KeyError:
            raise UnknownAccount(account_id) from None

    def effective_paths(self, account_id: str) -> tuple[AuthPath, ...]:
        self.account(account_id)
        return self._paths[account_id]

    def with_profile(self, profile: AttackerProfile) -> Ecosystem:
        return Ecosystem(self.accounts, profile)

    def with_account(self, account: Account) -> Ecosystem:
        """Return a copy with ``account`` replacing the one sharing its id."""
        self.account(account.account_id)
        rest = [a for a in self.accounts if a.account_id != account.account_id]
        return Ecosystem(tuple(rest) + (account,), self.profile)

    def without_disclosure(self, account_id: str, kind: FactorKind) -> Ecosystem:
        acc = self.account(account_id)
        kept = frozenset(d for d in acc.exposes if d.kind != kind)
        return self.with_account(replace(acc, exposes=kept))


# ---------------------------------------------------------------------------
# loading

@lru_cache(maxsize=1)
def _schema() -> dict:
    text = resources.files("actfort").joinpath("data/ecosystem.schema.json").read_text("utf-8")
    return json.loads(text)


def _locator(path: Iterable[Any]) -> str:
    out = "$"
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def _parse_kind(text: str, where: str) -> FactorKind:
    try:
        return parse_factor_kind(text)
    except ActFortError as exc:
        raise SchemaError(str(exc), where) from None


def _parse_disclosure(raw: Mapping[str, Any], where: str) -> Disclosure:
    kind = _parse_kind(raw["kind"], where + ".kind")
    mask = None
    if "mask" in raw:
        mask = Mask.from_pattern(raw["mask"])
    category = InfoCategory(raw["category"]) if "category" in raw else None
    return Disclosure(kind, mask, category)


def _parse_disclosures(items: list, where: str) -> frozenset[Disclosure]:
    seen: dict[tuple[str, str], Disclosure] = {}
    for n, raw in enumerate(items):
        d = _parse_disclosure(raw, f"{where}[{n}]")
        if d.sort_key() in seen:
            raise SchemaError(f"duplicate disclosure {d.kind} with the same mask", f"{where}[{n}]")
        seen[d.sort_key()] = d
    return frozenset(seen.values())


def load_ecosystem(document: Union[str, bytes, Mapping[str, Any]]) -> Ecosystem:
    """Build an :class:`Ecosystem` from JSON text or an already-decoded mapping.

    Raises :class:`SchemaError` (with a ``line``/JSON-path locator),
    :class:`DanglingReference` or :class:`DuplicateAccountId`.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    else:
        doc = document

    validator = jsonschema.Draft202012Validator(_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise SchemaError(error.message, _locator(error.absolute_path))

    accounts: list[Account] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(doc["accounts"]):
        where = f"$.accounts[{i}]"
        acc_id = raw["id"]
        if acc_id in seen_ids:
            raise DuplicateAccountId(f"duplicate account id {acc_id!r}", where + ".id")
        seen_ids.add(acc_id)
        paths = []
        path_ids: set[str] = set()
        for k, rp in enumerate(raw["auth_paths"]):
            pwhere = f"{where}.auth_paths[{k}]"
            if rp["id"] in path_ids or rp["id"].startswith(LINKED_PATH_PREFIX):
                raise SchemaError(f"path id {rp['id']!r} is duplicated or reserved", pwhere + ".id")
            path_ids.add(rp["id"])
            factors = [_parse_kind(f, f"{pwhere}.factors[{m}]") for m, f in enumerate(rp["factors"])]
            if len(set(factors)) != len(factors):
                raise SchemaError("duplicate factor in path", pwhere + ".factors")
            paths.append(AuthPath(rp["id"], Purpose(rp.get("purpose", "sign-in")), frozenset(factors)))
        linked = raw.get("linked_to", [])
        if acc_id in linked:
            raise SchemaError(f"account {acc_id!r} links to itself", where + ".linked_to")
        if len(set(linked)) != len(linked):
            raise SchemaError("duplicate entry in linked_to", where + ".linked_to")
        accounts.append(
            Account(
                account_id=acc_id,
                display_name=raw.get("name", acc_id),
                service_domain=raw.get("domain", ""),
                platform=Platform(raw.get("platform", "web")),
                auth_paths=tuple(paths),
                exposes=_parse_disclosures(raw.get("exposes", []), where + ".exposes"),
                linked_to=frozenset(linked),
            )
        )

    profile = load_profile(doc.get("attacker_profile"))
    _check_references(accounts, profile, seen_ids)
    return Ecosystem(tuple(accounts), profile)


def load_profile(raw: Optional[Mapping[str, Any]]) -> AttackerProfile:
    """Decode an ``attacker_profile`` object; ``None`` gives the SMS-interception default."""
    if raw is None:
        return AttackerProfile()
    caps = raw.get("capabilities", [str(k) for k in sort_kinds(SMS_CAPABILITIES)])
    return AttackerProfile(
        capabilities=frozenset(
            _parse_kind(c, f"$.attacker_profile.capabilities[{n}]") for n, c in enumerate(caps)
        ),
        prior_knowledge=_parse_disclosures(
            raw.get("prior_knowledge", []), "$.attacker_profile.prior_knowledge"
        ),
    )


def _check_references(accounts: list[Account], profile: AttackerProfile, ids: set[str]) -> None:
    def check(kind: FactorKind, where: str) -> None:
        if kind.tag == LINKED_ACCOUNT and kind.qualifier not in ids:
            raise DanglingReference(f"{kind} names an unknown account", where)

    for i, acc in enumerate(accounts):
        where = f"$.accounts[{i}]"
        for target in sorted(acc.linked_to):
            if target not in ids:
                raise DanglingReference(
                    f"account {acc.account_id!r} links to unknown account {target!r}", where + ".linked_to"
                )
        for k, path in enumerate(acc.auth_paths):
            for kind in sort_kinds(path.factors):
                check(kind, f"{where}.auth_paths[{k}] (account {acc.account_id!r})")
        for d in acc.sorted_exposures():
            check(d.kind, f"{where}.exposes (account {acc.account_id!r})")
    for kind in sort_kinds(profile.capabilities):
        check(kind, "$.attacker_profile.capabilities")
    for d in profile.prior_knowledge:
        check(d.kind, "$.attacker_profile.prior_knowledge")


def load_ecosystem_file(path: Union[str, Path]) -> Ecosystem:
    return load_ecosystem(Path(path).read_text(encoding="utf-8"))


def _dump_disclosure(d: Disclosure) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": str(d.kind)}
    if d.mask is not None:
        out["mask"] = d.mask.to_pattern()
    if d.category is not None:
        out["category"] = d.category.value
    return out


def dump_ecosystem(e: Ecosystem) -> dict[str, Any]:
    """Inverse of :func:`load_ecosystem` for decoded documents."""
    return {
        "accounts": [
            {
                "id": a.account_id,
                "name": a.display_name,
                "domain": a.service_domain,
                "platform": a.platform.value,
                "auth_paths": [
                    {
                        "id": p.path_id,
                        "purpose": p.purpose.value,
                        "factors": [str(k) for k in sort_kinds(p.factors)],
                    }
                    for p in a.auth_paths
                ],
                "exposes": [_dump_disclosure(d) for d in a.sorted_exposures()],
                "linked_to": sorted(a.linked_to),
            }
            for a in e.accounts
        ],
        "attacker_profile": dump_profile(e.profile),
    }


def dump_profile(profile: AttackerProfile) -> dict[str, Any]:
    return {
        "capabilities": [str(k) for k in sort_kinds(profile.capabilities)],
        "prior_knowledge": [
            _dump_disclosure(d) for d in sorted(profile.prior_knowledge, key=Disclosure.sort_key)
        ],
    }


def dumps_ecosystem(e: Ecosystem) -> str:
    return json.dumps(dump_ecosystem(e), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# classification and diagnostics

GENERAL_FACTORS = frozenset(
    FactorKind(t)
    for t in ("phone-number", "sms-code", "email-address", "email-code", "password", "user-id")
)
UNIQUE_TAGS = frozenset({"biometric", "payment-password", "custom-service"})


def classify_auth_path(p: AuthPath) -> PathClass:
    """Split paths into general, info and unique; unique > info > general."""
    if any(k.tag in UNIQUE_TAGS for k in p.factors):
        return PathClass.UNIQUE
    if p.factors <= GENERAL_FACTORS:
        return PathClass.GENERAL
    return PathClass.INFO


@dataclass(frozen=True, order=True)
class Diagnostic:
    account_id: str
    code: str
    message: str
    severity: str = "warning"

    def __str__(self) -> str:
        return f"{self.severity}: {self.account_id}: [{self.code}] {self.message}"


_IDENTITY_CREDENTIALS = frozenset({FactorKind("citizen-id"), FactorKind("bankcard-number")})


def validate(e: Ecosystem) -> list[Diagnostic]:
    """Warnings about risky account configurations, sorted by account id then code.

    * ``sms-only-recovery``: every path of the account needs an SMS code.
    * ``exposes-identity-credential``: a complete citizen ID or bankcard number
      is shown after log-in.
    * ``platform-asymmetry``: a web and a mobile account share a display name
      but accept different factor sets.
    """
    out: list[Diagnostic] = []
    for acc in e.accounts:
        if all(SMS in p.factors for p in acc.auth_paths):
            out.append(Diagnostic(acc.account_id, "sms-only-recovery", "no SMS-free authentication path"))
        for d in acc.sorted_exposures():
            if d.complete and d.kind in _IDENTITY_CREDENTIALS:
                out.append(
                    Diagnostic(
                        acc.account_id,
                        "exposes-identity-credential",
                        f"exposes identity credential usable elsewhere: complete {d.kind}",
                    )
                )
    by_name: dict[str, list[Account]] = {}
    for acc in e.accounts:
        by_name.setdefault(acc.display_name, []).append(acc)
    for group in by_name.values():
        for a in group:
            for b in group:
                if a.platform == b.platform or a is b:
                    continue
                fa = {p.factors for p in a.auth_paths}
                fb = {p.factors for p in b.auth_paths}
                if fa != fb:
                    out.append(
                        Diagnostic(
                            a.account_id,
                            "platform-asymmetry",
                            f"{a.platform.value} and {b.platform.value} ({b.account_id}) "
                            "accept different factor sets",
                        )
                    )
    return sorted(set(out))
