"""Exception hierarchy shared by every actfort module."""

from __future__ import annotations


class ActFortError(Exception):
    """Base class for all errors raised by actfort."""


class UnknownFactorKind(ActFortError, ValueError):
    pass


class MissingQualifier(ActFortError, ValueError):
    pass


class LengthMismatch(ActFortError, ValueError):
    """Two masks of different total length cannot describe the same value."""


class SchemaError(ActFortError, ValueError):
    """Malformed ecosystem document.

    ``location`` is a JSON path such as ``accounts[1].auth_paths[0].factors``
    or a ``line N, column M`` locator for syntax errors.
    """

    def __init__(self, message: str, location: str = "$") -> None:
        super().__init__(f"{location}: {message}")
        self.location = location


class DanglingReference(SchemaError):
    pass


class DuplicateAccountId(SchemaError):
    pass


class UnknownAccount(ActFortError, KeyError):
    def __init__(self, account_id: str) -> None:
        super().__init__(account_id)
        self.account_id = account_id

    def __str__(self) -> str:
        return f"unknown account {self.account_id!r}"


class NoChainFound(ActFortError):
    """The target cannot be reached under the attacker profile."""

    def __init__(self, target: str) -> None:
        super().__init__(f"no chain under attacker profile reaches {target!r}")
        self.target = target


class EmptyEcosystem(ActFortError, ValueError):
    pass
