"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MorphplanError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(MorphplanError):
    """An interchange document violates its schema.

    The message names the offending path inside the document.
    """


class InvalidConfigurationError(MorphplanError):
    """An operation received a configuration that fails validation."""

    def __init__(self, message: str, findings: list[str] | None = None):
        super().__init__(message)
        self.findings = list(findings or [])


class DeltaApplyError(MorphplanError):
    """A delta or change operation is not applicable to the configuration."""


class InstanceError(MorphplanError):
    """A multiple-choice knapsack instance is malformed or exceeds solver limits."""


class PlanError(MorphplanError):
    """A planning stage cannot run against its input configuration."""

    def __init__(self, stage_id: str, message: str):
        super().__init__(f"{stage_id}: {message}")
        self.stage_id = stage_id
        self.reason = message
