from pydantic import Field

from .base import ReportModel


class CheckResult(ReportModel):
    """
    The outcome of a single verification check.

    :ivar name: The name of the check.
    :ivar description: What the check compares.
    :ivar passed: Whether the check passed.
    :ivar value: The worst value observed, if the check measures one.
    :ivar limit: The accepted range of the value, as text.
    :ivar seconds: The time the check took.
    :ivar detail: Additional information, or the error that stopped the check.
    """

    name: str
    description: str
    passed: bool
    value: float | None = None
    limit: str | None = None
    seconds: float = Field(0, ge=0)
    detail: str | None = None


class VerifyReport(ReportModel):
    precision_bits: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        """True if every check passed."""
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]
