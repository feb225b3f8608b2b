"""Shared result type for the library's law-checking sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of an exhaustive check: what ran, how much, and what broke."""

    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        line = f"{status} {self.name} (checked {self.checked})"
        if self.failures:
            line += f" first failure: {self.failures[0]}"
        return line
