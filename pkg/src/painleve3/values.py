"""Return type shared by the asymptotic approximations."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ApproxValue:
    value: complex
    regime: str
    carveout: float = float("inf")
    flagged: bool = False

    def __complex__(self):
        return complex(self.value)
