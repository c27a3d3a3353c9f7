from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass
class CheckReport:
    """Outcome of an exhaustive verification: pass, or the first counterexample found."""

    name: str
    passed: bool
    counterexample: Any = None
    detail: str = ""
    stats: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}{extra}"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"check": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if self.stats:
            out["stats"] = self.stats
        if self.counterexample is not None:
            out["counterexample"] = repr(self.counterexample)
        return out


def iter_bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def first_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1
