"""Verdict records emitted by checkers and scenarios."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a check: a boolean verdict plus supporting numbers.

    residual is the worst measured deviation (None when not applicable);
    witness carries a concrete counterexample for failed checks; metrics
    holds named scalars/flags for the report payload.
    """

    verdict: bool
    residual: float | None = None
    witness: dict | None = None
    metrics: dict = field(default_factory=dict)

    def to_data(self) -> dict:
        out: dict = {"verdict": bool(self.verdict)}
        out["residual"] = None if self.residual is None else float(self.residual)
        if self.witness is not None:
            out["witness"] = self.witness
        if self.metrics:
            out["metrics"] = self.metrics
        return out
