"""Structured slack reports for inequality verification.

Every verifier returns a report rather than a bare boolean so that
near-violations caused by discretization stay distinguishable from genuine
violations.  A check is declared violated only when its slack drops below
minus the discretization budget.
"""

from dataclasses import dataclass, field, asdict


def discretization_budget(h: float, alpha: float, scale: float = 1.0) -> float:
    """Truncation allowance for checks that route through the discrete
    fractional operators: one power of h^(2-alpha), scaled to the data."""
    return max(scale, 1.0) * h ** (2.0 - alpha)


BISECTION_BUDGET_REL = 1e-6  # slack allowance for checks exact up to norm bisection


@dataclass
class InequalityCheck:
    """One verified inequality lhs <= rhs with its slack = rhs - lhs."""

    name: str
    lhs: float
    rhs: float
    budget: float = 0.0
    note: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.slack >= -self.budget

    def row(self) -> dict:
        d = asdict(self)
        d["slack"] = self.slack
        d["ok"] = self.ok
        return d


@dataclass
class BracketReport:
    """Two-sided bracket lower <= value <= upper (modular-norm relations)."""

    name: str
    gauge: float            # the Luxemburg-type norm entering the bracket
    modular: float          # the modular being bracketed
    branch: str             # 'gt1' | 'lt1' | 'unit' | 'zero'
    lower: float
    upper: float
    budget: float = 0.0

    @property
    def slack_lower(self) -> float:
        return self.modular - self.lower

    @property
    def slack_upper(self) -> float:
        return self.upper - self.modular

    @property
    def ok(self) -> bool:
        return self.slack_lower >= -self.budget and self.slack_upper >= -self.budget

    def row(self) -> dict:
        d = asdict(self)
        d["slack_lower"] = self.slack_lower
        d["slack_upper"] = self.slack_upper
        d["ok"] = self.ok
        return d


@dataclass
class CheckSet:
    """A named bundle of checks with a single pass/fail verdict."""

    name: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, check) -> None:
        self.checks.append(check)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def worst_slack(self) -> float:
        slacks = []
        for c in self.checks:
            if hasattr(c, "slack"):
                slacks.append(c.slack)
            else:
                slacks.extend([c.slack_lower, c.slack_upper])
        return min(slacks) if slacks else 0.0
