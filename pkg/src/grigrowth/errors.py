from __future__ import annotations


class BudgetExceeded(RuntimeError):
    """An exhaustive search outgrew its caller-supplied budget."""

    def __init__(self, what: str, budget: int) -> None:
        super().__init__(f"budget_exceeded: {what} passed {budget}")
        self.what = what
        self.budget = budget
