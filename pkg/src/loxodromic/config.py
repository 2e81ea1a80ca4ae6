"""Resource budgets shared by the engines and the CLI."""
from dataclasses import dataclass

from .fields import DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIGITS
from .intersect import DEFAULT_WINDOW_BUDGET


@dataclass(frozen=True)
class Limits:
    max_digits: int = DEFAULT_MAX_DIGITS  # decimal digits of a rational coordinate
    max_degree: int = DEFAULT_MAX_DEGREE  # degree of an F_q(t) coordinate
    max_window: int = DEFAULT_WINDOW_BUDGET  # indices in an intersection window

    def __post_init__(self):
        for name in ("max_digits", "max_degree", "max_window"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def as_kwargs(self) -> dict:
        return {"max_digits": self.max_digits, "max_degree": self.max_degree}
