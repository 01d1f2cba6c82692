"""Shared value types: the spin label and the domain error."""

from __future__ import annotations

from dataclasses import dataclass


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


@dataclass(frozen=True, order=True)
class Spin:
    """Spin j stored as the integer 2j so half-integers stay exact."""

    twice_j: int

    def __post_init__(self):
        if isinstance(self.twice_j, bool) or not isinstance(self.twice_j, int):
            raise DomainError(f"twice_j must be an int, got {self.twice_j!r}")
        if self.twice_j < 0:
            raise DomainError(f"twice_j must be >= 0, got {self.twice_j}")

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    @property
    def bose_fermi_index(self) -> int:
        """0 for integer spin, 1 for half-integer spin."""
        return self.twice_j % 2

    @property
    def is_integer(self) -> bool:
        return self.twice_j % 2 == 0

    def lowered(self) -> "Spin":
        """Spin j - 1."""
        if self.twice_j < 2:
            raise DomainError("spin j - 1 is negative")
        return Spin(self.twice_j - 2)

    def __str__(self):
        if self.twice_j % 2:
            return f"{self.twice_j}/2"
        return str(self.twice_j // 2)


def as_spin(spin) -> Spin:
    """Accept either a Spin or a plain twice-j integer."""
    if isinstance(spin, Spin):
        return spin
    return Spin(spin)


def central_difference(f, x: float, h: float):
    """(f(x+h) - f(x-h)) / 2h; works for scalar or array-valued f."""
    if not h > 0:
        raise DomainError("step h must be positive")
    return (f(x + h) - f(x - h)) / (2 * h)
