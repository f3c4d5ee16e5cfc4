"""
print_color.py
==============

Module for printing colored status lines to the terminal.

All console output of the package goes through this module, and only when
the caller asked for it with a `verbose` flag.
"""

from enum import Enum


class Color(Enum):
    """
    Enum for terminal colors.
    """

    RESET = "\033[0m"
    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    BLUE = "\033[34m"
    MAGENTA = "\033[35m"
    CYAN = "\033[36m"

    def __str__(self) -> str:
        """
        Return the name of the color.
        """
        return self.name


def print_color(s: str, c: Color = Color.GREEN, verbose: bool = True) -> None:
    """
    Print a string in color, if verbose.
    """
    if verbose:
        print(c.value + s + Color.RESET.value)


def print_verdict(
    name: str, violations: int, total: int, budget: float, verbose: bool = True
) -> bool:
    """
    Print a one-line pass/fail verdict for an audit and return whether the
    violation rate is within budget.
    """
    rate = violations / total if total > 0 else 0.0
    ok = rate <= budget
    c = Color.GREEN if ok else Color.RED
    print_color(
        f"{name:<24} {violations:>8} / {total:<8} rate {rate:.4f} "
        + f"(budget {budget:.4f})",
        c,
        verbose=verbose,
    )
    return ok
