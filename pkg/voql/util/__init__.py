"""
util
====

Subpackage for utility functions.

Modules
-------
print_color
    Module for printing colored status lines to the terminal.
"""

from .print_color import Color, print_color, print_verdict

__all__ = ["Color", "print_color", "print_verdict"]
