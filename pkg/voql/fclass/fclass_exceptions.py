"""
fclass_exceptions.py
====================

Module containing exceptions for the fclass subpackage.
"""


class EmptyClassError(Exception):
    """Exception raised if a function class has no members"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg


class SizeMismatchError(Exception):
    """Exception raised if data, targets and weights disagree in length"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg


class CoverSizeError(Exception):
    """Exception raised if a linear cover exceeds the configured member cap"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg
