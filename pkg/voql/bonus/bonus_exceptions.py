"""
bonus_exceptions.py
===================

Module containing exceptions for the bonus subpackage.
"""


class BonusError(Exception):
    """Exception raised if a bonus cannot be built from its inputs"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg
