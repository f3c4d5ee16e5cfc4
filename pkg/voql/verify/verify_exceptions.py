"""
verify_exceptions.py
====================

Module containing exceptions for the verify subpackage.
"""


class MissingLogError(Exception):
    """Exception raised if a run log lacks what an audit needs"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg
