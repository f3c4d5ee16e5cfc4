"""
harness_exceptions.py
=====================

Module containing exceptions for the harness subpackage.
"""


class ConfigError(Exception):
    """Exception raised if an experiment configuration is invalid"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg
