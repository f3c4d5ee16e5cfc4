"""
env_exceptions.py
=================

Module containing exceptions for the env subpackage.
"""


class InvalidMdpError(Exception):
    """Exception raised if an EpisodicMdp violates a structural invariant"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg


class FeatureError(Exception):
    """Exception raised if linear features are missing or inconsistent"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg


class GeneratorError(Exception):
    """Exception raised if generator arguments describe no valid instance"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg
