"""
learner_exceptions.py
=====================

Module containing exceptions for the learner subpackage.
"""


class EpisodeError(Exception):
    """Exception raised if an episode of a run fails"""

    def __init__(self, episode: int, cause: BaseException | str = "") -> None:
        msg = f"episode {episode}: {cause}"
        super().__init__(msg)
        self.message = msg
        self.episode = episode
        self.cause = cause


class ScheduleError(Exception):
    """Exception raised if a confidence-radius schedule decreases in t"""

    def __init__(self, msg: str = "") -> None:
        super().__init__(msg)
        self.message = msg
