"""
Module for providing a repository for managing pump profiles stored in JSON files.
"""

import logging
from pathlib import Path

from pydantic import ValidationError

from pump_monitor.core.exceptions import MissingFileError, ModelFileError
from pump_monitor.models.profile import PumpProfile

logger = logging.getLogger()


class ProfileRepo:
    """
    Repository for managing pump profiles stored in JSON files.
    """

    def load(self, path: Path) -> PumpProfile:
        """
        Load a pump profile.

        :param path: Path of the profile file.
        :return: Loaded profile.
        :raises MissingFileError: If the file does not exist.
        :raises ModelFileError: If the file is not a valid profile.
        """
        path = Path(path)
        if not path.is_file():
            raise MissingFileError(f"Profile file '{path}' does not exist")
        try:
            return PumpProfile.model_validate_json(path.read_bytes())
        except ValidationError as exc:
            raise ModelFileError(f"Profile file '{path}' is not a valid pump profile: {exc}") from exc

    def save(self, profile: PumpProfile, path: Path) -> None:
        """
        Save a pump profile, replacing any existing file.

        :param profile: Profile to save.
        :param path: Path of the profile file.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        logger.info("Saving the profile of pump '%s' to '%s'", profile.pump_id, path)
        path.write_text(profile.model_dump_json(indent=2) + "\n", encoding="utf-8")
