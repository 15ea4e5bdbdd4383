"""
Module for providing a repository for managing datasets stored in NDJSON files.
"""

import logging
from pathlib import Path

import orjson
from pydantic import ValidationError

from pump_monitor.core.exceptions import DatasetParseError, DatasetSchemaError, MissingFileError
from pump_monitor.models.sample import PumpDataset, VibrationSample
from pump_monitor.schemas.dataset import SampleRecordSchema

logger = logging.getLogger()


class DatasetRepo:
    """
    Repository for managing datasets stored in NDJSON files (one sample per line).
    """

    def load(self, path: Path) -> PumpDataset:
        """
        Load a dataset from a file.

        Blank lines are ignored, so an empty file yields an empty dataset.

        :param path: Path of the dataset file.
        :return: Loaded dataset with the path as its provenance.
        :raises MissingFileError: If the file does not exist.
        :raises DatasetParseError: If a line is not a JSON object.
        :raises DatasetSchemaError: If a line does not describe a valid sample.
        """
        path = Path(path)
        if not path.is_file():
            raise MissingFileError(f"Dataset file '{path}' does not exist")

        logger.info("Loading dataset from '%s'", path)
        pumps: dict[str, list[VibrationSample]] = {}
        with path.open("rb") as file:
            for line_number, line in enumerate(file, start=1):
                if not line.strip():
                    continue
                try:
                    document = orjson.loads(line)
                except orjson.JSONDecodeError as exc:
                    raise DatasetParseError(f"Line {line_number} of '{path}' is not valid JSON: {exc}") from exc
                if not isinstance(document, dict):
                    raise DatasetParseError(f"Line {line_number} of '{path}' is not a JSON object")

                try:
                    sample = SampleRecordSchema.model_validate(document).to_sample()
                except ValidationError as exc:
                    raise DatasetSchemaError(
                        f"Line {line_number} of '{path}' (pump '{document.get('pump_id')}') is not a valid sample: "
                        f"{exc}"
                    ) from exc
                pumps.setdefault(sample.pump_id, []).append(sample)

        dataset = PumpDataset(pumps=pumps, provenance=str(path))
        logger.info("Loaded %d samples of %d pumps", len(dataset), len(dataset.pumps))
        return dataset

    def save(self, dataset: PumpDataset, path: Path) -> None:
        """
        Save a dataset to a file, replacing any existing file.

        Samples are written pump by pump in stored order with the numbers in their shortest round-trip form.

        :param dataset: Dataset to save.
        :param path: Path of the dataset file.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        logger.info("Saving %d samples of %d pumps to '%s'", len(dataset), len(dataset.pumps), path)
        with path.open("wb") as file:
            for sample in dataset.samples():
                file.write(orjson.dumps(SampleRecordSchema.from_sample(sample).model_dump()))
                file.write(b"\n")
