"""
Module for providing a repository for managing trained networks stored in JSON model files.
"""

import logging
from pathlib import Path

import orjson
from pydantic import ValidationError

from pump_monitor.core.exceptions import MissingFileError, ModelFileError
from pump_monitor.nn.network import ConvNet
from pump_monitor.schemas.network import ModelDocumentSchema

logger = logging.getLogger()


class ModelRepo:
    """
    Repository for managing trained networks stored in JSON model files.
    """

    def load(self, path: Path) -> ConvNet:
        """
        Load a network from a model file.

        :param path: Path of the model file.
        :return: Loaded network in inference mode.
        :raises MissingFileError: If the file does not exist.
        :raises ModelFileError: If the file is not a valid model document.
        :raises StructuralError: If the layers do not match the topology.
        """
        path = Path(path)
        if not path.is_file():
            raise MissingFileError(f"Model file '{path}' does not exist")

        logger.info("Loading model from '%s'", path)
        try:
            document = ModelDocumentSchema.model_validate(orjson.loads(path.read_bytes()))
        except orjson.JSONDecodeError as exc:
            raise ModelFileError(f"Model file '{path}' is not valid JSON: {exc}") from exc
        except ValidationError as exc:
            raise ModelFileError(f"Model file '{path}' is not a valid model document: {exc}") from exc
        return document.to_network()

    def save(self, network: ConvNet, path: Path) -> None:
        """
        Save a network to a model file, replacing any existing file.

        :param network: Network to save.
        :param path: Path of the model file.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        logger.info("Saving %s model to '%s'", network.config.algorithm, path)
        document = ModelDocumentSchema.from_network(network)
        path.write_bytes(orjson.dumps(document.model_dump(mode="json")) + b"\n")
