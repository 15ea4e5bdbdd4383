"""
Module for defining custom numpy array data type classes used by Pydantic models.
"""

from typing import Any

import numpy as np
from pydantic import GetCoreSchemaHandler
from pydantic_core import CoreSchema, core_schema


class FloatArrayField(np.ndarray):
    """
    Custom data type for handling real valued numpy arrays.

    Accepts any array-like of numbers and stores it as a read-only `float64` array that must only contain finite
    values.
    """

    @classmethod
    def __get_pydantic_core_schema__(cls, _source_type: Any, _handler: GetCoreSchemaHandler) -> CoreSchema:
        return core_schema.with_info_plain_validator_function(
            cls.validate, serialization=core_schema.plain_serializer_function_ser_schema(cls.serialize)
        )

    @classmethod
    def validate(cls, value: Any, _: core_schema.ValidationInfo) -> np.ndarray:
        """
        Convert the value to a read-only `float64` array.

        :param value: The array-like value to be validated.
        :param _: Unused
        :return: The validated array.
        :raises ValueError: If the value is not numeric or contains non-finite entries.
        """
        try:
            array = np.array(value, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ValueError("Value must be an array of real numbers") from exc
        if not np.all(np.isfinite(array)):
            raise ValueError("Array must only contain finite values")
        array.setflags(write=False)
        return array

    @classmethod
    def serialize(cls, value: np.ndarray) -> list:
        """
        Convert the array into nested lists of Python floats.

        :param value: The array to be converted.
        :return: The converted array.
        """
        return value.tolist()
