"""
Module for the overall configuration for the application.
"""

from pathlib import Path
from typing import Any, List, Optional

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from pump_monitor.core.exceptions import ConfigError
from pump_monitor.models.evaluation import DseGrid
from pump_monitor.models.network import ModelConfig, TrainHyper
from pump_monitor.models.profile import SelectionPolicy
from pump_monitor.models.sample import SyntheticSpec


class EvaluationConfig(BaseModel):
    """
    Configuration model for the evaluation pipelines.
    """

    # Fraction of a held-out pump's normal samples used for adaptation
    adapt_fraction: float = Field(default=0.5, gt=0.0, le=1.0)
    # Fraction of each pump's samples placed in the test set of the fixed split
    test_ratio: float = Field(default=0.2, gt=0.0, lt=1.0)
    jobs: int = Field(default=1, ge=1)
    # Pumps to run folds for (all evaluable pumps when unset)
    pumps: Optional[List[str]] = None
    # Range the ECNN training factor is drawn from (log-uniformly)
    train_factor_min: float = Field(default=0.01, gt=0.0)
    train_factor_max: float = Field(default=100.0, gt=0.0)
    # Samples per training pump used when searching the global parameter of the fixed policy
    fixed_samples_per_pump: int = Field(default=20, ge=1)
    # Factor used to build ECNN test inputs during design space exploration
    dse_factor: float = Field(default=1.0, gt=0.0)


class Config(BaseSettings):
    """
    Overall configuration model for the application.

    It includes sections for the synthetic dataset, the network topology, training, parameter selection, design space
    exploration and evaluation. The class inherits from `BaseSettings` and automatically reads environment variables
    prefixed with `PUMP_MONITOR_`. If values are not passed in form of system environment variables at runtime, it
    will attempt to read them from the .env file (or the file passed with `--config`).
    """

    seed: int = 0
    synthetic: SyntheticSpec = SyntheticSpec()
    network: ModelConfig = ModelConfig()
    training: TrainHyper = TrainHyper()
    selection: SelectionPolicy = SelectionPolicy()
    dse: DseGrid = DseGrid()
    evaluation: EvaluationConfig = EvaluationConfig()

    model_config = SettingsConfigDict(
        env_prefix="PUMP_MONITOR_",
        env_file=Path(__file__).parent.parent / ".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        hide_input_in_errors=True,
    )


def load_config(config_file: Optional[Path] = None, overrides: Optional[dict[str, Any]] = None) -> Config:
    """
    Build the effective configuration.

    Values are taken (in increasing order of precedence) from the defaults, the dotenv style config file, the
    environment and finally the given overrides (e.g. command line flags). Nested override sections are merged with the
    values of the other sources rather than replacing them.

    :param config_file: Optional path of a dotenv style `KEY=value` config file.
    :param overrides: Optional nested dictionary of values that take precedence over all other sources.
    :return: The configuration.
    :raises ConfigError: If the config file does not exist or any value is invalid.
    """
    overrides = overrides or {}
    env_file = Config.model_config["env_file"]
    if config_file is not None:
        if not Path(config_file).is_file():
            raise ConfigError(f"Config file '{config_file}' does not exist")
        env_file = config_file

    try:
        config = Config(_env_file=env_file, **overrides)
    except ValidationError as exc:
        raise ConfigError(f"Invalid configuration: {exc}") from exc

    # The global seed flows into every section that draws random numbers
    return config.model_copy(
        update={
            "synthetic": config.synthetic.model_copy(update={"seed": config.seed}),
            "training": config.training.model_copy(update={"seed": config.seed}),
        }
    )
