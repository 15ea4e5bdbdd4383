"""
Module defining the command line interface of the pump monitor.

Progress and errors are logged to standard error, summaries are printed to standard output and artifacts are written
to the given files. Exit codes: 0 on success, 2 on usage errors and 1 on runtime errors.
"""

import argparse
import logging
import sys
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Optional

from pump_monitor.core.config import Config, load_config
from pump_monitor.core.exceptions import BasePumpMonitorError
from pump_monitor.core.logger_setup import setup_logger
from pump_monitor.models.evaluation import Algorithm, CrossValidationPlan
from pump_monitor.models.profile import Detector, SelectionKind
from pump_monitor.repositories.dataset import DatasetRepo
from pump_monitor.repositories.model import ModelRepo
from pump_monitor.repositories.profile import ProfileRepo
from pump_monitor.services.adaptation import AdaptationService
from pump_monitor.services.crossval import CrossValidationService
from pump_monitor.services.dataset import DatasetService
from pump_monitor.services.exploration import ExplorationService
from pump_monitor.services.training import TrainingService
from pump_monitor.stores.results import ResultsStore

logger = logging.getLogger()


def _set(overrides: dict[str, Any], section: str, key: str, value: Any) -> None:
    """Add a flag value to the config overrides unless the flag was not given."""
    if value is not None:
        overrides.setdefault(section, {})[key] = value


def add_network_args(parser: argparse.ArgumentParser) -> None:
    """Adds common arguments for the network topology and its training."""
    parser.add_argument("--depth", type=int, default=None, help="Number of convolutional layers")
    parser.add_argument("--kernel", type=int, default=None, help="Kernel size (odd)")
    parser.add_argument("--channels", type=int, default=None, help="Channels between the convolutional layers")
    add_training_args(parser)


def add_training_args(parser: argparse.ArgumentParser) -> None:
    """Adds common arguments for the training hyperparameters."""
    parser.add_argument("--epochs", type=int, default=None, help="Number of training epochs")
    parser.add_argument("--learning-rate", type=float, default=None, help="Adam learning rate")
    parser.add_argument("--batch-size", type=int, default=None, help="Mini-batch size")


def network_overrides(args: argparse.Namespace, overrides: dict[str, Any]) -> None:
    """Adds the values of the arguments defined in `add_network_args` to the config overrides."""
    _set(overrides, "network", "depth", args.depth)
    _set(overrides, "network", "kernel", args.kernel)
    _set(overrides, "network", "channels", args.channels)
    training_overrides(args, overrides)


def training_overrides(args: argparse.Namespace, overrides: dict[str, Any]) -> None:
    """Adds the values of the arguments defined in `add_training_args` to the config overrides."""
    _set(overrides, "training", "epochs", args.epochs)
    _set(overrides, "training", "learning_rate", args.learning_rate)
    _set(overrides, "training", "batch_size", args.batch_size)


class SubCommand(ABC):
    """Base class for a sub command."""

    def __init__(self, help_message: str):
        self.help_message = help_message

    @abstractmethod
    def setup(self, parser: argparse.ArgumentParser):
        """Setup the parser by adding any parameters here."""

    def overrides(self, args: argparse.Namespace) -> dict[str, Any]:
        """Return the config values given by the parameters added in 'setup'."""
        return {}

    @abstractmethod
    def run(self, args: argparse.Namespace, config: Config):
        """Run the command with the given parameters as added by 'setup' and the effective config."""


class CommandGenerate(SubCommand):
    """Command to generate a synthetic dataset."""

    def __init__(self):
        super().__init__(help_message="Generates a synthetic vibration dataset")

    def setup(self, parser: argparse.ArgumentParser):
        parser.add_argument("-o", "--output", type=Path, required=True, help="Path of the dataset file to write")
        parser.add_argument("--pumps", type=int, default=None, help="Number of pumps")
        parser.add_argument("--samples", type=int, default=None, help="Number of samples per pump")
        parser.add_argument("--abnormal-fraction", type=float, default=None, help="Fraction of abnormal samples")
        parser.add_argument("--severity", type=float, default=None, help="Amplitude multiplier of abnormal samples")
        parser.add_argument("--noise-level", type=float, default=None, help="Noise relative to the pump amplitude")

    def overrides(self, args: argparse.Namespace) -> dict[str, Any]:
        overrides: dict[str, Any] = {}
        _set(overrides, "synthetic", "n_pumps", args.pumps)
        _set(overrides, "synthetic", "samples_per_pump", args.samples)
        _set(overrides, "synthetic", "abnormal_fraction", args.abnormal_fraction)
        _set(overrides, "synthetic", "severity", args.severity)
        _set(overrides, "synthetic", "noise_level", args.noise_level)
        return overrides

    def run(self, args: argparse.Namespace, config: Config):
        summary = DatasetService(DatasetRepo()).generate(config.synthetic, args.output)
        print(
            f"Generated {summary.sample_count} samples of {summary.pump_count} pumps "
            f"({summary.normal_count} normal, {summary.abnormal_count} abnormal)"
        )


class CommandTrain(SubCommand):
    """Command to train a default CNN or an ECNN on all pumps of a dataset."""

    def __init__(self):
        super().__init__(help_message="Trains a network on a dataset and writes the model file")

    def setup(self, parser: argparse.ArgumentParser):
        parser.add_argument("-d", "--dataset", type=Path, required=True, help="Path of the dataset file")
        parser.add_argument("-o", "--output", type=Path, required=True, help="Path of the model file to write")
        parser.add_argument("--algo", choices=["cnn", "ecnn"], default=None, help="Network to train")
        add_network_args(parser)

    def overrides(self, args: argparse.Namespace) -> dict[str, Any]:
        overrides: dict[str, Any] = {}
        if args.algo is not None:
            _set(overrides, "network", "enhanced", args.algo == "ecnn")
        network_overrides(args, overrides)
        return overrides

    def run(self, args: argparse.Namespace, config: Config):
        summary = TrainingService(DatasetRepo(), ModelRepo()).train(
            args.dataset,
            args.output,
            config.network,
            config.training,
            (config.evaluation.train_factor_min, config.evaluation.train_factor_max),
        )
        print(f"Trained {summary.algorithm} on {summary.sample_count} samples")
        print(f"Training accuracy: {summary.train_accuracy:.4f}")
        print(f"MAC count: {summary.mac_count}")


class CommandCrossval(SubCommand):
    """Command to run the leave-one-pump-out cross-validation of a detector."""

    def __init__(self):
        super().__init__(help_message="Runs the leave-one-pump-out cross-validation and writes the results CSV")

    def setup(self, parser: argparse.ArgumentParser):
        parser.add_argument("-d", "--dataset", type=Path, required=True, help="Path of the dataset file")
        parser.add_argument("-o", "--output", type=Path, required=True, help="Path of the results CSV to write")
        parser.add_argument(
            "--algo", choices=[str(algorithm) for algorithm in Algorithm], required=True, help="Detector to evaluate"
        )
        parser.add_argument(
            "--policy", choices=[str(kind) for kind in SelectionKind], default=None, help="Parameter selection policy"
        )
        parser.add_argument("--target-fpr", type=float, default=None, help="Target false positive rate")
        parser.add_argument("--fixed-value", type=float, default=None, help="Global parameter for the fixed policy")
        parser.add_argument("--adapt-fraction", type=float, default=None, help="Fraction of normals for adaptation")
        parser.add_argument("--pumps", nargs="+", default=None, help="One or more pumps to run folds for")
        add_network_args(parser)

    def overrides(self, args: argparse.Namespace) -> dict[str, Any]:
        overrides: dict[str, Any] = {}
        _set(overrides, "selection", "kind", args.policy)
        _set(overrides, "selection", "target_fpr", args.target_fpr)
        _set(overrides, "selection", "fixed_value", args.fixed_value)
        _set(overrides, "evaluation", "adapt_fraction", args.adapt_fraction)
        _set(overrides, "evaluation", "pumps", args.pumps)
        network_overrides(args, overrides)
        return overrides

    def run(self, args: argparse.Namespace, config: Config):
        evaluation = config.evaluation
        plan = CrossValidationPlan(
            algorithm=Algorithm(args.algo),
            policy=config.selection,
            network=config.network,
            training=config.training,
            adapt_fraction=evaluation.adapt_fraction,
            train_factor_min=evaluation.train_factor_min,
            train_factor_max=evaluation.train_factor_max,
            fixed_samples_per_pump=evaluation.fixed_samples_per_pump,
        )
        result = CrossValidationService(DatasetRepo(), ResultsStore()).run(
            args.dataset, args.output, plan, pumps=evaluation.pumps, jobs=evaluation.jobs
        )
        aggregate = result.aggregate
        print(f"Folds: {len(result.records)} evaluated, {len(result.skipped)} skipped")
        print(f"Aggregate accuracy: {aggregate.accuracy:.4f}")
        print(f"Weighted accuracy: {aggregate.weighted_accuracy:.4f}")
        print(f"TPDR: {'undefined' if aggregate.tpdr is None else f'{aggregate.tpdr:.4f}'}")


class CommandDse(SubCommand):
    """Command to explore network topologies and extract the Pareto front."""

    def __init__(self):
        super().__init__(help_message="Explores network topologies and writes the results and Pareto CSVs")

    def setup(self, parser: argparse.ArgumentParser):
        parser.add_argument("-d", "--dataset", type=Path, required=True, help="Path of the dataset file")
        parser.add_argument("-o", "--output", type=Path, required=True, help="Path of the results CSV to write")
        parser.add_argument("-p", "--pareto-output", type=Path, required=True, help="Path of the Pareto CSV to write")
        parser.add_argument("--algo", choices=["cnn", "ecnn"], default=None, help="Network family to explore")
        parser.add_argument("--depths", type=int, nargs="+", default=None, help="Depths to explore")
        parser.add_argument("--kernels", type=int, nargs="+", default=None, help="Kernel sizes to explore")
        parser.add_argument("--channel-counts", type=int, nargs="+", default=None, help="Channel counts to explore")
        parser.add_argument("--test-ratio", type=float, default=None, help="Fraction of samples in the test split")
        add_training_args(parser)

    def overrides(self, args: argparse.Namespace) -> dict[str, Any]:
        overrides: dict[str, Any] = {}
        if args.algo is not None:
            _set(overrides, "dse", "enhanced", args.algo == "ecnn")
        _set(overrides, "dse", "depths", args.depths)
        _set(overrides, "dse", "kernels", args.kernels)
        _set(overrides, "dse", "channel_counts", args.channel_counts)
        _set(overrides, "evaluation", "test_ratio", args.test_ratio)
        training_overrides(args, overrides)
        return overrides

    def run(self, args: argparse.Namespace, config: Config):
        evaluation = config.evaluation
        result = ExplorationService(DatasetRepo(), ResultsStore()).run(
            args.dataset,
            args.output,
            args.pareto_output,
            config.dse,
            config.training,
            test_ratio=evaluation.test_ratio,
            factor=evaluation.dse_factor,
            factor_range=(evaluation.train_factor_min, evaluation.train_factor_max),
            jobs=evaluation.jobs,
        )
        print(f"Explored {len(result.records)} topologies, {len(result.front)} on the Pareto front")
        for record in result.front:
            print(
                f"depth {record.config.depth}, kernel {record.config.kernel}, channels {record.config.channels}: "
                f"{record.mac_count} MACs, accuracy {record.accuracy:.4f}"
            )


class CommandAdapt(SubCommand):
    """Command to adapt a detector to a single pump using its normal samples."""

    def __init__(self):
        super().__init__(help_message="Adapts a detector to a pump and writes its profile")

    def setup(self, parser: argparse.ArgumentParser):
        parser.add_argument("-d", "--dataset", type=Path, required=True, help="Path of the dataset file")
        parser.add_argument("-m", "--model", type=Path, default=None, help="Path of the trained ECNN model file")
        parser.add_argument("--pump", required=True, help="ID of the pump to adapt to")
        parser.add_argument("-o", "--output", type=Path, required=True, help="Path of the profile file to write")
        parser.add_argument(
            "--algo",
            choices=[str(Algorithm.COMBINED), str(Algorithm.ECNN), str(Algorithm.THRESHOLD)],
            default=str(Algorithm.COMBINED),
            help="Detector to adapt",
        )
        parser.add_argument("--target-fpr", type=float, default=None, help="Target false positive rate")
        parser.add_argument("--adapt-fraction", type=float, default=None, help="Fraction of normals for adaptation")

    def overrides(self, args: argparse.Namespace) -> dict[str, Any]:
        overrides: dict[str, Any] = {}
        _set(overrides, "selection", "target_fpr", args.target_fpr)
        _set(overrides, "evaluation", "adapt_fraction", args.adapt_fraction)
        return overrides

    def run(self, args: argparse.Namespace, config: Config):
        service = AdaptationService(DatasetRepo(), ModelRepo(), ProfileRepo())
        result = service.adapt(
            args.dataset,
            args.pump,
            args.output,
            config.selection,
            algorithm=Algorithm(args.algo),
            model_path=args.model,
            adapt_fraction=config.evaluation.adapt_fraction,
        )
        profile = result.profile
        parameter = profile.factor if profile.chosen_detector == Detector.ECNN else profile.threshold
        print(f"Chosen detector: {profile.chosen_detector}")
        print(f"Parameter: {parameter}")
        print(f"Adaptation FPR: {result.adaptation_fpr:.4f} over {result.adaptation_count} normal samples")


# List of subcommands
commands: dict[str, SubCommand] = {
    "generate": CommandGenerate(),
    "train": CommandTrain(),
    "crossval": CommandCrossval(),
    "dse": CommandDse(),
    "adapt": CommandAdapt(),
}


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all sub commands."""
    parser = argparse.ArgumentParser(prog="pump-monitor", description="Pump specific vibration anomaly detection")
    parser.add_argument(
        "--debug", action="store_true", help="Flag for setting the log level to debug to output more info"
    )
    parser.add_argument("--config", type=Path, default=None, help="Path of a KEY=value config file")
    parser.add_argument("--seed", type=int, default=None, help="Seed of all random draws")
    parser.add_argument("--jobs", type=int, default=None, help="Number of worker processes for folds and grid points")

    subparser = parser.add_subparsers(dest="command", required=True)
    for command_name, command in commands.items():
        command_parser = subparser.add_parser(command_name, help=command.help_message)
        command.setup(command_parser)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """
    Runs CLI commands.

    :param argv: Arguments (defaults to the process arguments).
    :return: Exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on invalid arguments and 0 for `--help`
        return exc.code if isinstance(exc.code, int) else 2

    setup_logger(debug=args.debug)
    command = commands[args.command]
    overrides = command.overrides(args)
    if args.seed is not None:
        overrides["seed"] = args.seed
    _set(overrides, "evaluation", "jobs", args.jobs)

    try:
        config = load_config(args.config, overrides)
        command.run(args, config)
    except BasePumpMonitorError as exc:
        logger.exception(exc.detail)
        print(f"{exc.response_detail}: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pylint:disable=broad-exception-caught
        logger.exception("An unexpected error occurred")
        print(f"Something went wrong: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
