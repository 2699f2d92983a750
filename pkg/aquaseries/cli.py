"""Command-line interface: `aquaseries <subcommand> --config run.json [overrides]`.

Every subcommand reads the same RunConfig document, applies the command-line overrides,
and writes its outputs into the configured output directory. Failures exit with 2
(config), 3 (data) or 4 (training).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import pandas as pd

from aquaseries.aquaseries_client import AquaSeriesClient
from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.evaluation import EvalReport
from aquaseries.features import PUBLISHED_SELECTIONS, FeatureMatrix
from aquaseries.pipeline import RunConfig, load_run_config, run_all_parameters, run_pipeline
from aquaseries.spectra import MatchupTable, ParameterId
from aquaseries.utils.files import atomic_write_text

logger = logging.getLogger("aquaseries.cli")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

PARAMETER_CHOICES = [parameter.value for parameter in ParameterId] + ["all"]

# (flag, config key, type, help)
OVERRIDES = (
    ("--matchup", "matchup_path", str, "Match-up CSV."),
    ("--insitu", "insitu_path", str, "In-situ sample CSV (extraction)."),
    ("--scenes", "scene_dir", str, "Directory of .sgrid scenes (extraction)."),
    ("--output-dir", "output_dir", str, "Artifact directory."),
    ("--seed", "seed", int, "Random seed."),
    ("--boundary-year", "boundary_year", int, "First validation year."),
    ("--epochs", "train.epochs", int, "Training epochs."),
    ("--batch-size", "train.batch_size", int, "Minibatch size."),
    ("--sequence-length", "train.sequence_length", int, "Window length W."),
    ("--learning-rate", "train.learning_rate", float, "Adam learning rate."),
    ("--hidden-dim", "train.hidden_dim", int, "LSTM hidden units."),
    ("--dropout", "train.dropout_rate", float, "Dropout on the final hidden state."),
    ("--k-min", "selection.k_min", int, "Smallest feature count."),
    ("--k-max", "selection.k_max", int, "Largest feature count."),
    ("--folds", "selection.folds", int, "Cross-validation folds."),
    ("--selection-epochs", "selection.selection_epochs", int, "Epochs per fold model."),
    ("--tukey-k", "screening.k", float, "Tukey fence multiplier."),
    ("--screen-variable", "screening.variable", str, "target, reflectance or none."),
)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values: Dict[str, Any] = {
        key: getattr(args, flag[2:].replace("-", "_")) for flag, key, _, _ in OVERRIDES
    }
    if args.parameter and args.parameter != "all":
        values["parameter"] = args.parameter
    if args.features:
        values["features"] = [name.strip() for name in args.features.split(";") if name.strip()]
    if args.preset:
        values["selection.preset"] = args.preset
    return values


def _config(args: argparse.Namespace) -> RunConfig:
    return load_run_config(args.config, _overrides(args))


def _client(config: RunConfig) -> AquaSeriesClient:
    return AquaSeriesClient(seed=config.seed, boundary_year=config.boundary_year)


def _table(client: AquaSeriesClient, config: RunConfig) -> MatchupTable:
    if config.matchup_path is not None:
        return client.matchups.ingest(config.matchup_path, **config.ingest.model_dump())
    return client.matchups.extract(
        config.insitu_path, config.scene_dir, **config.extraction.model_dump()
    )


def _screened(client: AquaSeriesClient, config: RunConfig) -> MatchupTable:
    table, report = client.matchups.screen(
        _table(client, config),
        config.parameter.value,
        **config.screening.model_dump(mode="json"),
    )
    atomic_write_text(
        config.output_dir / "screening.json",
        json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True) + "\n",
    )
    return table


def _features(client: AquaSeriesClient, config: RunConfig, table: MatchupTable) -> FeatureMatrix:
    return client.modeling.features(
        table,
        names=config.features,
        preset=config.selection.preset,
        parameter=config.parameter.value,
    )


def _selected_names(client: AquaSeriesClient, config: RunConfig, table: MatchupTable) -> List[str]:
    if config.features:
        return list(config.features)
    if config.selection.preset == "published":
        return list(PUBLISHED_SELECTIONS[config.parameter])
    selected_path = config.output_dir / "selected_features.json"
    if selected_path.is_file():
        document = json.loads(selected_path.read_text(encoding="utf-8"))
        if (
            document.get("parameter") == config.parameter.value
            and document.get("table_digest") == table.digest()
        ):
            return document["selected"]
        logger.info("Ignoring %s: it was selected for other data; selecting again", selected_path)
    return list(_select(client, config, table, _features(client, config, table)))


def _select(
    client: AquaSeriesClient, config: RunConfig, table: MatchupTable, matrix: FeatureMatrix
) -> Sequence[str]:
    result = client.modeling.select(
        matrix,
        table.target_array(config.parameter),
        **config.selection.model_dump(exclude={"preset"}),
        **config.train.model_dump(exclude={"normalization", "seed"}),
    )
    document = {
        "parameter": config.parameter.value,
        "source": "selection",
        "table_digest": table.digest(),
        "selected": list(result.selected),
        "ranking": [item.model_dump() for item in result.ranking],
        "scores": {str(k): score for k, score in sorted(result.scores.items())},
    }
    atomic_write_text(
        config.output_dir / "selected_features.json",
        json.dumps(document, indent=2, sort_keys=True) + "\n",
    )
    return result.selected


def cmd_ingest(config: RunConfig) -> int:
    """Validate a match-up CSV and write its canonical form."""
    client = _client(config)
    if config.matchup_path is None:
        raise _usage("ingest needs a match-up CSV (--matchup)")
    table = _table(client, config)
    path = client.matchups.save(table, config.output_dir / "matchups.csv")
    print(f"{len(table)} records, digest {table.digest()} -> {path}")
    return 0


def cmd_extract(config: RunConfig) -> int:
    """Build a match-up CSV from in-situ samples and scenes."""
    client = _client(config)
    if config.insitu_path is None or config.scene_dir is None:
        raise _usage("extract needs --insitu and --scenes")
    table = client.matchups.extract(
        config.insitu_path, config.scene_dir, **config.extraction.model_dump()
    )
    path = client.matchups.save(table, config.output_dir / "matchups.csv")
    print(f"{len(table)} match-ups -> {path}")
    return 0


def cmd_screen(config: RunConfig) -> int:
    """Screen one parameter with Tukey's fences."""
    client = _client(config)
    table = _screened(client, config)
    path = client.matchups.save(table, config.output_dir / "screened.csv")
    print(f"{len(table)} {config.parameter.value} records kept -> {path}")
    return 0


def cmd_features(config: RunConfig) -> int:
    """Evaluate candidate or listed features on the screened table."""
    client = _client(config)
    matrix = _features(client, config, _screened(client, config))
    path = client.modeling.save_features(matrix, config.output_dir / "features.csv")
    print(f"{len(matrix.names)} features x {len(matrix)} records -> {path}")
    return 0


def cmd_select(config: RunConfig) -> int:
    """Rank candidates and choose the feature count by cross-validation."""
    client = _client(config)
    table = _screened(client, config)
    selected = _select(client, config, table, _features(client, config, table))
    print("selected: " + ", ".join(selected))
    return 0


def cmd_train(config: RunConfig) -> int:
    """Train on the selected features and write the model snapshot."""
    client = _client(config)
    table = _screened(client, config)
    names = _selected_names(client, config, table)
    matrix = client.modeling.features(table, names=names)
    fitted = client.modeling.train(
        matrix,
        table.target_array(config.parameter),
        **config.train.model_dump(exclude={"normalization", "seed"}),
    )
    client.modeling.save(fitted.snapshot, config.output_dir / "model.lstm")
    history = fitted.result.loss_history
    atomic_write_text(
        config.output_dir / "loss_history.csv",
        pd.DataFrame({"epoch": range(len(history)), "loss": list(history)}).to_csv(
            index=False, lineterminator="\n"
        ),
    )
    print(f"trained {len(history)} epochs, final loss {history[-1]:.6f}")
    return 0


def cmd_evaluate(config: RunConfig) -> int:
    """Evaluate a saved snapshot on the training and validation years."""
    client = _client(config)
    table = _screened(client, config)
    snapshot = client.modeling.load(config.output_dir / "model.lstm")
    matrix = client.modeling.features(table, names=list(snapshot.feature_names))
    sequences, estimates = client.modeling.predict(
        snapshot, matrix, table.target_array(config.parameter)
    )
    reports: List[EvalReport] = []
    rows = []
    for split in ("train", "validation"):
        indices = [
            index
            for index, item in enumerate(sequences.windows)
            if (item.end_date.year < config.boundary_year) == (split == "train")
        ]
        if not indices:
            continue
        observed = [sequences.windows[index].target for index in indices]
        estimated = [float(estimates[index]) for index in indices]
        reports.append(
            client.reporting.evaluate(
                config.parameter.value,
                split,
                observed,
                estimated,
                config_digest=config.digest(),
                selected_features=snapshot.feature_names,
            )
        )
        rows.extend(
            {
                "station_id": sequences.windows[index].station_id,
                "date": sequences.windows[index].end_date.isoformat(),
                "split": split,
                "observed": sequences.windows[index].target,
                "estimated": float(estimates[index]),
            }
            for index in indices
        )
    client.reporting.write(reports, config.output_dir)
    atomic_write_text(
        config.output_dir / "predictions.csv",
        pd.DataFrame(rows, columns=["station_id", "date", "split", "observed", "estimated"]).to_csv(
            index=False, lineterminator="\n"
        ),
    )
    sys.stdout.write(client.reporting.table(reports))
    return 0


def cmd_run(config: RunConfig, all_parameters: bool = False) -> int:
    """Run the full pipeline."""
    results = run_all_parameters(config) if all_parameters else [run_pipeline(config)]
    for result in results:
        report = result.validation
        r = "undefined" if report.r is None else f"{report.r:.4f}"
        print(
            f"{report.parameter.value}: validation n={report.n} r={r} rmse={report.rmse:.4f} "
            f"mae={report.mae:.4f} smape={report.smape:.2f}% -> {result.output_dir}"
        )
    return 0


def cmd_report(path: Path) -> int:
    """Print a report.json document as CSV."""
    client = AquaSeriesClient()
    sys.stdout.write(client.reporting.table(client.reporting.read(path)))
    return 0


def _usage(message: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="USAGE_ERROR",
            error_message=message,
            category=ErrorCategory.CONFIG,
            stage="config",
        )
    )


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "ingest": cmd_ingest,
    "extract": cmd_extract,
    "screen": cmd_screen,
    "features": cmd_features,
    "select": cmd_select,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
}


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per stage."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="RunConfig JSON document.")
    common.add_argument(
        "--parameter", choices=PARAMETER_CHOICES, default=None, help="Parameter to model."
    )
    common.add_argument(
        "--features", type=str, default=None, help="Semicolon-separated feature names."
    )
    common.add_argument(
        "--preset", choices=["published"], default=None, help="Use the published feature lists."
    )
    common.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging verbosity.",
    )
    for flag, _, kind, help_text in OVERRIDES:
        common.add_argument(flag, type=kind, default=None, help=help_text)

    parser = argparse.ArgumentParser(
        prog="aquaseries",
        description="Sentinel-2 water quality time series with an LSTM regressor.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, handler in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=handler.__doc__)
    subparsers.add_parser("run", parents=[common], help=cmd_run.__doc__)
    report = subparsers.add_parser("report", parents=[common], help=cmd_report.__doc__)
    report.add_argument("--report", type=str, default=None, help="report.json to print.")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `aquaseries` console script."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    try:
        if args.command == "report" and args.report:
            return cmd_report(Path(args.report))
        config = _config(args)
        if args.command == "report":
            return cmd_report(config.output_dir / "report.json")
        if args.command == "run":
            return cmd_run(config, all_parameters=args.parameter == "all")
        if args.parameter == "all":
            raise _usage("--parameter all is only supported by the run subcommand")
        config.validate_paths()
        config.output_dir.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](config)
    except AquaSeriesException as e:
        logger.error("%s", e)
        print(f"aquaseries: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
