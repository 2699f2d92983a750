"""Unit tests for the aquaseries command-line interface."""

import json
from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

from aquaseries.cli import _selected_names, build_parser, main
from aquaseries.evaluation import EvalReport, write_report_json
from aquaseries.pipeline import build_run_config
from aquaseries.spectra import MatchupTable, ParameterId


@pytest.fixture
def config_path(tmp_path, quick_config):
    """The quick config written as a JSON document."""
    path = tmp_path / "run.json"
    path.write_text(json.dumps(quick_config), encoding="utf-8")
    return path


@pytest.fixture
def output_dir(quick_config):
    """Output directory named by the quick config."""
    return Path(quick_config["output_dir"])


@pytest.fixture
def validation_report():
    """A single-pair validation report, so r is undefined."""
    return EvalReport(
        parameter=ParameterId.CHLA,
        split="validation",
        n=1,
        rmse=0.5,
        mae=0.5,
        smape=4.0,
    )


@pytest.mark.parametrize(
    "command",
    ["ingest", "extract", "screen", "features", "select", "train", "evaluate", "run", "report"],
)
def test_parser_has_every_subcommand(command):
    """Test that each stage is reachable as a subcommand."""
    args = build_parser().parse_args([command, "--config", "run.json"])
    assert args.command == command
    assert args.config == "run.json"


def test_parser_rejects_unknown_parameter():
    """Test that only known parameters or all are accepted."""
    with pytest.raises(SystemExit):
        build_parser().parse_args(["run", "--parameter", "oxygen"])


def test_missing_config_exits_with_config_code(tmp_path, capsys):
    """Test that a missing config file exits with 2 and a message on stderr."""
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == 2
    assert "CONFIG_NOT_FOUND" in capsys.readouterr().err


def test_missing_input_exits_before_output(config_path, tmp_path):
    """Test that a missing input path exits with 2 without creating the output directory."""
    output = tmp_path / "never"
    code = main(
        [
            "run",
            "--config",
            str(config_path),
            "--matchup",
            str(tmp_path / "gone.csv"),
            "--output-dir",
            str(output),
        ]
    )
    assert code == 2
    assert not output.exists()


def test_all_only_for_run(config_path):
    """Test that --parameter all is refused outside the run subcommand."""
    assert main(["screen", "--config", str(config_path), "--parameter", "all"]) == 2


def test_run_applies_overrides(config_path, validation_report, capsys):
    """Test that flags override the document and the summary is printed."""
    result = MagicMock(validation=validation_report, output_dir="out")
    with patch("aquaseries.cli.run_pipeline", return_value=result) as runner:
        code = main(
            [
                "run",
                "--config",
                str(config_path),
                "--epochs",
                "3",
                "--parameter",
                "ss",
                "--features",
                "NR(B2,B3); B4;",
            ]
        )
    assert code == 0
    config = runner.call_args.args[0]
    assert config.train.epochs == 3
    assert config.parameter == ParameterId.SS
    assert config.features == ["NR(B2,B3)", "B4"]
    assert "r=undefined" in capsys.readouterr().out


def test_run_all_parameters(config_path, validation_report):
    """Test that --parameter all runs every parameter."""
    result = MagicMock(validation=validation_report, output_dir="out")
    with patch("aquaseries.cli.run_all_parameters", return_value=[result] * 3) as runner:
        assert main(["run", "--config", str(config_path), "--parameter", "all"]) == 0
    runner.assert_called_once()


def test_ingest_writes_canonical_table(config_path, output_dir, capsys):
    """Test that ingest writes matchups.csv into the output directory."""
    assert main(["ingest", "--config", str(config_path)]) == 0
    assert "288 records" in capsys.readouterr().out
    assert (output_dir / "matchups.csv").is_file()


def test_screen_writes_counts(config_path, output_dir):
    """Test that screen writes the kept records and the screening counts."""
    assert main(["screen", "--config", str(config_path)]) == 0
    report = json.loads((output_dir / "screening.json").read_text(encoding="utf-8"))
    assert report["parameter"] == "chla"
    assert (output_dir / "screened.csv").is_file()


def test_features_writes_matrix(config_path, output_dir):
    """Test that features writes the listed columns."""
    assert main(["features", "--config", str(config_path), "--features", "B2;NR(B2,B3)"]) == 0
    header = (output_dir / "features.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == 'station_id,date,B2,"NR(B2,B3)"'


def test_extract_needs_inputs(config_path):
    """Test that extract without in-situ samples and scenes is a usage error."""
    assert main(["extract", "--config", str(config_path)]) == 2


def test_report_prints_csv(tmp_path, validation_report, capsys):
    """Test that report prints a report.json document as CSV."""
    path = write_report_json([validation_report], tmp_path / "report.json")
    assert main(["report", "--report", str(path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "parameter,method,n,r,rmse,mae,smape"
    assert lines[1] == "chla,LSTM (validation),1,,0.5,0.5,4.0"


def test_stage_subcommand_missing_input_exits_before_output(config_path, tmp_path):
    """Test that stage subcommands check input paths before creating the output directory."""
    output = tmp_path / "never"
    code = main(
        [
            "screen",
            "--config",
            str(config_path),
            "--matchup",
            str(tmp_path / "gone.csv"),
            "--output-dir",
            str(output),
        ]
    )
    assert code == 2
    assert not output.exists()


def test_malformed_matchup_exits_with_data_code(config_path, matchup_csv, capsys):
    """Test that a row the CSV reader rejects exits with 3 instead of a traceback."""
    with matchup_csv.open("a", encoding="utf-8") as handle:
        handle.write("S9,2020-01-01,114.0,22.0,too,many,fields" + ",0.1" * 20 + "\n")
    assert main(["ingest", "--config", str(config_path)]) == 3
    assert "ROW_INVALID" in capsys.readouterr().err


@pytest.fixture
def stored_table():
    """A match-up table stand-in with a fixed digest."""
    table = MagicMock(spec=MatchupTable)
    table.digest.return_value = "digest-a"
    return table


def _store_selection(config, parameter, digest, selected):
    config.output_dir.mkdir(parents=True, exist_ok=True)
    document = {"parameter": parameter, "table_digest": digest, "selected": selected}
    (config.output_dir / "selected_features.json").write_text(
        json.dumps(document), encoding="utf-8"
    )


def test_selection_reused_for_same_parameter_and_table(quick_config, stored_table):
    """Test that a stored selection for the same parameter and table is reused."""
    config = build_run_config(quick_config)
    _store_selection(config, "chla", "digest-a", ["B4"])
    with patch("aquaseries.cli._select") as select:
        assert _selected_names(MagicMock(), config, stored_table) == ["B4"]
    select.assert_not_called()


@pytest.mark.parametrize(
    "parameter, digest",
    [("ss", "digest-a"), ("chla", "digest-b"), ("chla", None)],
)
def test_stale_selection_is_not_reused(quick_config, stored_table, parameter, digest):
    """Test that a selection made for another parameter or table triggers a new selection."""
    config = build_run_config(quick_config)
    _store_selection(config, parameter, digest, ["B4"])
    with patch("aquaseries.cli._features") as features, patch(
        "aquaseries.cli._select", return_value=("NR(B2,B3)",)
    ) as select:
        assert _selected_names(MagicMock(), config, stored_table) == ["NR(B2,B3)"]
    select.assert_called_once()
    assert select.call_args.args[3] is features.return_value
