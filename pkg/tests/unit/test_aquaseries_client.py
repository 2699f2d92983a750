"""Unit tests for AquaSeriesClient and its services."""

import json
from unittest.mock import MagicMock, patch

import pytest

from aquaseries.aquaseries_client import AquaSeriesClient
from aquaseries.pipeline import RunConfig, build_run_config
from aquaseries.services import MatchupService, ModelingService, ReportingService


@pytest.fixture
def client():
    """Creates an AquaSeriesClient instance for testing."""
    return AquaSeriesClient(seed=3, boundary_year=2019)


def test_matchups_service_instance(client):
    """Test that the matchups service is an instance of MatchupService."""
    assert isinstance(client.matchups, MatchupService)


def test_modeling_service_instance(client):
    """Test that the modeling service is an instance of ModelingService."""
    assert isinstance(client.modeling, ModelingService)


def test_reporting_service_instance(client):
    """Test that the reporting service is an instance of ReportingService."""
    assert isinstance(client.reporting, ReportingService)


def test_services_share_settings(client):
    """Test that the seed and boundary year reach the services."""
    assert client.matchups.boundary_year == 2019
    assert client.modeling.boundary_year == 2019
    assert client.modeling.seed == 3


def test_run_with_config_object(client, quick_config):
    """Test that a RunConfig without overrides is passed through unchanged."""
    config = build_run_config(quick_config)
    with patch("aquaseries.aquaseries_client.run_pipeline") as runner:
        client.run(config)
    assert runner.call_args.args[0] is config


def test_run_with_config_object_and_overrides(client, quick_config):
    """Test that overrides on a RunConfig produce a revalidated copy."""
    config = build_run_config(quick_config)
    with patch("aquaseries.aquaseries_client.run_pipeline") as runner:
        client.run(config, **{"train.epochs": 3, "parameter": "ss"})
    used = runner.call_args.args[0]
    assert isinstance(used, RunConfig)
    assert used.train.epochs == 3
    assert used.parameter.value == "ss"
    assert config.train.epochs == 80


def test_run_with_config_file(client, quick_config, tmp_path):
    """Test that a path is loaded as a JSON document."""
    path = tmp_path / "run.json"
    path.write_text(json.dumps(quick_config), encoding="utf-8")
    with patch("aquaseries.aquaseries_client.run_pipeline") as runner:
        client.run(path, seed=9)
    assert runner.call_args.args[0].seed == 9


def test_run_all_delegates(client, quick_config):
    """Test that run_all hands the config to run_all_parameters."""
    config = build_run_config(quick_config)
    with patch(
        "aquaseries.aquaseries_client.run_all_parameters", return_value=[MagicMock()]
    ) as runner:
        results = client.run_all(config)
    assert len(results) == 1
    runner.assert_called_once_with(config)
