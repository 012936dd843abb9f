"""Tests for the resolution cap and experiment settings."""

from __future__ import annotations

from fractions import Fraction as F
from pathlib import Path

import pytest

from padicskew.config import (
    ResolutionConfig,
    check_rank,
    get_config,
    max_rank,
    override_config,
)
from padicskew.errors import CapExceededError, ConfigError
from padicskew.experiments.base import ExperimentConfig


class TestResolutionConfig:
    def test_default_caps(self) -> None:
        assert get_config().max_cells == 4096
        assert max_rank(2) == 12
        assert max_rank(3) == 7

    def test_override_is_temporary(self) -> None:
        with override_config(max_cells=16):
            assert max_rank(2) == 4
            with pytest.raises(CapExceededError, match="exceeds the configured cap 4"):
                check_rank(2, 5)
        assert max_rank(2) == 12

    def test_cap_exit_code(self) -> None:
        with pytest.raises(CapExceededError) as info:
            check_rank(2, 13)
        assert info.value.exit_code == 3

    def test_invalid_values(self) -> None:
        with pytest.raises(ConfigError, match="max_cells"):
            ResolutionConfig(max_cells=1)
        with pytest.raises(ConfigError, match="max_search_rank"):
            ResolutionConfig(max_search_rank=0)

    def test_unknown_setting(self) -> None:
        with pytest.raises(ConfigError, match="Unknown resolution setting"):
            with override_config(max_colors=3):
                pass
        assert get_config() == ResolutionConfig()

    def test_base_below_two(self) -> None:
        with pytest.raises(ConfigError):
            max_rank(1)


class TestExperimentConfig:
    def test_defaults(self) -> None:
        config = ExperimentConfig("defect-scan", input=Path("t.json"))
        assert config.n_max == 8
        assert config.format == "json"
        assert not config.decimal

    @pytest.mark.parametrize(
        "overrides, field",
        [
            ({"p": 1}, "p"),
            ({"rank": 0}, "rank"),
            ({"n_max": 0}, "n_max"),
            ({"jobs": 0}, "jobs"),
            ({"seed": -1}, "seed"),
            ({"eps": F(0)}, "eps"),
            ({"format": "xml"}, "format"),
        ],
    )
    def test_invalid_fields(self, overrides: dict, field: str) -> None:
        with pytest.raises(ConfigError, match=f"Field '{field}'"):
            ExperimentConfig("category-sweep", **overrides)
