"""Tests for engine configuration."""

import json
import tempfile
from pathlib import Path

import pytest

from src.config import EngineConfig, EscalationPolicy, load_config
from src.errors import PreconditionError


class TestEscalationPolicy:
    """Tests for the nMax schedule."""

    def test_start(self):
        """Should start at 2d + 3."""
        assert EscalationPolicy().start(1) == 5
        assert EscalationPolicy().start(3) == 9

    def test_doubling_to_cap(self):
        """Should double and end exactly at the cap."""
        assert list(EscalationPolicy(cap=64).limits(1)) == [5, 10, 20, 40, 64]

    def test_start_clipped(self):
        """A cap below the start should yield only the cap."""
        assert list(EscalationPolicy(cap=4).limits(2)) == [4]


class TestEngineConfig:
    """Tests for engine settings."""

    def test_defaults(self):
        """Should carry the documented defaults."""
        config = EngineConfig()
        assert config.order == "degrevlex"
        assert config.field == "q"
        assert config.max_power == 64
        assert config.depth_cap == 64
        assert config.power_checks == 3
        assert config.timeout_secs is None

    def test_rejects_unknown_order(self):
        """Should reject an unknown monomial order."""
        with pytest.raises(PreconditionError):
            EngineConfig(order="weighted")

    def test_rejects_non_positive_caps(self):
        """Should reject a zero cap."""
        with pytest.raises(PreconditionError):
            EngineConfig(max_power=0)

    def test_escalation_uses_max_power(self):
        """The schedule should stop at max_power."""
        assert list(EngineConfig(max_power=12).escalation.limits(1)) == [5, 10, 12]

    def test_from_dict_rejects_unknown_keys(self):
        """Unknown settings should be rejected."""
        with pytest.raises(PreconditionError):
            EngineConfig.from_dict({"order": "lex", "speed": "fast"})

    def test_override_skips_none(self):
        """None values should leave settings untouched."""
        config = EngineConfig().override(order="lex", max_power=None)
        assert config.order == "lex"
        assert config.max_power == 64

    def test_round_trip(self):
        """to_dict should feed back into from_dict."""
        config = EngineConfig(order="deglex", workers=2)
        assert EngineConfig.from_dict(config.to_dict()) == config


class TestLoadConfig:
    """Tests for reading project configuration files."""

    def test_reads_engine_section(self):
        """Should read the engine section only."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "project.config.json"
            path.write_text(json.dumps({"stack": "python", "engine": {"max_power": 32}}))
            config = load_config(path)
            assert config.max_power == 32
            assert config.order == "degrevlex"

    def test_missing_section_gives_defaults(self):
        """A file without an engine section should give defaults."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "project.config.json"
            path.write_text("{}")
            assert load_config(path) == EngineConfig()

    def test_unreadable_file(self):
        """A missing explicit file should be a precondition error."""
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(PreconditionError):
                load_config(Path(tmpdir) / "absent.json")

    def test_invalid_json(self):
        """Malformed JSON should be a precondition error."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "project.config.json"
            path.write_text("{not json")
            with pytest.raises(PreconditionError):
                load_config(path)

    def test_repository_defaults(self):
        """The repository's own configuration should hold the defaults."""
        path = Path(__file__).parent.parent / "project.config.json"
        assert load_config(path) == EngineConfig()
