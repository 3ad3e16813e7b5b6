"""Experiment config loading - reads TOML files and validates them into ExperimentConfig"""
import hashlib
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from emcontrol.core.config import settings
from emcontrol.core.exceptions import ConfigError
from emcontrol.core.logging_config import get_logger
from emcontrol.schemas import ExperimentConfig


logger = get_logger(__name__)


class ConfigLoader:
    """Service responsible for locating, parsing and validating experiment configs"""

    def __init__(self, configs_dir: str | None = None):
        """
        Initialize the loader.

        Args:
            configs_dir: Directory searched for shipped configs by bare name.
                Defaults to the settings value.
        """
        self.configs_dir = Path(configs_dir or settings.configs_dir)

    def resolve(self, name: str | Path) -> Path:
        """
        Find a config file by path, or by name inside the configs directory.

        Args:
            name: A path to a TOML file, or a shipped config name such as "fig3"

        Returns:
            Path of an existing config file

        Raises:
            ConfigError: If no such file exists
        """
        path = Path(name)
        candidates = [path, self.configs_dir / path, self.configs_dir / f"{path.name}.toml"]
        for candidate in candidates:
            if candidate.is_file():
                return candidate
        raise ConfigError(f"Config file not found: {name} (also searched {self.configs_dir})")

    def load(self, name: str | Path) -> ExperimentConfig:
        """
        Read and validate an experiment config.

        Args:
            name: Path or shipped config name

        Returns:
            Validated ExperimentConfig

        Raises:
            ConfigError: If the file is missing, is not valid TOML or fails validation
        """
        path = self.resolve(name)
        try:
            with open(path, "rb") as file:
                raw = tomllib.load(file)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"Invalid TOML in {path}: {e}") from e

        config = parse_config(raw, source=str(path))
        logger.debug(f"Loaded config {config.experiment.name!r} from {path}")
        return config


def parse_config(raw: dict[str, Any], source: str = "<config>") -> ExperimentConfig:
    """Merge [agent_defaults] into every [agents.<label>] section and validate"""
    data = dict(raw)
    defaults = data.pop("agent_defaults", {}) or {}
    agents = data.get("agents", {})
    if not isinstance(defaults, dict) or not isinstance(agents, dict):
        raise ConfigError(f"{source}: [agent_defaults] and [agents.<label>] must be tables")

    merged = {}
    for label, section in agents.items():
        if not isinstance(section, dict):
            raise ConfigError(f"{source}: [agents.{label}] must be a table")
        merged[label] = {**defaults, **section}
    data["agents"] = merged

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{source}: invalid configuration\n{e}") from e


def load_config(name: str | Path) -> ExperimentConfig:
    return ConfigLoader().load(name)


def canonical_json(config: ExperimentConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def config_hash(config: ExperimentConfig) -> str:
    """Content hash computed the way git hashes a blob"""
    payload = canonical_json(config).encode("utf-8")
    return hashlib.sha1(b"blob %d\0" % len(payload) + payload).hexdigest()
