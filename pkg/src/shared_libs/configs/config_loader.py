import yaml
import os
import logging
from typing import Dict, Any, Type, Optional
from pydantic import BaseModel, ValidationError

from shared_libs.configs.schemas import LabSettings, SchemaRegistry, SuiteConfigSchema
from shared_libs.utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

DIM_CAP_ENV = "QSRLAB_DIM_CAP"

_ACTIVE_SETTINGS: Optional[LabSettings] = None


class ConfigLoader:
    """
    The centralized configuration loader for QSR Lab.

    Reads YAML files and validates them against the pydantic schemas in
    `shared_libs.configs.schemas`.
    """

    def __init__(self, base_config_dir: str = "configs"):
        self._base_dir = base_config_dir

    def load_yaml(self, file_path: str) -> Dict[str, Any]:
        """
        Loads a YAML file from disk (safe_load; relative paths resolve against base dir).
        """
        full_path = file_path
        if not os.path.isabs(file_path) and not os.path.exists(file_path):
            full_path = os.path.join(self._base_dir, file_path)

        if not os.path.exists(full_path):
            raise ConfigurationError(f"Configuration file not found: {full_path}")

        try:
            with open(full_path, 'r') as f:
                return yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            logger.critical(f"YAML parsing error in {full_path}: {e}")
            raise ConfigurationError(f"YAML parsing failed for {full_path}") from e

    def _validate_config_with_schema(self, raw_config: Dict[str, Any], schema_class: Type[BaseModel]) -> BaseModel:
        """Internal validation helper."""
        try:
            validated_model = schema_class.model_validate(raw_config)
            logger.debug(f"Configuration validated successfully against {schema_class.__name__}.")
            return validated_model
        except ValidationError as e:
            logger.critical(f"Configuration VALIDATION FAILED for {schema_class.__name__}: {e.errors()}")
            raise ConfigurationError(f"Configuration Validation Failed: {schema_class.__name__}. Errors: {e.errors()}") from e

    def get_lab_settings(self, file_path: str = "lab/lab_config.yaml") -> LabSettings:
        """Loads and validates the root lab settings (key LAB_CONFIG, or the whole file)."""
        raw_config = self.load_yaml(file_path)
        raw_config = raw_config.get("LAB_CONFIG", raw_config)
        return apply_env_overrides(self._validate_config_with_schema(raw_config, LabSettings))

    def get_lab_section(self, file_path: str, section: str) -> BaseModel:
        """Loads and validates a single LAB_CONFIG section ('solver', 'verify', ...)."""
        raw_config = self.load_yaml(file_path)
        raw_config = raw_config.get("LAB_CONFIG", raw_config)
        try:
            schema = SchemaRegistry.get_lab_section_schema(section)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        return self._validate_config_with_schema(raw_config.get(section, {}), schema)

    def get_suite_config(self, file_path: str = "verify/suite_config.yaml") -> SuiteConfigSchema:
        """Loads the verification suite list (key VERIFY_SUITES)."""
        raw_config = self.load_yaml(file_path)
        if "VERIFY_SUITES" not in raw_config:
            raise ConfigurationError(f"Key 'VERIFY_SUITES' not found in {file_path}.")
        return self._validate_config_with_schema(raw_config["VERIFY_SUITES"], SuiteConfigSchema)


def apply_env_overrides(settings: LabSettings) -> LabSettings:
    """Applies QSRLAB_DIM_CAP to both the protocol cap and the linalg max dimension."""
    raw_cap = os.environ.get(DIM_CAP_ENV)
    if raw_cap is None:
        return settings
    try:
        cap = int(raw_cap)
    except ValueError as e:
        raise ConfigurationError(f"{DIM_CAP_ENV} must be a positive integer, got '{raw_cap}'.") from e
    if cap <= 0:
        raise ConfigurationError(f"{DIM_CAP_ENV} must be a positive integer, got '{raw_cap}'.")
    return settings.model_copy(update={
        "protocol": settings.protocol.model_copy(update={"dim_cap": cap}),
        "linalg": settings.linalg.model_copy(update={"max_dim": max(cap, settings.linalg.max_dim)}),
    })


def get_settings() -> LabSettings:
    """Process-wide settings: the last installed ones, else defaults plus env overrides."""
    if _ACTIVE_SETTINGS is not None:
        return _ACTIVE_SETTINGS
    return apply_env_overrides(LabSettings())


def set_settings(settings: Optional[LabSettings]) -> None:
    """Installs `settings` process-wide (None restores defaults)."""
    global _ACTIVE_SETTINGS
    _ACTIVE_SETTINGS = settings


def installed_settings() -> Optional[LabSettings]:
    """Settings installed through set_settings, or None when running on defaults."""
    return _ACTIVE_SETTINGS
