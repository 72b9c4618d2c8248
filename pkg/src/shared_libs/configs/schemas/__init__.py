# shared_libs/configs/schemas/__init__.py (Public API & Registry)

from pydantic import BaseModel
from typing import Dict

# --- 1. IMPORTS FROM SUB-MODULES ---

from .lab_config import LabSettings, LinalgConfig, SolverConfig, ProtocolDefaults, VerifyConfig
from .suite_config import SUITE_CONFIG_MAP, SuiteEntry, SuiteConfigSchema

LAB_CONFIG_MAP: Dict[str, type[BaseModel]] = {
    "linalg": LinalgConfig,
    "solver": SolverConfig,
    "protocol": ProtocolDefaults,
    "verify": VerifyConfig,
    "root": LabSettings,
}


# --- 2. THE CENTRAL REGISTRY CLASS ---
class SchemaRegistry:
    """
    Controlled access to every configuration schema of the lab.
    """
    LAB_CONFIG_MAP: Dict[str, type[BaseModel]] = LAB_CONFIG_MAP
    SUITE_CONFIG_MAP: Dict[str, type[BaseModel]] = SUITE_CONFIG_MAP

    @staticmethod
    def get_lab_section_schema(section: str) -> type[BaseModel]:
        """Schema of one LAB_CONFIG section ('linalg', 'solver', ...)."""
        try:
            return SchemaRegistry.LAB_CONFIG_MAP[section.lower()]
        except KeyError:
            raise ValueError(f"Unknown lab config section '{section}'.") from None


# --- 3. PUBLIC API ---
__all__ = [
    'SchemaRegistry',
    'LabSettings', 'LinalgConfig', 'SolverConfig', 'ProtocolDefaults', 'VerifyConfig',
    'SuiteEntry', 'SuiteConfigSchema',
]
