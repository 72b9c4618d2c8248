# shared_libs/configs/schemas/suite_config.py

from pydantic import BaseModel, Field, PositiveInt, PositiveFloat
from typing import Dict, List, Optional

# --- SUITE SCHEMAS ---

class SuiteEntry(BaseModel):
    """One verification suite run by `verify --suite all`."""
    name: str = Field(..., description="Checker name registered in the CheckerFactory (e.g. 'hayashi-nagaoka').")
    enabled: bool = Field(True, description="Disabled suites are skipped by `all`.")
    trials: PositiveInt = Field(100, description="Number of seeded trials.")
    dims: List[PositiveInt] = Field(default_factory=lambda: [2, 3, 4], description="Dimensions cycled through by the trial generator.")
    slack: Optional[PositiveFloat] = Field(None, description="Overrides the configured slack for this suite.")


class SuiteConfigSchema(BaseModel):
    """Root schema of configs/verify/suite_config.yaml (key VERIFY_SUITES)."""
    suites: List[SuiteEntry] = Field(..., description="Suites in execution order.")

    def get(self, name: str) -> Optional[SuiteEntry]:
        return next((s for s in self.suites if s.name == name), None)


# --- REGISTRY MAP (used by SchemaRegistry) ---
SUITE_CONFIG_MAP: Dict[str, type[BaseModel]] = {
    "entry": SuiteEntry,
    "schema": SuiteConfigSchema,
}
