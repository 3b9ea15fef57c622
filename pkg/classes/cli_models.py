from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class CliConfig(BaseModel):
    """
    Settings shared by every subcommand after defaults, environment, config file
    and flags have been merged.

    ``threads`` and ``output_dir`` never change results, so they are kept out of
    the metadata written into reports.
    """

    model_config = ConfigDict(frozen=True)

    subcommand: Literal["univariate", "multivariate", "select", "verify"]
    config_path: Optional[Path] = None
    seed: int = Field(ge=0)
    output_dir: Path
    criteria: tuple[str, ...] = ()
    threads: int = Field(1, ge=1)
