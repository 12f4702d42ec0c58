from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    hullsmith configuration settings.

    Defaults are overridden by environment variables prefixed with HULLSMITH_
    (case-insensitive) or by a .env file in the working directory.

    Example overrides:
    - HULLSMITH_CATALOG="/data/catalog.db"
    - HULLSMITH_ENVIRONMENT="development"   # echoes catalog SQL
    - HULLSMITH_SEARCH_SEED=7
    - HULLSMITH_WITNESS_MAX_Q=11
    """
    catalog: str = "hullsmith_catalog.db"
    environment: str = "production"
    log_level: str = "INFO"

    # Randomized kernel search for family multipliers
    search_seed: int = 1729
    kernel_search_samples: int = 200_000
    kernel_search_batch: int = 4096

    # Distance certificates
    max_minors: int = 1_000_000
    max_exhaustive: int = 2**24

    witness_max_q: int = 9
    golden_dir: str = "data/golden"
    reference_dir: str = "data/reference"
    bug_report_dir: str = "."

    class Config:
        env_file = ".env"
        env_prefix = "HULLSMITH_"
        case_sensitive = False


def get_settings() -> Settings:
    """Get hullsmith settings"""
    return Settings()
