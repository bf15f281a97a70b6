from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Logging level for the CLI (DEBUG shows per-batch progress)
    log_level: str = "INFO"

    # Worker processes for frame-parallel sweeps; results never depend on it
    threads: int = 1

    output_dir: str = "results"

    # Alternative channel tap file; the packaged data/channels.txt otherwise
    channel_file: Optional[str] = None

    class Config:
        env_prefix = "TEQ_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False


settings = Settings()
