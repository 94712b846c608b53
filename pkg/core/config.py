from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    APP_NAME: str = "SECMAC"
    ENV: str = "development"
    LOG_LEVEL: str = "INFO"
    THREADS: int = 0
    OUTPUT_PREFIX: str = "output/secmac"
    GRID_STEPS: int = 101
    GAUSSIAN_GRID_STEPS: int = 201
    REFINE_ROUNDS: int = 4
    REFINE_SHRINK: float = 0.25
    LATTICE_BUDGET: int = 2_000_000
    MIN_DISTANCE: float = 0.01
    SVG_HASH_SALT: str = "secmac"
    model_config = SettingsConfigDict(env_prefix="SECMAC_", env_file=".env",
                                      env_file_encoding="utf-8", extra="ignore")

settings = Settings()
