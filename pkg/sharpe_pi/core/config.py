from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    class Config:
        env_file = ".env"
        env_prefix = "SHARPE_PI_"
        extra = "ignore"

    # Instance validation
    ROW_SUM_TOL: float = 1e-12
    ENUMERATION_CAP: int = 10_000_000

    # Policy evaluation
    BIG_M: float = 1e12
    ZERO_VARIANCE_TOL: float = 1e-10
    STATIONARY_RESIDUAL_TOL: float = 1e-10

    # Inner policy iteration
    IMPROVEMENT_TOL: float = 1e-9
    PI_CAP_FACTOR: int = 10

    # Middle / outer loops
    EPSILON_Y: float = 1e-7
    KAPPA_TOL: float = 1e-9
    PROBE_BUDGET: int = 10_000
    OUTER_BUDGET: int = 1_000
    RATIO_BUDGET: int = 1_000

    BENCH_WORKERS: int = 4
    LOG_LEVEL: str = "WARNING"


settings = Settings()  # type: ignore
