from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    """Numerical configuration with environment variable support (prefix GTF_)"""

    # Summation
    default_tol: float = 1e-12
    max_terms_per_side: int = 200_000  # RangeOverflow cap
    max_parameters: int = 20  # 21! overflows 64-bit
    monotone_steps: int = 0  # 0 means "use N"

    # Finite differences (pde-verify)
    fd_step_low: float = 1e-5  # total order <= 2
    fd_step_high: float = 1e-4  # total order 3-4
    residual_constant: float = 1e3

    # Characteristics / embedding
    projective_floor: float = 1e-300
    family_workers: int = 1  # >1 evaluates coordinates in a thread pool

    # Extended-precision oracle (mpmath decimal digits)
    oracle_dps: int = 60

    # Randomized checks
    default_seed: int = 0

    class Config:
        env_prefix = "GTF_"
        env_file = ".env"
        env_file_encoding = "utf-8"

settings = Settings()
