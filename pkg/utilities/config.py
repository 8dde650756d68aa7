import os
from pathlib import Path

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / ".env")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}") from None


DEFAULT_VARS = os.getenv("ARTIN_LAB_VARS", "T1,T2,T3")
DEFAULT_CHAR = _env_int("ARTIN_LAB_CHAR", 0)
DEFAULT_TRUNC = _env_int("ARTIN_LAB_TRUNC", 8)
DEFAULT_SEED = _env_int("ARTIN_LAB_SEED", 0)
DEFAULT_BUDGET = _env_int("ARTIN_LAB_BUDGET", 2_000_000)  # enumerated states / scanned pairs
DEFAULT_SAMPLE_COUNT = _env_int("ARTIN_LAB_SAMPLES", 12)
DEFAULT_COEFF_HEIGHT = _env_int("ARTIN_LAB_COEFF_HEIGHT", 3)
DEFAULT_FORMAT = os.getenv("ARTIN_LAB_FORMAT", "json")
LOG_LEVEL = os.getenv("ARTIN_LAB_LOG_LEVEL", "WARNING")

# slopes for the ICL envelope and the stable Artin-Rees grid
A_GRID = ("1", "3/2", "2")

# primes tried by the lower-bound certificate
CERTIFICATE_PRIMES = (2, 3)
