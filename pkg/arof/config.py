"""Environment loading and configuration constants."""

import os
from pathlib import Path

# Load .env for local development only
_env_path = Path(__file__).resolve().parent.parent / ".env"
if _env_path.exists():
    from dotenv import load_dotenv
    load_dotenv(_env_path)

# Logging
LOG_LEVEL: str = os.getenv("AROF_LOG_LEVEL", "WARNING")

# Store
STORE_DIR: str = os.getenv("AROF_STORE_DIR", "./arof-store")
LOCK_RETRIES: int = int(os.getenv("AROF_LOCK_RETRIES", "5"))
LOCK_BASE_DELAY: float = float(os.getenv("AROF_LOCK_BASE_DELAY", "0.05"))

# Contract defaults
NOTIONAL_PER_POINT: str = os.getenv("AROF_NOTIONAL_PER_POINT", "1000")

# Volatility
PERIODS_PER_YEAR: float = float(os.getenv("AROF_PERIODS_PER_YEAR", "1"))

# Documents
FORMAT_VERSION: int = 1
HISTORY_DIR_NAME: str = "history"
CONTRACTS_DIR_NAME: str = "contracts"
LOCK_FILE_NAME: str = ".lock"
