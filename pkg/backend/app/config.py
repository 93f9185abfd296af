# backend/app/config.py

import os

from dotenv import load_dotenv

load_dotenv()

# -------------------------------------------------
# Search defaults
# -------------------------------------------------

SEED = int(os.getenv("QUDIT_SEED", "0"))
LHV_RESTARTS = int(os.getenv("QUDIT_LHV_RESTARTS", "200"))
LHV_KICKS = int(os.getenv("QUDIT_LHV_KICKS", "30"))
ENTROPY_RESTARTS = int(os.getenv("QUDIT_ENTROPY_RESTARTS", "50"))
ENTROPY_RESTARTS_LARGE = int(os.getenv("QUDIT_ENTROPY_RESTARTS_LARGE", "200"))

# -------------------------------------------------
# Size budgets
# -------------------------------------------------

FULL_BELL_MAX_P = int(os.getenv("QUDIT_FULL_BELL_MAX_P", "13"))
LHV_EXACT_MAX_P = int(os.getenv("QUDIT_LHV_EXACT_MAX_P", "7"))

# -------------------------------------------------
# Tolerances
# -------------------------------------------------

HERMITIAN_TOL = float(os.getenv("QUDIT_HERMITIAN_TOL", "1e-10"))
THEOREM_TOL = float(os.getenv("QUDIT_THEOREM_TOL", "1e-9"))
IDENTIFY_TOL = float(os.getenv("QUDIT_IDENTIFY_TOL", "1e-9"))
KS_THRESHOLD = float(os.getenv("QUDIT_KS_THRESHOLD", "0.08"))
KS_MIN_P = int(os.getenv("QUDIT_KS_MIN_P", "53"))

LOG_LEVEL = os.getenv("QUDIT_LOG_LEVEL", "INFO")

VERSION = "0.1.0"
