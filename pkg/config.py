import os
import logging
import logging.config as logging_config

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
LOGGING_FILEPATH = os.path.join(BASE_DIR, os.environ.get("LOGGING_FILEPATH", "logging.ini"))
TEXT_FILEPATH = os.path.join(BASE_DIR, os.environ.get("TEXT_FILEPATH", "text.ini"))

logging_config.fileConfig(LOGGING_FILEPATH, disable_existing_loggers=False)
logger = logging.getLogger(__name__)

LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING").upper()
try:
    logging.getLogger().setLevel(LOG_LEVEL)
except ValueError as e:
    logger.error(f"Incorrectly configured LOG_LEVEL. Must be one of {', '.join(logging.getLevelNamesMapping())}")
    raise e


def _number(name: str, default: float | int):
    cast = type(default)
    try:
        return cast(os.environ.get(name, default))
    except ValueError as e:
        logger.error(f"Incorrectly configured {name}. Must be a valid {cast.__name__}")
        raise e


# tolerances
RELATIVE_TOLERANCE = _number("RELATIVE_TOLERANCE", 1e-9)
ABSOLUTE_TOLERANCE = _number("ABSOLUTE_TOLERANCE", 1e-12)
DEPENDENCE_TOLERANCE = _number("DEPENDENCE_TOLERANCE", 1e-12)
DEGENERACY_TOLERANCE = _number("DEGENERACY_TOLERANCE", 1e-12)
RANK_TOLERANCE = _number("RANK_TOLERANCE", 1e-10)
STRUCTURE_TOLERANCE = _number("STRUCTURE_TOLERANCE", 1e-9)

# iterative solvers
POWER_TOLERANCE = _number("POWER_TOLERANCE", 1e-12)
POWER_VECTOR_TOLERANCE = _number("POWER_VECTOR_TOLERANCE", 1e-13)
POWER_MAX_ITER = _number("POWER_MAX_ITER", 10000)
TAXICAB_MAX_ITER = _number("TAXICAB_MAX_ITER", 1000)
L1MIN_TOLERANCE = _number("L1MIN_TOLERANCE", 1e-12)
L1MIN_MAX_ITER = _number("L1MIN_MAX_ITER", 500)
ORACLE_MAX_COLUMNS = _number("ORACLE_MAX_COLUMNS", 20)
ORACLE_CHUNK_SIZE = _number("ORACLE_CHUNK_SIZE", 1 << 14)

CRITICAL_ERROR_MSG = "Unexpected error occurred. Run with --verbose for details."
