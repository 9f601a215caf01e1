"""
Configuration file for the finite type-space toolkit
"""

import logging

# --- MODEL DEFAULTS ---

DEFAULT_PLAYERS = ('a', 'b')
DEFAULT_NATURE_POINTS = ('h', 't')

# --- DOCUMENT SETTINGS ---

DOCUMENT_SCHEMA_VERSION = 1
DOCUMENT_INDENT = 2
EXPORT_FOLDER = 'exports/'

# --- BRUTE-FORCE BUDGETS ---

MAX_MORPHISM_MAPS = 200_000          # candidate maps tried by enumerate_morphisms
MAX_SOBERDRUNK_LEVEL = 4             # W^4 has 512 states
MAX_W_STATES = 2 ** (2 * MAX_SOBERDRUNK_LEVEL + 1)
MAX_FIELD_MEMBERS = 1 << 16          # field_members refuses larger fields
MAX_SUPERSET_ENUMERATION_ATOMS = 14  # exhaustive superset sweeps in the covering checks
MAX_ORACLE_STATES = 6                # expression-event oracle and terminality sweeps

# --- TRANSFINITE CHECKS ---

TRANSFINITE_FINITE_POSITIONS = 6     # supports inside {0..5} plus omega
TRANSFINITE_MAX_BASE = 2
LEMMA_PARTNERS = 1                   # drawn partner states per checked state
RANDOM_SEED = 20240917

# --- LOGGING ---

LOG_LEVEL = 'WARNING'
LOG_FILE = None                      # e.g. 'logs/typespace.log'
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# --- CONSOLE ---

COLOR_OUTPUT = True                  # ignored when stderr is not a terminal


def get_config():
    """Return configuration as dictionary"""
    return {
        'players': DEFAULT_PLAYERS,
        'nature_points': DEFAULT_NATURE_POINTS,
        'schema_version': DOCUMENT_SCHEMA_VERSION,
        'indent': DOCUMENT_INDENT,
        'export_folder': EXPORT_FOLDER,
        'max_morphism_maps': MAX_MORPHISM_MAPS,
        'max_soberdrunk_level': MAX_SOBERDRUNK_LEVEL,
        'max_w_states': MAX_W_STATES,
        'max_field_members': MAX_FIELD_MEMBERS,
        'max_superset_atoms': MAX_SUPERSET_ENUMERATION_ATOMS,
        'max_oracle_states': MAX_ORACLE_STATES,
        'transfinite_positions': TRANSFINITE_FINITE_POSITIONS,
        'transfinite_max_base': TRANSFINITE_MAX_BASE,
        'lemma_partners': LEMMA_PARTNERS,
        'random_seed': RANDOM_SEED,
        'log_level': LOG_LEVEL,
        'log_file': LOG_FILE,
        'log_format': LOG_FORMAT,
        'color_output': COLOR_OUTPUT,
    }


def validate_config():
    """Validate configuration settings"""
    errors = []

    if not DEFAULT_PLAYERS:
        errors.append("DEFAULT_PLAYERS must not be empty")

    if len(set(DEFAULT_NATURE_POINTS)) != len(DEFAULT_NATURE_POINTS):
        errors.append("DEFAULT_NATURE_POINTS must be distinct")

    if MAX_SOBERDRUNK_LEVEL < 1:
        errors.append("MAX_SOBERDRUNK_LEVEL must be at least 1")

    if MAX_MORPHISM_MAPS < 1:
        errors.append("MAX_MORPHISM_MAPS must be positive")

    if TRANSFINITE_MAX_BASE >= TRANSFINITE_FINITE_POSITIONS:
        errors.append("TRANSFINITE_MAX_BASE must lie inside the support window")

    if LEMMA_PARTNERS < 1:
        errors.append("LEMMA_PARTNERS must be positive")

    if LOG_LEVEL not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        errors.append(f"LOG_LEVEL '{LOG_LEVEL}' is not a logging level name")

    if errors:
        raise ValueError("Configuration validation failed:\n" + "\n".join(errors))

    return True


try:
    validate_config()
except ValueError as e:
    logging.getLogger(__name__).warning("%s (using default values)", e)
