import json
import logging
import os
import sys
from fractions import Fraction

from config.config import COLOR_OUTPUT, EXPORT_FOLDER, LOG_FILE, LOG_FORMAT, LOG_LEVEL
from core.errors import DocumentError


class Utils:
    """Utility functions shared by the API and the command line"""

    @staticmethod
    def create_directories(directories=(EXPORT_FOLDER,)):
        """Create output directories if they don't exist"""
        for directory in directories:
            if directory and not os.path.exists(directory):
                os.makedirs(directory)
                logging.getLogger(__name__).info("Created directory: %s", directory)

    @staticmethod
    def setup_logging(level=None, log_file=None):
        """Configure the root logger once from the config (or explicit overrides)"""
        level = (level or LOG_LEVEL).upper()
        handlers = [logging.StreamHandler(sys.stderr)]
        log_file = log_file or LOG_FILE
        if log_file:
            folder = os.path.dirname(log_file)
            if folder:
                Utils.create_directories([folder])
            handlers.append(logging.FileHandler(log_file))
        logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT,
                            handlers=handlers, force=True)

    @staticmethod
    def format_rational(value):
        """Fraction -> 'num/den' (integers as 'n')"""
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def parse_rational(text):
        """'num/den' or 'n' -> Fraction; floats and malformed strings are refused"""
        if isinstance(text, bool) or not isinstance(text, (str, int)):
            raise DocumentError(f"rational must be a 'num/den' string, got {text!r}")
        if isinstance(text, int):
            return Fraction(text)
        parts = text.strip().split('/')
        try:
            if len(parts) == 1:
                return Fraction(int(parts[0]))
            if len(parts) == 2:
                return Fraction(int(parts[0]), int(parts[1]))
        except (ValueError, ZeroDivisionError) as e:
            raise DocumentError(f"malformed rational '{text}'") from e
        raise DocumentError(f"malformed rational '{text}'")

    @staticmethod
    def dump_json(data):
        """Canonical JSON text: sorted keys, two-space indent, trailing newline"""
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @staticmethod
    def export_to_json(data, filename):
        """Export data to JSON format"""
        try:
            folder = os.path.dirname(filename)
            if folder:
                Utils.create_directories([folder])
            with open(filename, 'w', encoding='utf-8') as f:
                f.write(Utils.dump_json(data))
            return True, f"Data exported to {filename}"
        except OSError as e:
            return False, f"Export failed: {str(e)}"


class ColorPrint:
    """Coloured status lines on stderr (plain text when stderr is not a terminal)"""

    COLORS = {
        'red': '\033[91m',
        'green': '\033[92m',
        'yellow': '\033[93m',
        'blue': '\033[94m',
        'white': '\033[97m',
        'reset': '\033[0m'
    }

    enabled = COLOR_OUTPUT

    @staticmethod
    def print(text, color='white'):
        """Print coloured text"""
        stream = sys.stderr
        if ColorPrint.enabled and color in ColorPrint.COLORS and stream.isatty():
            print(f"{ColorPrint.COLORS[color]}{text}{ColorPrint.COLORS['reset']}", file=stream)
        else:
            print(text, file=stream)

    @staticmethod
    def success(text):
        ColorPrint.print(f"✓ {text}", 'green')

    @staticmethod
    def error(text):
        ColorPrint.print(f"✗ {text}", 'red')

    @staticmethod
    def warning(text):
        ColorPrint.print(f"⚠ {text}", 'yellow')

    @staticmethod
    def info(text):
        ColorPrint.print(f"ℹ {text}", 'blue')
