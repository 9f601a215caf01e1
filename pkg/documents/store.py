import logging
import os

from config.config import EXPORT_FOLDER
from core.errors import DocumentError
from core.utils import Utils
from documents import codec

logger = logging.getLogger(__name__)


class DocumentStore:
    """Reads and writes documents; relative output paths land in the export folder"""

    def __init__(self, folder=EXPORT_FOLDER):
        self.folder = folder

    def resolve(self, path):
        if os.path.isabs(path) or os.path.dirname(path):
            return path
        return os.path.join(self.folder, path) if self.folder else path

    # --- READING ---

    def read_text(self, path):
        try:
            with open(path, encoding='utf-8') as f:
                return f.read()
        except OSError as e:
            raise DocumentError(f"cannot read {path}: {e.strerror}") from e

    def read(self, path, kind=None):
        """Raw document dict, header checked"""
        doc = codec.loads(self.read_text(path))
        if kind is not None:
            codec.check_header(doc, kind)
        return doc

    def load_typespace(self, path):
        return codec.load_typespace(self.read(path, 'typespace'))

    def load_measure(self, path):
        return codec.load_measure(self.read(path, 'measure'))

    def load_field(self, path):
        return codec.load_field(self.read(path, 'field'))

    def load_expressions(self, path, nature=None, players=None):
        return codec.load_expressions(self.read(path, 'expressions'), nature, players)

    def load_map(self, path, source, target):
        return codec.load_map(self.read(path, 'map'), source, target)

    # --- WRITING ---

    def write(self, doc, path):
        """Write one document canonically; returns (success, message)"""
        target = self.resolve(path)
        success, message = Utils.export_to_json(doc, target)
        if success:
            logger.info("wrote %s document to %s", doc.get('kind'), target)
        else:
            logger.warning(message)
        return success, message

    def save_typespace(self, space, path):
        return self.write(codec.dump_typespace(space), path)

    def save_measure(self, mu, path):
        return self.write(codec.dump_measure(mu), path)

    def save_report(self, title, result, path, ok=True):
        return self.write(codec.dump_report(title, result, ok), path)
