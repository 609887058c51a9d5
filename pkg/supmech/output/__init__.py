"""Output writers sub-package."""
from . import json_writer, csv_writer, text_writer
