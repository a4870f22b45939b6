"""
Shared base for the project's management commands.

Library code raises the exceptions in core.exceptions; this base turns them
into CommandError exit codes:

    1  input and exact-arithmetic errors, argument parse errors
    2  resource errors (enumeration or ball caps)
    3  internal invariant violations
"""

import argparse
import json
import logging
import sys
from fractions import Fraction

from django.core.management.base import BaseCommand, CommandError

from core import constants
from core.exceptions import (
    ExactArithmeticError,
    FreeGroupError,
    InputError,
    InvariantViolation,
    ResourceError,
)
from core.utils import to_fraction

logger = logging.getLogger(__name__)


def rational_argument(text):
    """argparse type for exact rationals: "1/5", "0.2", "3"."""
    try:
        return to_fraction(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def probability_argument(text):
    """argparse type for a stopping probability strictly between 0 and 1."""
    value = rational_argument(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {text}")
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def non_negative_int(text):
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def jsonable(value):
    """Recursively convert exact values to the JSON schema ("p/q" strings for rationals)."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {key: jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    to_json = getattr(value, "to_json", None)
    if to_json is not None:
        return jsonable(to_json())
    return str(value)


def read_json_file(path):
    """
    Load a JSON document from ``path``.

    Raises:
        InputError: If the file cannot be read or parsed
    """
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


class FreeGroupCommand(BaseCommand):
    """BaseCommand with the project's exit codes and output helpers."""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(constants.EXIT_INPUT_ERROR, f"{parser.prog}: error: {message}\n")
            raise CommandError(f"Error: {message}", returncode=constants.EXIT_INPUT_ERROR)

        parser.error = error
        return parser

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except (InputError, ExactArithmeticError) as exc:
            raise CommandError(str(exc), returncode=constants.EXIT_INPUT_ERROR) from exc
        except ResourceError as exc:
            raise CommandError(str(exc), returncode=constants.EXIT_RESOURCE_ERROR) from exc
        except InvariantViolation as exc:
            logger.error("execute: internal consistency check failed: %s", exc, exc_info=True)
            raise CommandError(str(exc), returncode=constants.EXIT_INTERNAL_ERROR) from exc
        except FreeGroupError as exc:
            logger.error("execute: unexpected error: %s", exc, exc_info=True)
            raise CommandError(str(exc), returncode=constants.EXIT_INTERNAL_ERROR) from exc

    def add_format_argument(self, parser, default=constants.FORMAT_TEXT, choices=None):
        parser.add_argument(
            "--format",
            type=str,
            default=default,
            choices=choices or constants.FORMAT_CHOICES,
            help="Output format",
        )

    def _output_json(self, data):
        self.stdout.write(json.dumps(jsonable(data), indent=2))

    def _output_lines(self, pairs):
        """Write ``label: value`` lines, one per pair."""
        for label, value in pairs:
            self.stdout.write(f"{label}: {value}")
