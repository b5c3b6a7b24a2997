"""
Decorators for management commands.

Toolkit errors become a machine-readable error object on standard output and
a CommandError carrying the family's exit code.
"""
import json
import logging
from functools import wraps

from django.core.management.base import CommandError

from .exceptions import AmmoniaPowerError

logger = logging.getLogger(__name__)


def error_payload(error: AmmoniaPowerError) -> str:
    return json.dumps({"error": error.as_dict()}, sort_keys=True)


def command_errors(handle):
    """Wrap BaseCommand.handle: exit 2 on config errors, 1 on everything else"""
    @wraps(handle)
    def wrapped(self, *args, **options):
        try:
            return handle(self, *args, **options)
        except AmmoniaPowerError as e:
            logger.error(f"❌ {type(e).__name__} in {e.stage or 'config'}: {e}")
            self.stdout.write(error_payload(e))
            raise CommandError(str(e), returncode=e.exit_code)
    return wrapped
