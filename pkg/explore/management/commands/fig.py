"""
Write the data behind one study figure as CSV plus a manifest
"""
import json

from django.core.management.base import BaseCommand

from explore.constants import Figure
from explore.figures import FigureService
from explore.repositories import ResultRepository
from system.decorators import command_errors
from system.repositories import OutputRepository
from system.services import ConfigService


class Command(BaseCommand):
    help = "Reproduce the data of a figure (fig6, fig8-fig15) under the given config"

    def add_arguments(self, parser):
        parser.add_argument("figure", choices=Figure.ALL_FIGURES)
        parser.add_argument("config", nargs="?", help="Run config YAML (default: shipped config)")

    @command_errors
    def handle(self, *args, **options):
        run = ConfigService.load(options["config"])
        figure = options["figure"]
        tables = FigureService.build(figure, run)
        paths = ResultRepository.write_tables(
            OutputRepository.output_dir(run.output_dir), figure, run.fingerprint, tables,
            write_manifest=run.write_manifest, extra={"figure": figure},
        )
        self.stdout.write(json.dumps({"config_fingerprint": run.fingerprint, "files": paths}, indent=2))
