"""
Sweep the engine share r_ICE of a composite plant at fixed total rated power
"""
import json

from django.core.management.base import BaseCommand

from explore.constants import SIZING_LABEL
from explore.repositories import ResultRepository
from explore.services import ExploreService
from system.decorators import command_errors
from system.repositories import OutputRepository
from system.services import ConfigService


def _fractions(text):
    return [float(value) for value in text.split(",") if value.strip()]


class Command(BaseCommand):
    help = "Measure-IV max efficiency, max power and load factor per r_ICE"

    def add_arguments(self, parser):
        parser.add_argument("config", nargs="?", help="Run config YAML (default: shipped config)")
        parser.add_argument("--r-values", type=_fractions, help="Comma-separated r_ICE values in (0, 1)")
        parser.add_argument("--total-rated", type=float, help="Total rated power, kW")
        parser.add_argument("--step", type=float, help="Grid spacing, kW (default: explore.grid_step_kw)")

    @command_errors
    def handle(self, *args, **options):
        run = ConfigService.load(options["config"], overrides={
            "explore.r_values": options["r_values"],
            "composite.total_rated_kw": options["total_rated"],
        })
        step = options["step"] or run.explore["grid_step_kw"]
        rows = ExploreService.sizing_sweep(run.system, run.explore["r_values"], run.system.total_rated_kw, step,
                                           config_data=run.data)
        frame = ExploreService.sweep_frame(rows)
        paths = ResultRepository.write_tables(
            OutputRepository.output_dir(run.output_dir), "sweep", run.fingerprint, {"sweep": frame},
            write_manifest=run.write_manifest, extra={"label": SIZING_LABEL, "grid_step_kw": step},
        )
        self.stdout.write(json.dumps({"config_fingerprint": run.fingerprint, "files": paths,
                                      "rows": [row.as_dict() for row in rows]}, indent=2, sort_keys=True))
