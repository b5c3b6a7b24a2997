"""
Write an efficiency map over the (W_gen, W_fc) grid
"""
import json

from django.core.management.base import BaseCommand

from explore.repositories import ResultRepository
from explore.services import ExploreService
from recovery.constants import Measure
from system.constants import Topology
from system.decorators import command_errors
from system.repositories import OutputRepository
from system.services import ConfigService


class Command(BaseCommand):
    help = "Evaluate W_sys and eta_sys on a grid; infeasible points are masked with a reason code"

    def add_arguments(self, parser):
        parser.add_argument("config", nargs="?", help="Run config YAML (default: shipped config)")
        parser.add_argument("--topology", choices=Topology.ALL_TOPOLOGIES)
        parser.add_argument("--measure", choices=Measure.ALL_MEASURES)
        parser.add_argument("--step", type=float, help="Grid spacing, kW (default: explore scan or grid step)")

    @command_errors
    def handle(self, *args, **options):
        run = ConfigService.load(options["config"], overrides={
            "system.topology": options["topology"],
            "system.measure": options["measure"],
        })
        cfg = run.system
        step = options["step"] or ExploreService.default_step(cfg, run.explore)
        emap = ExploreService.build_map(cfg, step, config_data=run.data)
        name = f"map_{cfg.topology}_{cfg.measure}"
        paths = ResultRepository.write_tables(
            OutputRepository.output_dir(run.output_dir), "map", run.fingerprint, {name: emap.to_frame()},
            write_manifest=run.write_manifest, stem=name,
            extra={"topology": cfg.topology, "measure": cfg.measure, "grid_step_kw": step},
        )
        best = ExploreService.extremes(emap)
        self.stdout.write(json.dumps({"config_fingerprint": run.fingerprint, "files": paths,
                                      "extremes": best.as_dict()}, indent=2, sort_keys=True))
