"""
Write the optimal power-distribution curve and optionally serve a demand trace from it
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


def _targets(text):
    return [float(value) for value in text.split(",") if value.strip()]


class Command(BaseCommand):
    help = "Best (W_gen, W_fc) split per W_sys target; --trace evaluates a time_s,power_kw CSV against it"

    def add_arguments(self, parser):
        parser.add_argument("config", nargs="?", help="Run config YAML (default: shipped config)")
        parser.add_argument("--topology", choices=Topology.ALL_TOPOLOGIES)
        parser.add_argument("--measure", choices=Measure.ALL_MEASURES)
        parser.add_argument("--step", type=float, help="Grid spacing, kW (default: explore scan or grid step)")
        parser.add_argument("--targets", type=_targets, help="Comma-separated W_sys targets, kW")
        parser.add_argument("--refine", action="store_true", help="Polish grid picks along iso-power contours")
        parser.add_argument("--trace", help="Demand trace CSV with columns time_s,power_kw")

    @command_errors
    def handle(self, *args, **options):
        run = ConfigService.load(options["config"], overrides={
            "system.topology": options["topology"],
            "system.measure": options["measure"],
        })
        cfg = run.system
        step = options["step"] or ExploreService.default_step(cfg, run.explore)
        emap = ExploreService.build_map(cfg, step, config_data=run.data)
        curve = ExploreService.optimal_split(emap, options["targets"], run.explore["curve_step_kw"], cfg=cfg,
                                             refine=options["refine"] or run.explore["refine"])
        name = f"curve_{cfg.topology}_{cfg.measure}"
        tables = {name: curve.to_frame()}
        summary = {"config_fingerprint": run.fingerprint}
        if options["trace"]:
            trace = ExploreService.trace_eval(cfg, curve, ResultRepository.read_trace(options["trace"]))
            tables[f"trace_{cfg.topology}_{cfg.measure}"] = trace.to_frame()
            summary["trace"] = trace.summary()
        summary["files"] = ResultRepository.write_tables(
            OutputRepository.output_dir(run.output_dir), "curve", run.fingerprint, tables,
            write_manifest=run.write_manifest, stem=name,
            extra={"topology": cfg.topology, "measure": cfg.measure, "grid_step_kw": step,
                   "refined": curve.refined},
        )
        self.stdout.write(json.dumps(summary, indent=2, sort_keys=True))
