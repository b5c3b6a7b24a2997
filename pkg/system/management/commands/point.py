"""
Evaluate one operating point and print its SystemResult JSON
"""
import json

from django.core.management.base import BaseCommand

from recovery.constants import Measure
from system.constants import Topology
from system.decorators import command_errors
from system.serializers import SystemResultSerializer
from system.services import ConfigService, SystemService


class Command(BaseCommand):
    help = "Evaluate W_sys and eta_sys at one (W_gen, W_fc) operating point"

    def add_arguments(self, parser):
        parser.add_argument("config", nargs="?", help="Run config YAML (default: shipped config)")
        parser.add_argument("--topology", choices=Topology.ALL_TOPOLOGIES)
        parser.add_argument("--measure", choices=Measure.ALL_MEASURES)
        parser.add_argument("--wgen", type=float, default=0.0, help="Generator output target, kW")
        parser.add_argument("--wfc", type=float, default=0.0, help="Fuel cell output target, kW")

    @command_errors
    def handle(self, *args, **options):
        run = ConfigService.load(options["config"], overrides={
            "system.topology": options["topology"],
            "system.measure": options["measure"],
        })
        result = SystemService.evaluate(run.system, options["wgen"], options["wfc"])
        payload = dict(SystemResultSerializer(result).data)
        payload["config_fingerprint"] = run.fingerprint
        self.stdout.write(json.dumps(payload, indent=2, sort_keys=True))
