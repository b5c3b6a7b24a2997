"""
Celery tasks for design exploration
One efficiency-map row per task; rows come back as plain lists so results are
identical whether they run eagerly or on workers.
"""
import logging
from typing import List, Sequence

from celery import shared_task
from redis.exceptions import ConnectionError as RedisConnectionError

from system.domain import SystemConfig
from system.exceptions import InfeasibleOperationError
from system.services import ConfigService, SystemService

from .constants import FEASIBLE

logger = logging.getLogger(__name__)


def map_row(cfg: SystemConfig, w_gen_kw: float, w_fc_values: Sequence[float]) -> List[list]:
    """[w_sys_kw, eta_sys, mask] per W_fc; masked points carry None"""
    row = []
    for w_fc_kw in w_fc_values:
        try:
            result = SystemService.evaluate(cfg, w_gen_kw, w_fc_kw)
        except InfeasibleOperationError as e:
            row.append([None, None, e.code])
            continue
        row.append([result.w_sys_kw, result.eta_sys, FEASIBLE])
    return row


@shared_task(
    bind=True,
    max_retries=3,
    default_retry_delay=60,
    autoretry_for=(RedisConnectionError,),
    retry_backoff=True,  # Shared cache may be briefly unreachable
    retry_backoff_max=600,
)
def evaluate_map_row(self, config_data, w_gen_kw, w_fc_values):
    """
    Evaluate one W_gen row of an efficiency map.
    config_data is validated run-config data (see ConfigService.system_data).
    """
    cfg = ConfigService.build(config_data).system
    row = map_row(cfg, w_gen_kw, w_fc_values)
    masked = sum(1 for point in row if point[2] != FEASIBLE)
    if masked == len(row):
        logger.info(f"❌ Map row W_gen={w_gen_kw} kW has no feasible point")
    else:
        logger.debug(f"✅ Map row W_gen={w_gen_kw} kW: {len(row) - masked} feasible, {masked} masked")
    return row
