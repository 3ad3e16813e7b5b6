"""Value-iteration targets, weight updates and the backup distribution"""
from emcontrol.planning.buffer import BackupBuffer, Transition, TransitionBatch
from emcontrol.planning.targets import (
    aavi_target,
    aavi_target_distribution,
    avi_target,
    evi_target,
    levi_backup,
    levi_backups,
    levi_target,
)
from emcontrol.planning.updates import apply_value_update, plan_round, td_direct_update
from emcontrol.planning.weights import ActionValueWeights, ValueWeights, validate_gamma

__all__ = [
    "ActionValueWeights",
    "BackupBuffer",
    "Transition",
    "TransitionBatch",
    "ValueWeights",
    "aavi_target",
    "aavi_target_distribution",
    "apply_value_update",
    "avi_target",
    "evi_target",
    "levi_backup",
    "levi_backups",
    "levi_target",
    "plan_round",
    "td_direct_update",
    "validate_gamma",
]
