"""Expectation models: ZTEM, GEEM and their alignment with distribution models"""
from emcontrol.models.alignment import (
    GeemAlignedZtem,
    align_ztem_from_distribution,
    align_ztem_from_geem,
    geem_from_distribution,
)
from emcontrol.models.geem import Geem
from emcontrol.models.ztem import ExpectationModel, ModelLossStats, Ztem, write_ztem_csv

__all__ = [
    "ExpectationModel",
    "Geem",
    "GeemAlignedZtem",
    "ModelLossStats",
    "Ztem",
    "align_ztem_from_distribution",
    "align_ztem_from_geem",
    "geem_from_distribution",
    "write_ztem_csv",
]
