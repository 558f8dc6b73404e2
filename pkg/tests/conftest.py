"""Shared baseline fixtures: the default operating point used across the
test suite (annular sector 25-100 m, 0.5 deg sector, 28 deg beam,
10-element array, squared-distance path loss, 6 + 0.5 BPCU targets with
a 1/4-3/4 power split on ranks 20/30)."""
from math import radians

import pytest

from airnoma import (
    ChannelModel,
    DistancePowerLaw,
    HppConfig,
    LinkBudget,
    NomaPairConfig,
    OrderStatDistributions,
    RankPair,
    RegionGeometry,
)


def make_geometry(altitude=50.0, inner=25.0, outer=100.0,
                  sector_width_deg=0.5, beamwidth_deg=28.0) -> RegionGeometry:
    return RegionGeometry(inner_radius=inner, outer_radius=outer,
                          half_angle=radians(0.5 * sector_width_deg),
                          altitude=altitude,
                          vertical_beamwidth=radians(beamwidth_deg))


def make_model(geom: RegionGeometry, array_size=10,
               path_loss=None) -> ChannelModel:
    return ChannelModel(path_loss=path_loss or DistancePowerLaw(2.0),
                        array_size=array_size,
                        sector_half_angle=geom.half_angle)


def make_noma(power_dbm=10.0, strong=20, weak=30) -> NomaPairConfig:
    return NomaPairConfig(pair=RankPair(strong, weak),
                          budget=LinkBudget(tx_power_dbm=power_dbm,
                                            noise_dbm=-35.0))


@pytest.fixture(scope="session")
def geom50() -> RegionGeometry:
    return make_geometry(altitude=50.0)


@pytest.fixture(scope="session")
def hpp50(geom50) -> HppConfig:
    return HppConfig(geometry=geom50, density=1.0)


@pytest.fixture(scope="session")
def model50(geom50) -> ChannelModel:
    return make_model(geom50)


@pytest.fixture(scope="session")
def dists50(hpp50) -> OrderStatDistributions:
    return OrderStatDistributions.from_config(hpp50, RankPair(20, 30))
