"""Per-voyage regulatory compliance costs under the two regulation scenarios.

Under the uniform scenario every vessel treats with its onboard system, so a
voyage carries an equal share of the vessel's annualized system cost plus a
unit treatment cost on the treated volume.

Under the regional stricter scenario, voyages are split three ways by the
vessel's port-call pattern and the voyage destination:

* vessels that never call the stricter region keep the uniform cost;
* voyages of stricter-calling vessels that end in the stricter region pay a
  volume-proportional share of the port-side barge systems plus the higher
  unit treatment cost and a tug attendance fee;
* their remaining voyages split the onboard system cost over the
  non-stricter voyage count only.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import IO, Iterable, Mapping, Optional, Union

from .discharge import DischargeModel, expected_treated_volume
from .errors import (
    DegenerateRate,
    EmptyStricterVolume,
    NegativeBound,
    ZeroNonStricterVoyages,
    ZeroVoyages,
)
from .ingest import VesselHistory, VesselRecord, VoyageRecord, build_history


class Scenario(str, Enum):
    CONSISTENT = "consistent"
    STRICTER_REGIONAL = "stricter_regional"


class VoyageClass(str, Enum):
    NON_STRICTER_VESSEL = "non_stricter_vessel"
    STRICTER_VESSEL_TO_STRICTER = "stricter_vessel_to_stricter"
    STRICTER_VESSEL_TO_NON_STRICTER = "stricter_vessel_to_non_stricter"


class CostEquation(str, Enum):
    ONBOARD_SHARED_ALL = "eq1"
    BARGE_AT_STRICTER = "eq2"
    ONBOARD_SHARED_NON_STRICTER = "eq3"


@dataclass(frozen=True)
class BwtsCostParams:
    """Treatment-system cost parameters, already collapsed to midpoints."""

    onboard_system_pv: float            # capital + install, present value $ per vessel
    onboard_operating_per_year: float   # $/yr per vessel
    standard_treatment_per_tonne: float  # $/t with the onboard system
    barge_hull_pv: float                # present value $ per barge
    barge_unit_pv: float                # present value $ per barge-mounted stricter system
    barge_operating_per_year: float     # $/yr, barge plus mounted system combined
    stricter_treatment_per_tonne: float  # $/t at stricter-region ports
    tug_cost_per_treatment: float       # $ per treatment event
    equipped_stricter_ports: int        # barge systems deployed, one per equipped port
    lifetime_years: int = 30
    discount_rate: float = 0.06
    inflation_rate: float = 0.025
    tug_scales_with_probability: bool = True

    def __post_init__(self):
        for name in (
            "onboard_system_pv",
            "onboard_operating_per_year",
            "standard_treatment_per_tonne",
            "barge_hull_pv",
            "barge_unit_pv",
            "barge_operating_per_year",
            "stricter_treatment_per_tonne",
            "tug_cost_per_treatment",
        ):
            if getattr(self, name) < 0:
                raise NegativeBound(f"{name} must be nonnegative")
        if self.stricter_treatment_per_tonne < self.standard_treatment_per_tonne:
            raise ValueError("stricter treatment unit cost below the standard one")
        if self.lifetime_years < 1:
            raise ValueError("lifetime_years must be at least 1")
        if self.equipped_stricter_ports < 0:
            raise ValueError("equipped_stricter_ports must be nonnegative")


@dataclass(frozen=True)
class AnnualizedCosts:
    """Annual cost figures derived once from the present values."""

    onboard_annual: float       # annualized onboard PV plus operating, $/yr
    barge_system_annual: float  # annualized barge + unit PVs plus operating, per system $/yr


@dataclass(frozen=True)
class VoyageCost:
    voyage_id: str
    scenario: Scenario
    compliance_cost: float
    equation_used: CostEquation


def annualize(
    present_value: float,
    lifetime_years: int,
    discount_rate: float,
    inflation_rate: float,
) -> float:
    """Constant-dollar annuity equivalent of a present value.

    Uses the real rate r = (1+discount)/(1+inflation) - 1; equal discount and
    inflation rates give the straight-line limit PV / lifetime.
    """
    if lifetime_years < 1:
        raise ValueError("lifetime_years must be at least 1")
    if inflation_rate <= -1 or discount_rate <= -1:
        raise DegenerateRate("rates must exceed -100%")
    real = (1.0 + discount_rate) / (1.0 + inflation_rate) - 1.0
    if real < 0:
        raise DegenerateRate("discount rate below inflation rate")
    if real == 0:
        return present_value / lifetime_years
    return present_value * real / (1.0 - (1.0 + real) ** (-lifetime_years))


class ParamSpreadWarning(UserWarning):
    """A low/high pair is wider than the expected spread around its midpoint."""


def midpoint_param(low: float, high: float) -> float:
    """Average of the lowest and highest published estimates.

    Warns when the pair strays outside [0.75, 1.5] times the midpoint, the
    spread the underlying cost studies report.
    """
    if low < 0 or high < 0:
        raise NegativeBound("bounds must be nonnegative")
    if low > high:
        raise ValueError("low bound exceeds high bound")
    mid = (low + high) / 2.0
    if mid > 0 and (low < 0.75 * mid or high > 1.5 * mid):
        warnings.warn(
            f"bounds ({low}, {high}) are wide relative to midpoint {mid}",
            ParamSpreadWarning,
            stacklevel=2,
        )
    return mid


def annualized_costs(params: BwtsCostParams) -> AnnualizedCosts:
    def ann(pv: float) -> float:
        return annualize(pv, params.lifetime_years, params.discount_rate, params.inflation_rate)

    return AnnualizedCosts(
        onboard_annual=ann(params.onboard_system_pv) + params.onboard_operating_per_year,
        barge_system_annual=ann(params.barge_hull_pv)
        + ann(params.barge_unit_pv)
        + params.barge_operating_per_year,
    )


def classify(
    voyage: VoyageRecord,
    history: VesselHistory,
    stricter_region: Iterable[str],
) -> VoyageClass:
    stricter = set(stricter_region)
    if not history.ever_calls_stricter:
        return VoyageClass.NON_STRICTER_VESSEL
    if voyage.dest_country in stricter:
        return VoyageClass.STRICTER_VESSEL_TO_STRICTER
    return VoyageClass.STRICTER_VESSEL_TO_NON_STRICTER


def cost_eq1(
    params: BwtsCostParams,
    annualized: AnnualizedCosts,
    n_v: int,
    v_v: float,
) -> float:
    """Onboard system cost shared over all of the vessel's voyages in the
    year, plus standard treatment of the voyage's volume."""
    if n_v < 1:
        raise ZeroVoyages("voyage count must be at least 1")
    if v_v < 0:
        raise ValueError("treated volume must be nonnegative")
    return annualized.onboard_annual / n_v + params.standard_treatment_per_tonne * v_v


def cost_eq2(
    params: BwtsCostParams,
    annualized: AnnualizedCosts,
    v_v: float,
    v_all_stricter: float,
    tug_scale: float = 1.0,
) -> float:
    """Barge-system cost allocated by volume share among stricter-region
    arrivals, plus stricter treatment and tug attendance."""
    if v_v < 0:
        raise ValueError("treated volume must be nonnegative")
    if v_all_stricter <= 0:
        if v_v > 0:
            raise EmptyStricterVolume("positive volume against empty stricter total")
        share = 0.0
    else:
        share = (
            annualized.barge_system_annual
            * params.equipped_stricter_ports
            * v_v
            / v_all_stricter
        )
    return (
        share
        + params.stricter_treatment_per_tonne * v_v
        + params.tug_cost_per_treatment * tug_scale
    )


def cost_eq3(
    params: BwtsCostParams,
    annualized: AnnualizedCosts,
    n_v_other: int,
    v_v: float,
) -> float:
    """Onboard system cost shared over the vessel's non-stricter voyages
    only, plus standard treatment of the voyage's volume."""
    if n_v_other < 1:
        raise ZeroNonStricterVoyages("no non-stricter voyages to share the onboard cost")
    if v_v < 0:
        raise ValueError("treated volume must be nonnegative")
    return annualized.onboard_annual / n_v_other + params.standard_treatment_per_tonne * v_v


@dataclass(frozen=True)
class FleetCostContext:
    """Fleet-level aggregates computed in one sequential pass; per-voyage
    costing afterwards is pure and freely parallel."""

    year: int
    stricter_region: frozenset
    histories: Mapping[str, VesselHistory]
    volume_by_vessel: Mapping[str, float]     # expected treated volume per voyage
    stricter_volume_total: float              # summed over stricter-destination voyages
    stricter_treatment_count: int
    discharge_probability: float


def build_cost_context(
    voyages: Iterable[VoyageRecord],
    vessels: Mapping[str, VesselRecord],
    model: DischargeModel,
    stricter_region: Iterable[str],
    year: int,
) -> FleetCostContext:
    stricter = frozenset(stricter_region)
    year_voyages = [v for v in voyages if v.depart_time.year == year]
    histories = build_history(year_voyages, stricter, year)
    volume_by_vessel = {
        vessel_id: expected_treated_volume(vessels[vessel_id], model)
        for vessel_id in sorted({v.vessel_id for v in year_voyages})
    }
    stricter_total = 0.0
    stricter_count = 0
    for v in year_voyages:
        if v.dest_country in stricter:
            stricter_total += volume_by_vessel[v.vessel_id]
            stricter_count += 1
    return FleetCostContext(
        year=year,
        stricter_region=stricter,
        histories=histories,
        volume_by_vessel=volume_by_vessel,
        stricter_volume_total=stricter_total,
        stricter_treatment_count=stricter_count,
        discharge_probability=model.discharge_probability,
    )


def scenario_voyage_cost(
    voyage: VoyageRecord,
    voyage_class: VoyageClass,
    scenario: Scenario,
    params: BwtsCostParams,
    annualized: AnnualizedCosts,
    context: FleetCostContext,
) -> VoyageCost:
    history = context.histories[voyage.vessel_id]
    v_v = context.volume_by_vessel[voyage.vessel_id]
    if scenario is Scenario.CONSISTENT or voyage_class is VoyageClass.NON_STRICTER_VESSEL:
        cost = cost_eq1(params, annualized, history.annual_voyages, v_v)
        equation = CostEquation.ONBOARD_SHARED_ALL
    elif voyage_class is VoyageClass.STRICTER_VESSEL_TO_STRICTER:
        tug_scale = context.discharge_probability if params.tug_scales_with_probability else 1.0
        cost = cost_eq2(params, annualized, v_v, context.stricter_volume_total, tug_scale)
        equation = CostEquation.BARGE_AT_STRICTER
    else:
        cost = cost_eq3(params, annualized, history.annual_voyages_non_stricter, v_v)
        equation = CostEquation.ONBOARD_SHARED_NON_STRICTER
    return VoyageCost(
        voyage_id=voyage.voyage_id,
        scenario=scenario,
        compliance_cost=cost,
        equation_used=equation,
    )


def compute_voyage_costs(
    voyages: Iterable[VoyageRecord],
    params: BwtsCostParams,
    context: FleetCostContext,
    scenario: Scenario,
) -> list[VoyageCost]:
    annualized = annualized_costs(params)
    out = []
    for voyage in voyages:
        if voyage.depart_time.year != context.year:
            continue
        cls = classify(voyage, context.histories[voyage.vessel_id], context.stricter_region)
        out.append(scenario_voyage_cost(voyage, cls, scenario, params, annualized, context))
    return out


def fleet_total(voyage_costs: Iterable[VoyageCost]) -> dict[Scenario, float]:
    """Sum per-voyage compliance costs by scenario."""
    totals: dict[Scenario, float] = {}
    for vc in voyage_costs:
        totals[vc.scenario] = totals.get(vc.scenario, 0.0) + vc.compliance_cost
    return totals


# --- parameter file loading ---------------------------------------------------

_PARAM_FIELDS = (
    "onboard_system_pv",
    "onboard_operating_per_year",
    "standard_treatment_per_tonne",
    "barge_hull_pv",
    "barge_unit_pv",
    "barge_operating_per_year",
    "stricter_treatment_per_tonne",
    "tug_cost_per_treatment",
)


def params_from_bounds(
    bounds: Mapping[str, Mapping[str, float]],
    equipped_stricter_ports: int,
    lifetime_years: int = 30,
    discount_rate: float = 0.06,
    inflation_rate: float = 0.025,
    tug_scales_with_probability: bool = True,
) -> BwtsCostParams:
    """Collapse low/high estimate pairs to midpoints and assemble the params."""
    values = {}
    for name in _PARAM_FIELDS:
        if name not in bounds:
            raise KeyError(f"missing cost parameter {name!r}")
        pair = bounds[name]
        values[name] = midpoint_param(float(pair["low"]), float(pair["high"]))
    return BwtsCostParams(
        equipped_stricter_ports=equipped_stricter_ports,
        lifetime_years=lifetime_years,
        discount_rate=discount_rate,
        inflation_rate=inflation_rate,
        tug_scales_with_probability=tug_scales_with_probability,
        **values,
    )


def with_ports(params: BwtsCostParams, equipped_stricter_ports: int) -> BwtsCostParams:
    return replace(params, equipped_stricter_ports=equipped_stricter_ports)


def write_voyage_costs(costs: Iterable[VoyageCost], stream: Union[str, IO]) -> None:
    """Write voyage_costs.csv: voyage_id,scenario,equation,compliance_cost_usd."""
    own = isinstance(stream, str)
    fh: IO = open(stream, "w", encoding="utf-8", newline="") if own else stream
    try:
        writer = csv.writer(fh)
        writer.writerow(["voyage_id", "scenario", "equation", "compliance_cost_usd"])
        for vc in costs:
            writer.writerow(
                [vc.voyage_id, vc.scenario.value, vc.equation_used.value, f"{vc.compliance_cost:.6f}"]
            )
    finally:
        if own:
            fh.close()


def read_voyage_costs(source: Union[str, IO]) -> list[VoyageCost]:
    own = isinstance(source, str)
    fh: IO = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        rows = csv.reader(fh)
        header = next(rows)
        if header != ["voyage_id", "scenario", "equation", "compliance_cost_usd"]:
            raise ValueError(f"unexpected voyage cost header {header!r}")
        return [
            VoyageCost(
                voyage_id=row[0],
                scenario=Scenario(row[1]),
                equation_used=CostEquation(row[2]),
                compliance_cost=float(row[3]),
            )
            for row in rows
            if row
        ]
    finally:
        if own:
            fh.close()
