"""Baseline shipping costs and country-pair cost shocks.

A voyage's baseline cost is its daily cost (capital + operating + fuel +
maintenance, looked up by vessel type and DWT bucket) times its duration.
Baseline and compliance costs aggregate to directed
(origin country, destination country, vessel type) cells whose percentage
increases feed the trade model.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Optional, Sequence, Union

from .compliance import Scenario, VoyageCost
from .errors import MissingBucket
from .ingest import VesselRecord, VesselType, VoyageRecord

CellKey = tuple[str, str, VesselType]  # (origin country, dest country, vessel type)


@dataclass(frozen=True)
class DailyCostRow:
    vessel_type: VesselType
    dwt_min: float
    dwt_max: float  # exclusive upper edge; inf for the last bucket
    capital_per_day: float
    operating_per_day: float
    voyage_per_day: float       # fuel and port consumables
    maintenance_per_day: float

    @property
    def total_per_day(self) -> float:
        return (
            self.capital_per_day
            + self.operating_per_day
            + self.voyage_per_day
            + self.maintenance_per_day
        )


class DailyCostTable:
    """Per (vessel type, DWT bucket) daily cost components.

    Buckets of one vessel type must partition (0, inf); a vessel with
    missing DWT uses the type's designated default bucket.
    """

    def __init__(self, rows: Iterable[DailyCostRow], default_dwt: float = 50_000.0):
        self._rows: dict[VesselType, list[DailyCostRow]] = {}
        self.default_dwt = default_dwt
        for row in rows:
            if min(
                row.capital_per_day,
                row.operating_per_day,
                row.voyage_per_day,
                row.maintenance_per_day,
            ) < 0:
                raise ValueError("daily cost components must be nonnegative")
            self._rows.setdefault(row.vessel_type, []).append(row)
        for vtype, buckets in self._rows.items():
            buckets.sort(key=lambda r: r.dwt_min)
            edge = 0.0
            for b in buckets:
                if b.dwt_min != edge:
                    raise ValueError(f"buckets for {vtype.value} do not partition (0, inf)")
                if b.dwt_max <= b.dwt_min:
                    raise ValueError(f"empty bucket for {vtype.value}")
                edge = b.dwt_max
            if edge != float("inf"):
                raise ValueError(f"buckets for {vtype.value} do not reach inf")

    def lookup(self, vessel_type: VesselType, dwt: Optional[float]) -> DailyCostRow:
        if vessel_type not in self._rows:
            raise MissingBucket(vessel_type.value, dwt)
        key = self.default_dwt if dwt is None else dwt
        for row in self._rows[vessel_type]:
            if row.dwt_min <= key < row.dwt_max:
                return row
        raise MissingBucket(vessel_type.value, dwt)

    def rows(self) -> list[DailyCostRow]:
        out = []
        for vtype in sorted(self._rows, key=lambda t: t.value):
            out.extend(self._rows[vtype])
        return out

    def component_shares(self, weights: Optional[Mapping[VesselType, float]] = None) -> dict[str, float]:
        """Fleet-weighted shares of the four components, for sanity checks
        against the conventional operating/maintenance/voyage/capital split."""
        tot = {"capital": 0.0, "operating": 0.0, "voyage": 0.0, "maintenance": 0.0}
        for row in self.rows():
            w = 1.0 if weights is None else weights.get(row.vessel_type, 0.0)
            tot["capital"] += w * row.capital_per_day
            tot["operating"] += w * row.operating_per_day
            tot["voyage"] += w * row.voyage_per_day
            tot["maintenance"] += w * row.maintenance_per_day
        s = sum(tot.values())
        return {k: (v / s if s > 0 else 0.0) for k, v in tot.items()}


def voyage_baseline_cost(
    voyage: VoyageRecord,
    vessel: VesselRecord,
    table: DailyCostTable,
) -> float:
    """Daily cost components summed, times the voyage duration in days."""
    row = table.lookup(vessel.vessel_type, vessel.dwt)
    return row.total_per_day * voyage.duration_days


@dataclass(frozen=True)
class ShockCell:
    origin: str
    dest: str
    vessel_type: VesselType
    baseline_total: float
    compliance_total: dict  # Scenario -> $
    voyage_count: int

    def pct_change(self, scenario: Scenario) -> float:
        return 100.0 * self.compliance_total[scenario] / self.baseline_total


class CostShockMatrix:
    """Directed (origin, dest, vessel type) cells with baseline totals,
    per-scenario compliance totals, and percentage shocks. Cells exist only
    where voyages occurred."""

    def __init__(self, cells: Mapping[CellKey, ShockCell]):
        self._cells = dict(cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __contains__(self, key: CellKey) -> bool:
        return key in self._cells

    def cell(self, origin: str, dest: str, vessel_type: VesselType) -> ShockCell:
        return self._cells[(origin, dest, vessel_type)]

    def get(self, origin: str, dest: str, vessel_type: VesselType) -> Optional[ShockCell]:
        return self._cells.get((origin, dest, vessel_type))

    def cells(self) -> list[ShockCell]:
        return [self._cells[k] for k in sorted(self._cells, key=lambda k: (k[0], k[1], k[2].value))]

    def pct(self, origin: str, dest: str, vessel_type: VesselType, scenario: Scenario) -> Optional[float]:
        c = self._cells.get((origin, dest, vessel_type))
        return None if c is None else c.pct_change(scenario)


def aggregate_pairs(
    voyages: Sequence[VoyageRecord],
    vessels: Mapping[str, VesselRecord],
    baseline_costs: Mapping[str, float],
    voyage_costs: Iterable[VoyageCost],
) -> CostShockMatrix:
    """Sum baseline and compliance costs over voyages of each directed cell.

    Every voyage must carry a baseline cost and a compliance cost under each
    scenario present in ``voyage_costs``. Summation follows the sorted
    voyage order, so results do not depend on input ordering.
    """
    compliance: dict[str, dict[Scenario, float]] = {}
    scenarios = set()
    for vc in voyage_costs:
        compliance.setdefault(vc.voyage_id, {})[vc.scenario] = vc.compliance_cost
        scenarios.add(vc.scenario)

    ordered = sorted(voyages, key=lambda v: v.voyage_id)
    cells: dict[CellKey, dict] = {}
    for v in ordered:
        if v.voyage_id not in baseline_costs:
            raise KeyError(f"voyage {v.voyage_id!r} missing a baseline cost")
        if v.voyage_id not in compliance:
            raise KeyError(f"voyage {v.voyage_id!r} missing compliance costs")
        per_scenario = compliance[v.voyage_id]
        missing = scenarios - set(per_scenario)
        if missing:
            raise KeyError(f"voyage {v.voyage_id!r} missing scenarios {sorted(s.value for s in missing)}")
        key = (v.origin_country, v.dest_country, vessels[v.vessel_id].vessel_type)
        acc = cells.setdefault(
            key,
            {"baseline": 0.0, "compliance": {s: 0.0 for s in scenarios}, "count": 0},
        )
        acc["baseline"] += baseline_costs[v.voyage_id]
        for s, c in per_scenario.items():
            acc["compliance"][s] += c
        acc["count"] += 1

    return CostShockMatrix(
        {
            key: ShockCell(
                origin=key[0],
                dest=key[1],
                vessel_type=key[2],
                baseline_total=acc["baseline"],
                compliance_total=dict(acc["compliance"]),
                voyage_count=acc["count"],
            )
            for key, acc in cells.items()
        }
    )


def displayed_pct(pct: float) -> int:
    """Reporting convention: round to integer, but positive changes below
    one percent display as 1."""
    if pct <= 0:
        return 0
    return max(1, round(pct))


def displayed_thousands(dollars: float) -> int:
    return round(dollars / 1000.0)


def shock_report(
    matrix: CostShockMatrix,
    threshold_pct: float,
    scenarios: Sequence[Scenario] = (Scenario.CONSISTENT, Scenario.STRICTER_REGIONAL),
) -> str:
    """Markdown table of cells whose cost increase reaches the threshold for
    any vessel type in either scenario. Percentages are rounded to integers
    and dollar changes to thousands; both small-absolute/large-relative and
    large-absolute/small-relative changes stay visible."""
    if threshold_pct < 0:
        raise ValueError("threshold must be nonnegative")
    pairs: dict[tuple[str, str], list[ShockCell]] = {}
    for cell in matrix.cells():
        pairs.setdefault((cell.origin, cell.dest), []).append(cell)

    vtypes = sorted({c.vessel_type for c in matrix.cells()}, key=lambda t: t.value)
    header = ["Pair"]
    for vt in vtypes:
        for s in scenarios:
            tag = "S1" if s is Scenario.CONSISTENT else "S2"
            header += [f"{vt.value} {tag} %", f"{vt.value} {tag} $k"]

    lines = [
        "# Shipping cost changes by country pair and vessel type",
        "",
        f"Rows shown reach a {threshold_pct:g}% cost increase for at least one "
        "vessel type in one scenario. Percentages rounded to integers "
        "(positive values below 1% shown as 1); dollar changes rounded to thousands. "
        "Pairs are directed: A/B aggregates voyages from A to B only.",
        "",
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]

    n_rows = 0
    for (origin, dest), cell_list in sorted(pairs.items()):
        by_type = {c.vessel_type: c for c in cell_list}
        include = any(
            c.pct_change(s) >= threshold_pct for c in cell_list for s in scenarios if s in c.compliance_total
        )
        if not include:
            continue
        n_rows += 1
        row = [f"{origin}/{dest}"]
        for vt in vtypes:
            cell = by_type.get(vt)
            for s in scenarios:
                if cell is None or s not in cell.compliance_total:
                    row += ["-", "-"]
                else:
                    row += [
                        str(displayed_pct(cell.pct_change(s))),
                        str(displayed_thousands(cell.compliance_total[s])),
                    ]
        lines.append("| " + " | ".join(row) + " |")

    if n_rows == 0:
        lines.append("| (no pair reaches the threshold) " + "| " * (len(header) - 1) + "|")
    lines.append("")
    return "\n".join(lines)


# --- CSV interfaces -----------------------------------------------------------

DAILY_COST_HEADER = [
    "vessel_type",
    "dwt_min",
    "dwt_max",
    "capital_per_day",
    "operating_per_day",
    "voyage_per_day",
    "maintenance_per_day",
]


def write_daily_costs(table: DailyCostTable, stream: Union[str, IO]) -> None:
    own = isinstance(stream, str)
    fh: IO = open(stream, "w", encoding="utf-8", newline="") if own else stream
    try:
        writer = csv.writer(fh)
        writer.writerow(DAILY_COST_HEADER)
        for row in table.rows():
            writer.writerow(
                [
                    row.vessel_type.value,
                    f"{row.dwt_min:g}",
                    "inf" if row.dwt_max == float("inf") else f"{row.dwt_max:g}",
                    f"{row.capital_per_day:.6f}",
                    f"{row.operating_per_day:.6f}",
                    f"{row.voyage_per_day:.6f}",
                    f"{row.maintenance_per_day:.6f}",
                ]
            )
    finally:
        if own:
            fh.close()


def read_daily_costs(source: Union[str, IO], default_dwt: float = 50_000.0) -> DailyCostTable:
    own = isinstance(source, str)
    fh: IO = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        rows = csv.reader(fh)
        header = next(rows)
        if header != DAILY_COST_HEADER:
            raise ValueError(f"unexpected daily cost header {header!r}")
        parsed = [
            DailyCostRow(
                vessel_type=VesselType.parse(r[0]),
                dwt_min=float(r[1]),
                dwt_max=float(r[2]),
                capital_per_day=float(r[3]),
                operating_per_day=float(r[4]),
                voyage_per_day=float(r[5]),
                maintenance_per_day=float(r[6]),
            )
            for r in rows
            if r
        ]
        return DailyCostTable(parsed, default_dwt=default_dwt)
    finally:
        if own:
            fh.close()


SHOCKS_HEADER = ["origin", "dest", "vessel_type", "scenario", "pct_change"]


def write_shocks(matrix: CostShockMatrix, stream: Union[str, IO]) -> None:
    """Write shocks.csv: one row per cell and scenario."""
    own = isinstance(stream, str)
    fh: IO = open(stream, "w", encoding="utf-8", newline="") if own else stream
    try:
        writer = csv.writer(fh)
        writer.writerow(SHOCKS_HEADER)
        for cell in matrix.cells():
            for scenario in sorted(cell.compliance_total, key=lambda s: s.value):
                writer.writerow(
                    [
                        cell.origin,
                        cell.dest,
                        cell.vessel_type.value,
                        scenario.value,
                        f"{cell.pct_change(scenario):.10f}",
                    ]
                )
    finally:
        if own:
            fh.close()


def read_shocks(source: Union[str, IO]) -> dict[tuple[str, str, VesselType, Scenario], float]:
    own = isinstance(source, str)
    fh: IO = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        rows = csv.reader(fh)
        header = next(rows)
        if header != SHOCKS_HEADER:
            raise ValueError(f"unexpected shocks header {header!r}")
        return {
            (r[0], r[1], VesselType.parse(r[2]), Scenario(r[3])): float(r[4])
            for r in rows
            if r
        }
    finally:
        if own:
            fh.close()
