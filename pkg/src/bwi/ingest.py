"""Loading, validation, and indexing of vessel movement data.

Input files are plain UTF-8 CSV with a header row:

* ``vessels.csv``:   ``vessel_id,vessel_type,dwt,build_year`` (dwt may be empty)
* ``ports.csv``:     ``port_id,country`` (ISO-3 style codes)
* ``movements.csv``: ``voyage_id,vessel_id,origin_port,dest_port,depart_time,arrive_time``
  with RFC 3339 timestamps.

Only international voyages are kept: moves whose origin and destination
country coincide are dropped (and counted).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Iterable, Mapping, Optional, Union

from .errors import (
    DuplicateVesselId,
    MalformedRow,
    NonPositiveDuration,
    UnknownCountry,
    UnknownPort,
    UnknownVessel,
    UnknownVesselType,
)

SECONDS_PER_DAY = 86400.0


class VesselType(str, Enum):
    CONTAINER = "Container"
    BULK = "Bulk"
    TANKER = "Tanker"
    LIVESTOCK_CARRIER = "LivestockCarrier"
    REFRIGERATION = "Refrigeration"
    GENERAL_CARGO = "GeneralCargo"
    VEHICLE_CARRIER = "VehicleCarrier"
    GAS_CARRIER = "GasCarrier"

    @classmethod
    def parse(cls, token: str) -> "VesselType":
        try:
            return cls(token)
        except ValueError:
            raise UnknownVesselType(token) from None


@dataclass(frozen=True)
class VesselRecord:
    vessel_id: str
    vessel_type: VesselType
    dwt: Optional[float]  # tonnes; None when not reported
    build_year: int


@dataclass(frozen=True)
class PortRecord:
    port_id: str
    country: str


@dataclass(frozen=True)
class VoyageRecord:
    voyage_id: str
    vessel_id: str
    origin_port: str
    dest_port: str
    origin_country: str
    dest_country: str
    depart_time: datetime
    arrive_time: datetime
    duration_days: float


@dataclass(frozen=True)
class VesselHistory:
    """Per-vessel voyage counts for one calendar year.

    ``annual_voyages`` counts every international voyage of the vessel in
    the year; ``annual_voyages_non_stricter`` counts those whose destination
    lies outside the stricter region.
    """

    vessel_id: str
    year: int
    annual_voyages: int
    annual_voyages_non_stricter: int

    @property
    def ever_calls_stricter(self) -> bool:
        return self.annual_voyages > self.annual_voyages_non_stricter


class VesselRegistry(Mapping[str, VesselRecord]):
    def __init__(self, records: Iterable[VesselRecord]):
        self._by_id: dict[str, VesselRecord] = {}
        for rec in records:
            if rec.vessel_id in self._by_id:
                raise DuplicateVesselId(rec.vessel_id)
            self._by_id[rec.vessel_id] = rec

    def __getitem__(self, vessel_id: str) -> VesselRecord:
        return self._by_id[vessel_id]

    def __iter__(self):
        return iter(self._by_id)

    def __len__(self) -> int:
        return len(self._by_id)


class PortRegistry(Mapping[str, PortRecord]):
    def __init__(self, records: Iterable[PortRecord]):
        self._by_id = {rec.port_id: rec for rec in records}

    def __getitem__(self, port_id: str) -> PortRecord:
        return self._by_id[port_id]

    def __iter__(self):
        return iter(self._by_id)

    def __len__(self) -> int:
        return len(self._by_id)

    def country_of(self, port_id: str) -> str:
        if port_id not in self._by_id:
            raise UnknownPort(port_id)
        return self._by_id[port_id].country


@dataclass(frozen=True)
class VoyageSet:
    """International voyages sorted by (vessel_id, depart_time)."""

    voyages: tuple[VoyageRecord, ...]
    dropped_domestic: int

    def __len__(self) -> int:
        return len(self.voyages)

    def __iter__(self):
        return iter(self.voyages)

    def for_year(self, year: int) -> tuple[VoyageRecord, ...]:
        return tuple(v for v in self.voyages if v.depart_time.year == year)


Source = Union[str, bytes, IO]


def _reader(source: Source, expected: list[str]) -> Iterable[tuple[int, list[str]]]:
    """Yield (line_no, cells) for each data row, checking the header."""
    if isinstance(source, bytes):
        stream: IO = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        stream = open(source, "r", encoding="utf-8", newline="")
    elif hasattr(source, "read"):
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        stream = io.StringIO(raw)
    else:
        raise TypeError(f"unsupported source {type(source)!r}")
    with stream:
        rows = csv.reader(stream)
        try:
            header = next(rows)
        except StopIteration:
            raise MalformedRow(1, "missing header row") from None
        if [h.strip() for h in header] != expected:
            raise MalformedRow(1, f"header {header!r}, expected {expected!r}")
        for line_no, cells in enumerate(rows, start=2):
            if not cells or all(c.strip() == "" for c in cells):
                continue
            if len(cells) != len(expected):
                raise MalformedRow(line_no, f"{len(cells)} fields, expected {len(expected)}")
            yield line_no, cells


def parse_rfc3339(token: str, line_no: int) -> datetime:
    # Python 3.10 fromisoformat does not accept the trailing Z.
    text = token.strip()
    if text.endswith("Z") or text.endswith("z"):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        raise MalformedRow(line_no, f"bad timestamp {token!r}") from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def load_vessels(source: Source) -> VesselRegistry:
    """Parse vessels.csv. Rows with an empty dwt cell are kept with dwt=None."""
    records = []
    for line_no, cells in _reader(source, ["vessel_id", "vessel_type", "dwt", "build_year"]):
        vessel_id, type_token, dwt_token, year_token = (c.strip() for c in cells)
        if not vessel_id:
            raise MalformedRow(line_no, "empty vessel_id")
        vtype = VesselType.parse(type_token)
        dwt: Optional[float]
        if dwt_token == "":
            dwt = None
        else:
            try:
                dwt = float(dwt_token)
            except ValueError:
                raise MalformedRow(line_no, f"bad dwt {dwt_token!r}") from None
            if dwt <= 0:
                raise MalformedRow(line_no, f"non-positive dwt {dwt}")
        try:
            build_year = int(year_token)
        except ValueError:
            raise MalformedRow(line_no, f"bad build_year {year_token!r}") from None
        records.append(VesselRecord(vessel_id, vtype, dwt, build_year))
    return VesselRegistry(records)


def load_ports(source: Source, allowed_countries: Optional[Iterable[str]] = None) -> PortRegistry:
    """Parse ports.csv, optionally restricting countries to a configured set."""
    allowed = set(allowed_countries) if allowed_countries is not None else None
    records = []
    seen = set()
    for line_no, cells in _reader(source, ["port_id", "country"]):
        port_id, country = (c.strip() for c in cells)
        if not port_id or not country:
            raise MalformedRow(line_no, "empty port_id or country")
        if port_id in seen:
            raise MalformedRow(line_no, f"duplicate port_id {port_id!r}")
        seen.add(port_id)
        if allowed is not None and country not in allowed:
            raise UnknownCountry(country)
        records.append(PortRecord(port_id, country))
    return PortRegistry(records)


def load_movements(source: Source, vessels: VesselRegistry, ports: PortRegistry) -> VoyageSet:
    """Parse movements.csv, drop domestic moves, and sort deterministically.

    Unparseable timestamps and non-positive durations are hard errors:
    silently skipping rows would corrupt the per-vessel voyage counts that
    the cost model divides by.
    """
    kept: list[VoyageRecord] = []
    dropped = 0
    for line_no, cells in _reader(
        source,
        ["voyage_id", "vessel_id", "origin_port", "dest_port", "depart_time", "arrive_time"],
    ):
        voyage_id, vessel_id, origin_port, dest_port, dep_tok, arr_tok = (c.strip() for c in cells)
        if not voyage_id:
            raise MalformedRow(line_no, "empty voyage_id")
        if vessel_id not in vessels:
            raise UnknownVessel(vessel_id)
        origin_country = ports.country_of(origin_port)
        dest_country = ports.country_of(dest_port)
        depart = parse_rfc3339(dep_tok, line_no)
        arrive = parse_rfc3339(arr_tok, line_no)
        if arrive <= depart:
            raise NonPositiveDuration(voyage_id)
        if origin_country == dest_country:
            dropped += 1
            continue
        duration_days = (arrive - depart).total_seconds() / SECONDS_PER_DAY
        kept.append(
            VoyageRecord(
                voyage_id=voyage_id,
                vessel_id=vessel_id,
                origin_port=origin_port,
                dest_port=dest_port,
                origin_country=origin_country,
                dest_country=dest_country,
                depart_time=depart,
                arrive_time=arrive,
                duration_days=duration_days,
            )
        )
    kept.sort(key=lambda v: (v.vessel_id, v.depart_time, v.voyage_id))
    return VoyageSet(voyages=tuple(kept), dropped_domestic=dropped)


def build_history(
    voyages: Iterable[VoyageRecord],
    stricter_region: Iterable[str],
    year: int,
) -> dict[str, VesselHistory]:
    """Count each vessel's voyages in ``year``, split by stricter destination.

    Voyages are assigned to the calendar year of their departure.
    """
    stricter = set(stricter_region)
    total: dict[str, int] = {}
    non_stricter: dict[str, int] = {}
    for v in voyages:
        if v.depart_time.year != year:
            continue
        total[v.vessel_id] = total.get(v.vessel_id, 0) + 1
        if v.dest_country not in stricter:
            non_stricter[v.vessel_id] = non_stricter.get(v.vessel_id, 0) + 1
    return {
        vessel_id: VesselHistory(
            vessel_id=vessel_id,
            year=year,
            annual_voyages=n,
            annual_voyages_non_stricter=non_stricter.get(vessel_id, 0),
        )
        for vessel_id, n in sorted(total.items())
    }
