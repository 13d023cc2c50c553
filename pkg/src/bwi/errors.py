"""Exception types shared across the pipeline."""


class BwiError(Exception):
    """Base class for all package errors."""


# --- data ingestion ---------------------------------------------------------

class IngestError(BwiError):
    pass


class MalformedRow(IngestError):
    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        super().__init__(f"malformed row at line {line_no}" + (f": {detail}" if detail else ""))


class DuplicateVesselId(IngestError):
    def __init__(self, vessel_id: str):
        self.vessel_id = vessel_id
        super().__init__(f"duplicate vessel_id {vessel_id!r}")


class UnknownVesselType(IngestError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"unknown vessel_type {token!r}")


class UnknownVessel(IngestError):
    def __init__(self, vessel_id: str):
        self.vessel_id = vessel_id
        super().__init__(f"movement references unknown vessel {vessel_id!r}")


class UnknownPort(IngestError):
    def __init__(self, port_id: str):
        self.port_id = port_id
        super().__init__(f"movement references unknown port {port_id!r}")


class UnknownCountry(IngestError):
    def __init__(self, country: str):
        self.country = country
        super().__init__(f"port country {country!r} not in the configured region set")


class NonPositiveDuration(IngestError):
    def __init__(self, voyage_id: str):
        self.voyage_id = voyage_id
        super().__init__(f"voyage {voyage_id!r} has arrive_time <= depart_time")


# --- compliance cost --------------------------------------------------------

class CostError(BwiError):
    pass


class DegenerateRate(CostError):
    """Discount rate does not exceed inflation; annuity undefined."""


class NegativeBound(CostError):
    """Cost parameter bound below zero."""


class ZeroVoyages(CostError):
    """Vessel has no voyages to share its onboard system cost."""


class ZeroNonStricterVoyages(CostError):
    """A stricter-calling vessel has no non-stricter voyages to carry its
    onboard system cost; the allocation is undefined."""


class EmptyStricterVolume(CostError):
    """Positive treated volume claimed against a zero stricter-region total."""


class MissingBucket(CostError):
    def __init__(self, vessel_type: str, dwt):
        self.vessel_type = vessel_type
        self.dwt = dwt
        super().__init__(f"no daily-cost bucket for {vessel_type} at dwt={dwt}")


# --- economic model ---------------------------------------------------------

class EconomyError(BwiError):
    pass


class BalanceFailure(EconomyError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"accounts not balanced after {iterations} iterations (residual {residual:.3e})")


class ZeroFlowNest(EconomyError):
    """A demand nest has zero benchmark expenditure and cannot be calibrated."""


class UnmappedSector(EconomyError):
    def __init__(self, sector: str):
        self.sector = sector
        super().__init__(f"tradable sector {sector!r} has no vessel-type assignment")


class NoConvergence(EconomyError):
    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"solver stalled after {iterations} iterations (residual {residual:.3e})")


class NonPositivePrice(EconomyError):
    pass


# --- traffic ----------------------------------------------------------------

class ZeroDwt(BwiError):
    """Route has no allocated deadweight tonnage; value/weight ratio undefined."""


# --- orchestration ----------------------------------------------------------

class ConfigError(BwiError):
    pass


class StageError(BwiError):
    """Wraps a failure inside a named pipeline stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")


class WorldMismatch(BwiError):
    """Two report bundles were produced from different worlds."""
