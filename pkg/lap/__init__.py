"""Linear assignment solvers with dual certificates (Hungarian and auction)."""
from config import NONNEG_TOL
from .certificate import (
    CertificateError,
    LapBatch,
    LapCertificate,
    check_certificate,
    validate_costs,
)
from .hungarian import hungarian_batch, lap_hungarian
from .auction import EpsSchedule, auction_batch, lap_auction, repair_duals
from .oracle import oracle_lap

HUNGARIAN = "hungarian"
AUCTION = "auction"


def lap_solve_batch(M, method: str = HUNGARIAN, tau: float = NONNEG_TOL) -> LapBatch:
    """Solve a (b, m, m) stack with the named method."""
    if method == HUNGARIAN:
        return hungarian_batch(M, tau)
    if method == AUCTION:
        return auction_batch(M, tau=tau)
    raise ValueError(f"unknown LAP method {method!r}")
