from fastapi import APIRouter, HTTPException

from app.core.config import settings
from app.models.run_model import (
    CompileRequest,
    CompileResponse,
    RunReport,
    SimulateRequest,
    VerifyReport,
    VerifyRequest,
)
from app.services.compile_service import compile_target, schedule_footprint
from app.services.io_service import parse_target, parse_verify_target
from app.services.lattice_service import simulate_report
from app.services.verify_service import verify_against
from app.utils.logger import logger

router = APIRouter()


def _guard_modes(modes: int) -> None:
    if modes > settings.MAX_API_MODES:
        raise HTTPException(status_code=400, detail=f"Maximum mode count is {settings.MAX_API_MODES}")


# ----------------------------
# Compile
# ----------------------------
@router.post("/compile", response_model=CompileResponse)
def compile_endpoint(request: CompileRequest):
    """Compile a unitary, Bogoliubov pair or shear matrix into a schedule."""
    target = parse_target(request.target, request.target_kind)
    _guard_modes(target.dim if request.target_kind == "unitary" else target.modes)
    schedule = compile_target(target, request.layout)
    logger.info("Compile request served", target_kind=request.target_kind, layout=request.layout)
    return CompileResponse(summary=schedule_footprint(schedule), schedule=schedule)


# ----------------------------
# Verify
# ----------------------------
@router.post("/verify", response_model=VerifyReport)
def verify_endpoint(request: VerifyRequest):
    """Compose the schedule's ideal map and compare it with the target."""
    _guard_modes(request.schedule.modes)
    target = parse_verify_target(request.target, request.target_kind)
    return verify_against(request.schedule, target, request.tolerance)


# ----------------------------
# Simulate
# ----------------------------
@router.post("/simulate", response_model=RunReport)
def simulate_endpoint(request: SimulateRequest):
    """Run the schedule on a finite-squeezing lattice with the reference input."""
    _guard_modes(request.schedule.modes)
    return simulate_report(request.schedule, request.r_db, request.seed)
