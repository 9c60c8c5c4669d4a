from fastapi import APIRouter, Depends

from app import schemas
from app.dependencies import get_settings, service_errors
from app.services import simulation
from app.services.channels import channel_from_spec
from app.settings import Settings

router = APIRouter(prefix="/simulations", tags=["simulations"])
ErrorSchema = schemas.ErrorSchema


@router.post(
    "",
    response_model=schemas.SimulationSummary,
    summary="Seeded Monte Carlo estimate",
    description=(
        "Estimates E[min_i G(X|Y_i)^rho] (decentralized) or E[G(X|Y_1..Y_m)^rho] (centralized). "
        "The same request always returns the same summary."
    ),
    responses={
        400: {"model": ErrorSchema, "description": "Invalid channel or parameters"},
        413: {"model": ErrorSchema, "description": "Rank engine type cap exceeded"},
    },
)
def run_simulation(
    request: schemas.SimulationRequest,
    settings: Settings = Depends(get_settings),
) -> schemas.SimulationSummary:
    run = simulation.simulate_centralized if request.strategy == "centralized" else simulation.simulate_decentralized
    with service_errors():
        p_x, w = channel_from_spec(request.channel)
        return run(
            p_x, w, request.n, request.m, request.rho, request.trials, request.master_seed,
            workers=settings.workers, block_size=settings.sim_block,
        )
