from typing import List

from fastapi import APIRouter, status

from app import schemas
from app.dependencies import service_errors
from app.services import exponents
from app.services.channels import channel_from_spec

router = APIRouter(prefix="/exponents", tags=["exponents"])
ErrorSchema = schemas.ErrorSchema


@router.post(
    "",
    response_model=schemas.ExponentResult,
    status_code=status.HTTP_200_OK,
    summary="Guesswork exponent of a channel",
    description=(
        "Centralized, decentralized or single-agent exponent for bec/bsc by closed form "
        "(cross-checked by a scalar optimizer) or for a custom channel by the type-grid optimizer."
    ),
    responses={
        400: {
            "model": ErrorSchema,
            "description": "Invalid parameters or optimizer disagreement",
            "content": {
                "application/json": {
                    "example": {"detail": "unknown combination family='custom' strategy='none'"}
                }
            },
        },
        413: {
            "model": ErrorSchema,
            "description": "Alphabet too large for the type-grid optimizer",
            "content": {
                "application/json": {
                    "example": {"detail": "dmc_alphabet exceeded: required 5, cap 4"}
                }
            },
        },
    },
)
def compute_exponent(request: schemas.ExponentRequest) -> schemas.ExponentResult:
    with service_errors():
        p_x, w = channel_from_spec(request.channel)
        return exponents.exponent_for(
            request.channel.family,
            request.strategy,
            request.m,
            request.rho,
            param=request.channel.param,
            p_x=p_x,
            w=w,
            resolution=request.resolution,
            base=request.base,
        )


@router.post(
    "/sweep",
    response_model=List[schemas.SweepRow],
    summary="Exponent curves over the channel parameter",
    description="Grid of epsilon (bec) or delta (bsc) on [0, 1]: centralized pair and decentralized groups m = 1..max_m.",
    responses={400: {"model": ErrorSchema, "description": "Invalid sweep parameters"}},
)
def sweep_exponents(request: schemas.SweepRequest) -> List[schemas.SweepRow]:
    with service_errors():
        return exponents.sweep(request.family, request.rho, request.max_m, request.points)
