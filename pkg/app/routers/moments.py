from fastapi import APIRouter

from app import schemas
from app.dependencies import service_errors
from app.services import oracle
from app.services.channels import channel_from_spec

router = APIRouter(prefix="/moments", tags=["moments"])
ErrorSchema = schemas.ErrorSchema


@router.post(
    "",
    response_model=schemas.MomentReport,
    summary="Exact guesswork moment",
    description="E[G^rho] by full enumeration of sequences; refuses when the enumeration cap is exceeded.",
    responses={
        400: {"model": ErrorSchema, "description": "Invalid channel or parameters"},
        413: {
            "model": ErrorSchema,
            "description": "Enumeration cap exceeded",
            "content": {
                "application/json": {
                    "example": {
                        "detail": "enumeration_cap exceeded: required 68719476736, cap 16777216 (use simulate for larger n)"
                    }
                }
            },
        },
    },
)
def exact_moment(request: schemas.MomentRequest) -> schemas.MomentReport:
    with service_errors():
        p_x, w = channel_from_spec(request.channel)
        if request.strategy == "single":
            return oracle.conditional_moment_exact(p_x, w, request.n, request.rho)
        if request.strategy == "centralized":
            return oracle.centralized_moment_exact(p_x, w, request.n, request.m, request.rho)
        return oracle.decentralized_moment_exact(p_x, w, request.n, request.m, request.rho)
