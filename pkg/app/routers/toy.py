from fastapi import APIRouter

from app import schemas
from app.dependencies import service_errors
from app.models import PooledPattern
from app.services import passwords

router = APIRouter(prefix="/toy", tags=["toy"])
ErrorSchema = schemas.ErrorSchema


@router.post(
    "/pool",
    response_model=PooledPattern,
    summary="Majority-pool sister passwords",
    description="Per position: the letter found in more than half of the sisters, otherwise '?'.",
    responses={
        400: {
            "model": ErrorSchema,
            "description": "Sisters of different lengths",
            "content": {"application/json": {"example": {"detail": "all strings must have the same length"}}},
        },
    },
)
def pool(request: schemas.PoolRequest) -> PooledPattern:
    with service_errors():
        return passwords.pool_sisters(request.sisters)


@router.post(
    "/guesses",
    response_model=schemas.GuessComparison,
    summary="Guesses needed by each strategy",
    description=(
        "single: Hamming shells around the first sister; decentralized: best of all sisters; "
        "centralized: erasure enumeration over the pooled pattern."
    ),
    responses={400: {"model": ErrorSchema, "description": "Length mismatch or invalid letters"}},
)
def compare_guesses(request: schemas.GuessRequest) -> schemas.GuessComparison:
    with service_errors():
        pattern = passwords.pool_sisters(request.sisters)
        outcomes = [passwords.decentralized_guess_count(request.secret, s, request.budget) for s in request.sisters]
        found = [o for o in outcomes if o.status == "found"]
        best = min(found, key=lambda o: o.index) if found else schemas.GuessOutcome(status="exhausted")
        return schemas.GuessComparison(
            pattern=pattern.pattern,
            single=outcomes[0],
            decentralized=best,
            centralized=passwords.centralized_guess_count(request.secret, pattern, request.budget),
        )
