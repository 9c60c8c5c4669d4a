# app/main.py
from fastapi import FastAPI

from app import __version__
from app.logging_setup import configure_logging
from .routers import exponents, health, moments, simulations, toy

configure_logging()

app = FastAPI(
    title="Guesswork API",
    version=__version__,
)

API_PREFIX = "/api/v1"  # ← єдина точка зміни версії

# однаковий префікс під час підключення всіх роутерів
app.include_router(health.router,      prefix=API_PREFIX)
app.include_router(exponents.router,   prefix=API_PREFIX)
app.include_router(moments.router,     prefix=API_PREFIX)
app.include_router(simulations.router, prefix=API_PREFIX)
app.include_router(toy.router,         prefix=API_PREFIX)
