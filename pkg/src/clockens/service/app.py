"""FastAPI application exposing the experiments.

One POST endpoint per experiment, a health probe, and the configuration
schema.  Package errors surface as HTTP 500 with a machine-readable error
record naming the exception type and the experiment; configuration errors
are FastAPI's usual 422 validation responses.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..errors import ClockensError
from .runners import RUNNERS
from .schemas import (
    CanonicalResponse,
    CompareResponse,
    ErrorRecord,
    HamiltonResponse,
    MaupertuisResponse,
    MicrocanonicalResponse,
    ProjectorXcheckResponse,
    ReparCheckResponse,
    RunConfig,
    config_schema_text,
)

app = FastAPI(
    title="clockens",
    description="Canonical and microcanonical ensembles from one constraint projector",
    version=__version__,
)


@app.exception_handler(ClockensError)
async def clockens_error_handler(request: Request, exc: ClockensError) -> JSONResponse:
    experiment = request.url.path.rsplit("/", 1)[-1]
    record = ErrorRecord(type=type(exc).__name__, message=str(exc), experiment=experiment)
    return JSONResponse(status_code=500, content={"error": record.model_dump()})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/schema", response_class=PlainTextResponse)
def schema() -> str:
    return config_schema_text()


def _check_experiment(config: RunConfig, name: str) -> None:
    if config.experiment != name:
        raise ClockensError(
            f"config experiment {config.experiment!r} does not match endpoint {name!r}"
        )


@app.post("/experiments/canonical", response_model=CanonicalResponse)
def canonical(config: RunConfig) -> CanonicalResponse:
    _check_experiment(config, "canonical")
    return RUNNERS["canonical"][0](config)


@app.post("/experiments/microcanonical", response_model=MicrocanonicalResponse)
def microcanonical(config: RunConfig) -> MicrocanonicalResponse:
    _check_experiment(config, "microcanonical")
    return RUNNERS["microcanonical"][0](config)


@app.post("/experiments/compare", response_model=CompareResponse)
def compare(config: RunConfig) -> CompareResponse:
    _check_experiment(config, "compare")
    return RUNNERS["compare"][0](config)


@app.post("/experiments/classical-hamilton", response_model=HamiltonResponse)
def classical_hamilton(config: RunConfig) -> HamiltonResponse:
    _check_experiment(config, "classical-hamilton")
    return RUNNERS["classical-hamilton"][0](config)


@app.post("/experiments/classical-maupertuis", response_model=MaupertuisResponse)
def classical_maupertuis(config: RunConfig) -> MaupertuisResponse:
    _check_experiment(config, "classical-maupertuis")
    return RUNNERS["classical-maupertuis"][0](config)


@app.post("/experiments/repar-check", response_model=ReparCheckResponse)
def repar_check(config: RunConfig) -> ReparCheckResponse:
    _check_experiment(config, "repar-check")
    return RUNNERS["repar-check"][0](config)


@app.post("/experiments/projector-xcheck", response_model=ProjectorXcheckResponse)
def projector_xcheck(config: RunConfig) -> ProjectorXcheckResponse:
    _check_experiment(config, "projector-xcheck")
    return RUNNERS["projector-xcheck"][0](config)
