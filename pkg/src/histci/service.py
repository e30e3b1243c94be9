"""JSON-over-HTTP service exposing estimation, difference intervals,
GLD fitting and single-cell simulations.

Every response body is either {"result": ...} or {"error": {code,
message, location}}.  Malformed requests get 400, estimation failures
422; unexpected errors return an opaque 500 with no stack trace.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import api
from .errors import EstimationError, HistciError, ValidationError
from .gld import FitConfig
from .grouped import from_json_dict
from .piecewise import Method

SIM_REPS_CAP = 10_000


class EstimateRequest(BaseModel):
    data: dict
    method: str
    p: float
    level: float = 0.95
    n_override: float | None = None
    unbounded_tail: bool = False
    fit: dict | None = None


class DiffRequest(BaseModel):
    data_x: dict
    data_y: dict
    method: str | None = None
    method_x: str | None = None
    method_y: str | None = None
    p: float
    level: float = 0.95
    n_override_x: float | None = None
    n_override_y: float | None = None
    unbounded_tail: bool = False
    fit: dict | None = None


class FitRequest(BaseModel):
    data: dict
    fit: dict | None = None


class SimRequest(BaseModel):
    cell: dict = Field(description="flat cell spec: family, params, n, p, method, bins, ...")


def _error_body(code: str, message: str, location: str | None = None) -> dict:
    return {"error": {"code": code, "message": message, "location": location}}


def _fit_config(doc: dict | None) -> FitConfig | None:
    return None if doc is None else FitConfig.from_dict(doc)


def create_app(reps_cap: int = SIM_REPS_CAP) -> FastAPI:
    app = FastAPI(title="histci", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def on_request_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        location = ".".join(str(part) for part in first.get("loc", ()) if part != "body")
        return JSONResponse(
            status_code=400,
            content=_error_body("validation_error", first.get("msg", "invalid request"), location),
        )

    @app.exception_handler(ValidationError)
    async def on_validation_error(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content=_error_body("validation_error", str(exc), exc.location),
        )

    @app.exception_handler(EstimationError)
    async def on_estimation_error(request: Request, exc: EstimationError):
        return JSONResponse(
            status_code=422,
            content=_error_body("estimation_error", str(exc), exc.location),
        )

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content=_error_body("internal_error", "internal error"))

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/estimate")
    async def estimate(req: EstimateRequest) -> dict:
        gd = from_json_dict(req.data)
        result = api.estimate_result(
            gd,
            Method.parse(req.method),
            req.p,
            req.level,
            n_override=req.n_override,
            unbounded_tail=req.unbounded_tail,
            fit_config=_fit_config(req.fit),
        )
        return {"result": result}

    @app.post("/estimate-diff")
    async def estimate_diff(req: DiffRequest) -> dict:
        if req.method is None and (req.method_x is None or req.method_y is None):
            raise ValidationError("give 'method' or both 'method_x' and 'method_y'")
        method_x = Method.parse(req.method_x or req.method)
        method_y = Method.parse(req.method_y or req.method)
        result = api.diff_result(
            from_json_dict(req.data_x),
            from_json_dict(req.data_y),
            method_x,
            method_y,
            req.p,
            req.level,
            n_override_x=req.n_override_x,
            n_override_y=req.n_override_y,
            unbounded_tail=req.unbounded_tail,
            fit_config=_fit_config(req.fit),
        )
        return {"result": result}

    @app.post("/fit-gld")
    async def fit_gld(req: FitRequest) -> dict:
        gd = from_json_dict(req.data)
        return {"result": api.fit_result(gd, _fit_config(req.fit))}

    @app.post("/simulate")
    async def simulate(req: SimRequest) -> dict:
        cell = api.cell_from_dict(req.cell)
        if cell.reps > reps_cap:
            raise ValidationError(
                f"reps={cell.reps} exceeds the service cap of {reps_cap}",
                location="cell.reps",
            )
        return {"result": api.simulate_result(cell)}

    console_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if console_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/console", StaticFiles(directory=console_dir, html=True), name="console")

    return app


app = create_app()


def main() -> None:
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)


if __name__ == "__main__":
    main()
