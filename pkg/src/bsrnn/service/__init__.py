"""HTTP face of the separation engine.

The application is a thin wrapper: every endpoint validates a small
JSON body, calls into the library, and reports paths and summaries back.
Library errors surface as structured 4xx responses instead of tracebacks.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..audio import ReconstructionError
from .routes import router

__all__ = ["create_app"]


def create_app() -> FastAPI:
    app = FastAPI(title="band-split separation service")
    app.include_router(router)

    @app.exception_handler(FileNotFoundError)
    async def missing_file(request: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def bad_value(request: Request, exc: ValueError) -> JSONResponse:
        # weight-format and band-layout errors subclass ValueError
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(LookupError)
    async def bad_lookup(request: Request, exc: LookupError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ReconstructionError)
    async def bad_reconstruction(request: Request, exc: ReconstructionError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    return app
