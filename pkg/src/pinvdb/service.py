"""HTTP JSON API over a :class:`~pinvdb.store.MatrixStore`.

Endpoints::

    POST /matrices          {"text": ...} | {"coo": {...}} | {"test": name}  -> 201 {"id"}
    POST /matrices/upload   raw matrix text                                  -> 201 {"id"}
    GET  /matrices/{id}     -> {"id", "dimension", "elements", "sparse", "test"}
    POST /compute           {"operation", "operands", "r", "s", "p", "q"}    -> 200 response
    GET  /results/{id}      -> stored result record

Every error is a 400 with ``{"error": <error class name>, "detail": <text>}``.
"""

import logging

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import formats
from .errors import PinvError, UnknownTestMatrix
from .matrix import SparseCoo
from .pinv import DEFAULT_TOLERANCES
from .pipeline import OperationRequest, TestRef, execute, ingest_upload
from .registry import TestRegistry
from .store import coefficient_text

logger = logging.getLogger(__name__)


class BadRequest(PinvError, ValueError):
    pass


def _error(code, detail):
    return JSONResponse(status_code=400, content={"error": code, "detail": detail})


def parse_coo(obj):
    try:
        return SparseCoo(
            int(obj["rows"]), int(obj["cols"]), obj["row_idx"], obj["col_idx"], obj["values"]
        )
    except (KeyError, TypeError) as exc:
        raise BadRequest(f"malformed coo object: {exc}") from exc


def parse_operand(obj):
    """JSON operand: a stored id, or an object with "test", "text" or "coo"."""
    if isinstance(obj, bool):
        raise BadRequest("operand must be an id or an object")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str) and obj.startswith("test:"):
        return TestRef(obj[5:])
    if isinstance(obj, dict):
        if "test" in obj:
            return TestRef(str(obj["test"]))
        if "text" in obj:
            return formats.parse_matrix_text(str(obj["text"]))
        if "coo" in obj:
            return parse_coo(obj["coo"])
    raise BadRequest(f"unsupported operand {obj!r}")


def create_app(store, registry=None, tol=DEFAULT_TOLERANCES):
    registry = registry if registry is not None else TestRegistry(store)
    app = FastAPI(title="pinvdb")
    app.state.store = store
    app.state.registry = registry

    @app.exception_handler(PinvError)
    async def _pinv_error(request, exc):
        return _error(exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request, exc):
        return _error("BadRequest", str(exc))

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        return _error("BadRequest", str(exc))

    @app.post("/matrices", status_code=201)
    def post_matrix(body: dict = Body(...)):
        if "test" in body:
            name = str(body["test"])
            id_in = store.find_test(name)
            if id_in is None:
                matrix = registry.find(name)
                if matrix is None:
                    raise UnknownTestMatrix(f"no test matrix named {name!r}")
                id_in, _ = store.find_or_insert(matrix, name)
            return {"id": id_in}
        if "text" in body:
            matrix = formats.parse_matrix_text(str(body["text"]))
        elif "coo" in body:
            matrix = parse_coo(body["coo"])
        else:
            raise BadRequest('expected one of "text", "coo" or "test"')
        id_in, _ = store.find_or_insert(matrix)
        return {"id": id_in}

    @app.post("/matrices/upload", status_code=201)
    async def upload_matrix(request: Request):
        payload = await request.body()
        name = request.headers.get("x-filename", "upload.txt")
        return {"id": ingest_upload(store, payload, name)}

    @app.get("/matrices/{id_in}")
    def get_matrix(id_in: int):
        rec = store.get_record(id_in)
        return {
            "id": rec.id,
            "dimension": rec.dimension,
            "elements": rec.elements_in,
            "sparse": rec.sparse,
            "test": rec.test,
        }

    @app.post("/compute")
    def post_compute(body: dict = Body(...)):
        try:
            operation = body["operation"]
            operands = body["operands"]
        except KeyError as exc:
            raise BadRequest(f"missing field {exc}") from exc
        if not isinstance(operands, list):
            raise BadRequest("operands must be a list")
        req = OperationRequest(
            operation,
            tuple(parse_operand(o) for o in operands),
            r=body.get("r", 0),
            s=body.get("s", 0),
            p=body.get("p", 0),
            q=body.get("q", 0),
        )
        resp = execute(store, req, registry, tol)
        return resp.to_json()

    @app.get("/results/{id_out}")
    def get_result(id_out: int):
        rec = store.get_result(id_out)
        return {
            "id": rec.id,
            "elements": rec.elements_out,
            "operation": rec.operation,
            "matrix_I": rec.matrix_I,
            "matrix_II": rec.matrix_II,
            "matrix_III": rec.matrix_III,
            "r": coefficient_text(rec.r),
            "s": coefficient_text(rec.s),
            "p": rec.p,
            "q": rec.q,
            "dimension": rec.dimension,
        }

    return app


def serve(store, host="127.0.0.1", port=8000):
    import uvicorn

    logger.info("serving %s on %s:%d", store.path, host, port)
    uvicorn.run(create_app(store), host=host, port=port)
