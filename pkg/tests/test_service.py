import numpy as np
import pytest
from fastapi.testclient import TestClient

from matrices import MATRIX_B, MATRIX_C
from pinvdb import formats
from pinvdb.matrix import DenseMatrix, dense_to_coo
from pinvdb.service import create_app
from pinvdb.store import MatrixStore


@pytest.fixture
def client(tmp_path):
    with MatrixStore(tmp_path / "svc.db") as store:
        with TestClient(create_app(store)) as c:
            yield c


def _text(arr):
    return formats.format_matrix_text(DenseMatrix(arr))


def test_post_and_get_matrix(client):
    r = client.post("/matrices", json={"text": _text(MATRIX_B)})
    assert r.status_code == 201
    id_b = r.json()["id"]
    assert client.post("/matrices", json={"text": _text(MATRIX_B)}).json()["id"] == id_b
    body = client.get(f"/matrices/{id_b}").json()
    assert body["dimension"] == "6x6"
    assert body["elements"].startswith("282,-11,-206")
    assert body["sparse"] == 0


def test_post_coo_and_test_matrix(client):
    S = dense_to_coo(DenseMatrix(MATRIX_C))
    coo = {
        "rows": 10, "cols": 10, "row_idx": S.row_idx.tolist(),
        "col_idx": S.col_idx.tolist(), "values": S.values.tolist(),
    }
    id_c = client.post("/matrices", json={"coo": coo}).json()["id"]
    assert client.get(f"/matrices/{id_c}").json()["elements"] == "0,0,0,1,2,2,4,4,9"
    r = client.post("/matrices", json={"test": "A_10_11"})
    assert r.status_code == 201
    assert client.get(f"/matrices/{r.json()['id']}").json()["test"] == "A_10_11"
    assert client.post("/matrices", json={"test": "A_10_11"}).json() == r.json()


def test_upload(client):
    body = _text(MATRIX_B).replace(",", " ").encode()
    r1 = client.post("/matrices/upload", content=body, headers={"x-filename": "b.txt"})
    r2 = client.post("/matrices/upload", content=body)
    assert r1.status_code == 201 and r1.json() == r2.json()
    r = client.post("/matrices/upload", content=b"", headers={"x-filename": "e.txt"})
    assert r.status_code == 400
    assert r.json() == {"error": "EmptyUpload", "detail": "e.txt is empty."}


def test_compute_hit_and_result(client):
    id_b = client.post("/matrices", json={"text": _text(MATRIX_B)}).json()["id"]
    req = {"operation": "r*A+s*B", "operands": [id_b, id_b], "r": 3, "s": 4}
    first = client.post("/compute", json=req).json()
    assert first["cache_hit"] is False
    assert first["elements"].startswith("1974,-77,")
    assert first["elements"].endswith(",105,1288")
    assert first["display"][0][0] == "1974"
    second = client.post("/compute", json=req).json()
    assert second["cache_hit"] is True
    assert second["elements"] == first["elements"]
    rec = client.get(f"/results/{first['result_id']}").json()
    assert rec["operation"] == "r*A+s*B"
    assert (rec["matrix_I"], rec["matrix_II"], rec["matrix_III"]) == (id_b, id_b, 0)
    assert (rec["r"], rec["s"], rec["p"], rec["q"]) == ("3", "4", 0, 0)


def test_compute_inline_operands(client):
    req = {
        "operation": "A(MN)",
        "operands": ["test:A_10_11", {"text": _text(np.eye(11))}, {"text": _text(np.eye(10))}],
    }
    body = client.post("/compute", json=req).json()
    assert body["dimension"] == "10x11"
    assert body["display"][0][:3] == ["1", "-1", "0"]


@pytest.mark.parametrize(
    "req, code",
    [
        ({"operation": "A/B", "operands": [1]}, "UnknownOperation"),
        ({"operation": "A+B", "operands": [1]}, "ArityMismatch"),
        ({"operation": "A(+)", "operands": [999]}, "UnknownId"),
        ({"operation": "A(+)", "operands": ["test:none"]}, "UnknownTestMatrix"),
        ({"operation": "A(-1)", "operands": [{"text": "1 2\n3 4\n5 6"}]}, "NotSquare"),
        ({"operation": "A(-1)", "operands": [{"text": "1 2\n2 4"}]}, "SingularMatrix"),
        ({"operation": "A(+)", "operands": [{"text": "1 2\n3"}]}, "RaggedRows"),
        ({"operation": "A(+)", "operands": [{"bogus": 1}]}, "BadRequest"),
        ({"operands": [1]}, "BadRequest"),
        (
            {"operation": "A(MN)", "operands": [{"text": "1 2\n3 4"}, {"text": "1 0\n0 -1"}, {"text": "1 0\n0 1"}]},
            "WeightNotPD",
        ),
    ],
)
def test_compute_errors(client, req, code):
    r = client.post("/compute", json=req)
    assert r.status_code == 400
    assert r.json()["error"] == code


def test_missing_ids(client):
    assert client.get("/matrices/5").json()["error"] == "UnknownId"
    assert client.get("/results/5").status_code == 400
    assert client.get("/matrices/abc").json()["error"] == "BadRequest"
