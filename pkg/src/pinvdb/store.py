"""Persistent store for input matrices and computed results.

Two keyspaces live in one SQLite file:

``matrices_in``
    One record per dense matrix (R layout) or one header record plus one
    ``matrix_rows`` record per matrix row (mR layout). A COO matrix takes three
    consecutive records flagged ``sparse`` 1, 2 and 3 (row indices, column
    indices, values); its id is the id of the first one.

``matrices_out``
    One record per computed result, unique on the cache key
    ``(operation, matrix_I, matrix_II, matrix_III, r, s, p, q)``.

Matrix lookup is by exact canonical string. By default a SHA-256 digest index
narrows the candidates; with ``full_scan=True`` every record of the right
dimension is read and compared, like a table scan.
"""

import hashlib
import os
import re
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from . import formats
from .errors import (
    CorruptRecord,
    DuplicateMatrix,
    DuplicateResult,
    PinvError,
    RecordTooLong,
    StoreUnavailable,
    UnknownId,
    UnknownOperation,
)
from .matrix import SparseCoo

SCHEMA_VERSION = "1"
LAYOUTS = ("R", "mR")
MAX_TEXT = 2**32 - 1  # longtext

OPERATIONS = ("A(-1)", "A(+)", "A(MN)", "A+B", "A-B", "A*B", "r*A+s*B", "A^p*B^q", "r*A")

MATRICES_IN_FIELDS = ("id_in", "elements_in", "dimension", "test", "sparse")
MATRICES_OUT_FIELDS = (
    "id_out", "elements_out", "operation", "matrix_I", "matrix_II", "matrix_III",
    "r", "s", "p", "q", "dimension",
)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS meta (
    key   TEXT PRIMARY KEY NOT NULL,
    value TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS matrices_in (
    id_in       INTEGER PRIMARY KEY AUTOINCREMENT,
    elements_in TEXT NOT NULL,
    dimension   TEXT NOT NULL,
    test        TEXT NOT NULL DEFAULT '',
    sparse      TEXT NOT NULL DEFAULT '0',
    digest      TEXT NOT NULL,
    UNIQUE (dimension, sparse, test, digest)
);
CREATE INDEX IF NOT EXISTS matrices_in_dimension ON matrices_in (dimension, sparse);
CREATE INDEX IF NOT EXISTS matrices_in_digest ON matrices_in (digest);
CREATE INDEX IF NOT EXISTS matrices_in_test ON matrices_in (test);
CREATE TABLE IF NOT EXISTS matrix_rows (
    id_in    INTEGER NOT NULL,
    row_no   INTEGER NOT NULL,
    elements TEXT NOT NULL,
    PRIMARY KEY (id_in, row_no)
);
CREATE TABLE IF NOT EXISTS matrices_out (
    id_out       INTEGER PRIMARY KEY AUTOINCREMENT,
    elements_out TEXT NOT NULL,
    operation    TEXT NOT NULL,
    matrix_I     INTEGER NOT NULL DEFAULT 0,
    matrix_II    INTEGER NOT NULL DEFAULT 0,
    matrix_III   INTEGER NOT NULL DEFAULT 0,
    r            TEXT NOT NULL DEFAULT '0',
    s            TEXT NOT NULL DEFAULT '0',
    p            INTEGER NOT NULL DEFAULT 0,
    q            INTEGER NOT NULL DEFAULT 0,
    dimension    TEXT NOT NULL,
    UNIQUE (operation, matrix_I, matrix_II, matrix_III, r, s, p, q)
);
"""


def coefficient_text(x):
    """Canonical key text for a coefficient: ``3`` -> ``"3"``, ``0.5`` -> ``"0.5"``."""
    if isinstance(x, bool):
        raise TypeError("coefficients must be numbers")
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x.is_integer():
        return str(int(x))
    return formats.format_number(x)


def _coefficient_value(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


_DIMENSION_RE = re.compile(r"([1-9][0-9]*)x([1-9][0-9]*)")


def parse_dimension(text):
    """``"11x10"`` -> ``(11, 10)``; anything but the exact wire form is rejected."""
    match = _DIMENSION_RE.fullmatch(text)
    if match is None:
        raise CorruptRecord(f"bad dimension string {text!r}")
    return int(match[1]), int(match[2])


def _digest(*parts):
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("ascii"))
        h.update(b"|")
    return h.hexdigest()


@dataclass(frozen=True)
class MatrixRecord:
    id: int
    elements_in: str
    dimension: str
    test: str
    sparse: int


@dataclass(frozen=True)
class ResultKey:
    """The cache key. ``r`` and ``s`` may be non-integer; ``p`` and ``q`` may not."""

    operation: str
    matrix_I: int
    matrix_II: int = 0
    matrix_III: int = 0
    r: Union[int, float] = 0
    s: Union[int, float] = 0
    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.operation not in OPERATIONS:
            raise UnknownOperation(f"unknown operation {self.operation!r}")
        for name in ("p", "q"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("r", "s"):
            object.__setattr__(self, name, _coefficient_value(coefficient_text(getattr(self, name))))

    def row(self):
        return (
            self.operation, self.matrix_I, self.matrix_II, self.matrix_III,
            coefficient_text(self.r), coefficient_text(self.s), self.p, self.q,
        )


@dataclass(frozen=True)
class ResultRecord:
    id: int
    elements_out: str
    operation: str
    matrix_I: int
    matrix_II: int
    matrix_III: int
    r: Union[int, float]
    s: Union[int, float]
    p: int
    q: int
    dimension: str

    @property
    def key(self):
        return ResultKey(
            self.operation, self.matrix_I, self.matrix_II, self.matrix_III,
            self.r, self.s, self.p, self.q,
        )

    def matrix(self):
        m, n = parse_dimension(self.dimension)
        try:
            return formats.from_r_string(self.elements_out, m, n)
        except PinvError as exc:
            raise CorruptRecord(f"result {self.id}: {exc}") from exc


class MatrixStore:
    """Single-file store with a readers / single-writer contract.

    Parameters
    ----------
    path : str or Path
        SQLite file, created if missing. ``":memory:"`` gives a private
        in-memory store.
    layout : {"R", "mR"}, optional
        Physical layout of dense input matrices, fixed when the store is
        created. Defaults to the existing layout, or "R" for a new store.
    full_scan : bool
        Compare every stored matrix of the query's dimension instead of
        using the digest index.
    """

    max_text = MAX_TEXT

    def __init__(self, path, layout=None, full_scan=False):
        self.path = str(path)
        self.full_scan = full_scan
        self._memory = self.path == ":memory:"
        self._write_lock = threading.RLock()
        self._local = threading.local()
        self._connections = []
        self._closed = False
        if not self._memory:
            parent = Path(self.path).parent
            if not parent.is_dir():
                raise StoreUnavailable(f"directory {parent} does not exist")
        with self._write_lock:
            conn = self._conn()
            try:
                conn.executescript(_SCHEMA)
                stored = conn.execute("SELECT value FROM meta WHERE key='layout'").fetchone()
                if stored is None:
                    layout = layout or "R"
                    if layout not in LAYOUTS:
                        raise ValueError(f"layout must be one of {LAYOUTS}, got {layout!r}")
                    conn.execute("INSERT INTO meta VALUES ('layout', ?)", (layout,))
                    conn.execute("INSERT INTO meta VALUES ('schema_version', ?)", (SCHEMA_VERSION,))
                    conn.commit()
                elif layout is not None and layout != stored[0]:
                    raise ValueError(f"store {self.path} uses layout {stored[0]!r}, not {layout!r}")
                self.layout = layout if stored is None else stored[0]
            except sqlite3.DatabaseError as exc:
                raise StoreUnavailable(f"cannot open store {self.path}: {exc}") from exc

    # -- connection handling -----------------------------------------------

    def _conn(self):
        if self._closed:
            raise StoreUnavailable("store is closed")
        conn = getattr(self._local, "conn", None)
        if conn is None:
            if self._memory and self._connections:
                conn = self._connections[0]
            else:
                try:
                    conn = sqlite3.connect(self.path, check_same_thread=False, timeout=30)
                except sqlite3.Error as exc:
                    raise StoreUnavailable(f"cannot open store {self.path}: {exc}") from exc
                if not self._memory:
                    conn.execute("PRAGMA journal_mode = WAL")
                    conn.execute("PRAGMA synchronous = NORMAL")
                self._connections.append(conn)
            self._local.conn = conn
        return conn

    @contextmanager
    def _read(self):
        # An in-memory store has one shared connection, so reads serialize too.
        if self._memory:
            with self._write_lock:
                yield self._conn()
        else:
            yield self._conn()

    @contextmanager
    def _write(self):
        with self._write_lock:
            conn = self._conn()
            try:
                yield conn
                conn.commit()
            except BaseException:
                conn.rollback()
                raise

    def close(self):
        with self._write_lock:
            for conn in self._connections:
                conn.close()
            self._connections.clear()
            self._closed = True

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- canonical forms ---------------------------------------------------

    def _check_length(self, *texts):
        for text in texts:
            if len(text) > self.max_text:
                raise RecordTooLong(
                    f"serialized matrix has {len(text)} characters; the limit is {self.max_text}"
                )

    @staticmethod
    def _sparse_parts(S):
        return formats.to_coo_strings(S)

    # -- matrices ----------------------------------------------------------

    def find_matrix(self, A):
        """Id of a stored matrix whose dimension and canonical text equal A's, else None."""
        if isinstance(A, SparseCoo):
            return self._find_sparse(A)
        text = formats.to_r_string(A)
        with self._read() as conn:
            if self.full_scan:
                return self._scan_dense(conn, A, text)
            ids = conn.execute(
                "SELECT id_in FROM matrices_in WHERE dimension=? AND sparse='0' AND digest=? "
                "ORDER BY id_in",
                (A.dimension, _digest(text)),
            ).fetchall()
            for (id_in,) in ids:
                if self._dense_text(conn, id_in) == text:
                    return id_in
        return None

    def _scan_dense(self, conn, A, text):
        if self.layout == "R":
            cursor = conn.execute(
                "SELECT id_in, elements_in FROM matrices_in WHERE dimension=? AND sparse='0' "
                "ORDER BY id_in",
                (A.dimension,),
            )
            for id_in, elements in cursor:
                if elements == text:
                    return id_in
            return None
        wanted = formats.to_mr_records(A)
        cursor = conn.execute(
            "SELECT m.id_in, r.row_no, r.elements FROM matrices_in m "
            "JOIN matrix_rows r ON r.id_in = m.id_in "
            "WHERE m.dimension=? AND m.sparse='0' ORDER BY m.id_in, r.row_no",
            (A.dimension,),
        )
        current, matched = None, False
        for id_in, row_no, elements in cursor:
            if id_in != current:
                if matched:
                    return current
                current, matched = id_in, True
            if matched and elements != wanted[row_no]:
                matched = False
        return current if matched else None

    def _find_sparse(self, S):
        parts = self._sparse_parts(S)
        with self._read() as conn:
            if self.full_scan:
                rows = conn.execute(
                    "SELECT id_in, elements_in, sparse FROM matrices_in "
                    "WHERE dimension=? AND sparse!='0' ORDER BY id_in",
                    (S.dimension,),
                ).fetchall()
                for i in range(0, len(rows) - 2):
                    if rows[i][2] == "1" and tuple(r[1] for r in rows[i:i + 3]) == parts:
                        return rows[i][0]
                return None
            ids = conn.execute(
                "SELECT id_in FROM matrices_in WHERE dimension=? AND sparse='1' AND digest=? "
                "ORDER BY id_in",
                (S.dimension, _digest(*parts)),
            ).fetchall()
            for (id_in,) in ids:
                if self._sparse_texts(conn, id_in) == parts:
                    return id_in
        return None

    def _dense_text(self, conn, id_in):
        if self.layout == "R":
            row = conn.execute("SELECT elements_in FROM matrices_in WHERE id_in=?", (id_in,)).fetchone()
            return row[0]
        rows = conn.execute(
            "SELECT elements FROM matrix_rows WHERE id_in=? ORDER BY row_no", (id_in,)
        ).fetchall()
        return ",".join(r[0] for r in rows)

    def _sparse_texts(self, conn, base_id):
        rows = conn.execute(
            "SELECT elements_in, sparse FROM matrices_in WHERE id_in BETWEEN ? AND ? ORDER BY id_in",
            (base_id, base_id + 2),
        ).fetchall()
        if [r[1] for r in rows] != ["1", "2", "3"]:
            raise CorruptRecord(f"sparse matrix {base_id} does not have three component records")
        return tuple(r[0] for r in rows)

    def insert_matrix(self, A, test_name=""):
        """Persist A and return its id. Raises DuplicateMatrix if already present."""
        if "\t" in test_name or "\n" in test_name:
            raise ValueError("test names must not contain tabs or newlines")
        try:
            with self._write() as conn:
                if isinstance(A, SparseCoo):
                    parts = self._sparse_parts(A)
                    self._check_length(*parts)
                    digest = _digest(*parts)
                    ids = [
                        conn.execute(
                            "INSERT INTO matrices_in (elements_in, dimension, test, sparse, digest) "
                            "VALUES (?, ?, ?, ?, ?)",
                            (part, A.dimension, test_name, str(flag), digest),
                        ).lastrowid
                        for flag, part in enumerate(parts, 1)
                    ]
                    if ids != list(range(ids[0], ids[0] + 3)):
                        raise CorruptRecord("sparse component records are not consecutive")
                    return ids[0]
                text = formats.to_r_string(A)
                self._check_length(text)
                stored = text if self.layout == "R" else ""
                id_in = conn.execute(
                    "INSERT INTO matrices_in (elements_in, dimension, test, sparse, digest) "
                    "VALUES (?, ?, ?, '0', ?)",
                    (stored, A.dimension, test_name, _digest(text)),
                ).lastrowid
                if self.layout == "mR":
                    conn.executemany(
                        "INSERT INTO matrix_rows VALUES (?, ?, ?)",
                        ((id_in, i, rec) for i, rec in enumerate(formats.to_mr_records(A))),
                    )
                return id_in
        except sqlite3.IntegrityError as exc:
            raise DuplicateMatrix(f"{A.dimension} matrix is already stored") from exc
        except sqlite3.OperationalError as exc:
            raise StoreUnavailable(str(exc)) from exc

    def find_or_insert(self, A, test_name=""):
        """Return ``(id, inserted)``."""
        found = self.find_matrix(A)
        if found is not None:
            return found, False
        try:
            return self.insert_matrix(A, test_name), True
        except DuplicateMatrix:
            # A concurrent writer got there first.
            found = self.find_matrix(A)
            if found is None:
                raise
            return found, False

    def find_test(self, name):
        """Id of the first record stored under test name ``name``, else None."""
        if not name:
            return None
        with self._read() as conn:
            row = conn.execute(
                "SELECT id_in, sparse FROM matrices_in WHERE test=? AND sparse IN ('0', '1') "
                "ORDER BY id_in LIMIT 1",
                (name,),
            ).fetchone()
        return None if row is None else row[0]

    def get_record(self, id_in):
        """The logical record for ``id_in``; mR matrices are reassembled to one R string."""
        with self._read() as conn:
            row = conn.execute(
                "SELECT id_in, elements_in, dimension, test, sparse FROM matrices_in WHERE id_in=?",
                (id_in,),
            ).fetchone()
            if row is None:
                raise UnknownId(f"no stored matrix with id {id_in}")
            elements = row[1]
            if row[4] == "0" and self.layout == "mR":
                elements = self._dense_text(conn, id_in)
        return MatrixRecord(row[0], elements, row[2], row[3], int(row[4]))

    def canonical_id(self, id_in):
        """The id a matrix is known by (the first record of a sparse triple)."""
        record = self.get_record(id_in)
        return id_in if record.sparse in (0, 1) else id_in - record.sparse + 1

    def get_matrix(self, id_in):
        """Load a stored matrix: DenseMatrix for dense records, SparseCoo for COO triples."""
        record = self.get_record(id_in)
        m, n = parse_dimension(record.dimension)
        try:
            if record.sparse == 0:
                if self.layout == "mR":
                    with self._read() as conn:
                        rows = conn.execute(
                            "SELECT elements FROM matrix_rows WHERE id_in=? ORDER BY row_no", (id_in,)
                        ).fetchall()
                    if len(rows) != m:
                        raise CorruptRecord(f"matrix {id_in} has {len(rows)} row records, expected {m}")
                    return formats.from_mr_records([r[0] for r in rows], n)
                return formats.from_r_string(record.elements_in, m, n)
            base = id_in - record.sparse + 1
            with self._read() as conn:
                parts = self._sparse_texts(conn, base)
            return formats.from_coo_strings(*parts, m, n)
        except CorruptRecord:
            raise
        except PinvError as exc:
            raise CorruptRecord(f"matrix {id_in}: {exc}") from exc

    def matrix_count(self):
        """Number of stored matrices (a sparse triple counts once)."""
        with self._read() as conn:
            (count,) = conn.execute(
                "SELECT COUNT(*) FROM matrices_in WHERE sparse IN ('0', '1')"
            ).fetchone()
        return count

    # -- results -----------------------------------------------------------

    def find_result_record(self, key):
        with self._read() as conn:
            row = conn.execute(
                "SELECT " + ", ".join(MATRICES_OUT_FIELDS) + " FROM matrices_out WHERE "
                "operation=? AND matrix_I=? AND matrix_II=? AND matrix_III=? "
                "AND r=? AND s=? AND p=? AND q=?",
                key.row(),
            ).fetchone()
        return None if row is None else _result_record(row)

    def find_result(self, key):
        """The stored result matrix for ``key``, or None."""
        record = self.find_result_record(key)
        return None if record is None else record.matrix()

    def insert_result(self, key, X):
        """Persist X under ``key`` and return the new result id."""
        text = formats.to_r_string(X)
        self._check_length(text)
        try:
            with self._write() as conn:
                return conn.execute(
                    "INSERT INTO matrices_out (elements_out, operation, matrix_I, matrix_II, "
                    "matrix_III, r, s, p, q, dimension) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                    (text, *key.row(), X.dimension),
                ).lastrowid
        except sqlite3.IntegrityError as exc:
            raise DuplicateResult(f"a result for {key} is already stored") from exc
        except sqlite3.OperationalError as exc:
            raise StoreUnavailable(str(exc)) from exc

    def get_result(self, id_out):
        with self._read() as conn:
            row = conn.execute(
                "SELECT " + ", ".join(MATRICES_OUT_FIELDS) + " FROM matrices_out WHERE id_out=?",
                (id_out,),
            ).fetchone()
        if row is None:
            raise UnknownId(f"no stored result with id {id_out}")
        return _result_record(row)

    def discard_result(self, key):
        """Delete the result stored under ``key``; returns whether one existed."""
        with self._write() as conn:
            cursor = conn.execute(
                "DELETE FROM matrices_out WHERE operation=? AND matrix_I=? AND matrix_II=? "
                "AND matrix_III=? AND r=? AND s=? AND p=? AND q=?",
                key.row(),
            )
            return cursor.rowcount > 0

    def result_count(self):
        with self._read() as conn:
            return conn.execute("SELECT COUNT(*) FROM matrices_out").fetchone()[0]

    # -- text dump ---------------------------------------------------------

    def iter_matrix_records(self):
        with self._read() as conn:
            ids = [r[0] for r in conn.execute("SELECT id_in FROM matrices_in ORDER BY id_in")]
        for id_in in ids:
            yield self.get_record(id_in)

    def iter_result_records(self):
        with self._read() as conn:
            rows = conn.execute(
                "SELECT " + ", ".join(MATRICES_OUT_FIELDS) + " FROM matrices_out ORDER BY id_out"
            ).fetchall()
        return [_result_record(r) for r in rows]

    def export(self, directory):
        """Write ``matrices_in.tsv`` and ``matrices_out.tsv`` into ``directory``."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / "matrices_in.tsv", "w", encoding="utf-8", newline="\n") as fh:
            for rec in self.iter_matrix_records():
                fh.write("\t".join(map(str, (rec.id, rec.elements_in, rec.dimension, rec.test, rec.sparse))))
                fh.write("\n")
        with open(directory / "matrices_out.tsv", "w", encoding="utf-8", newline="\n") as fh:
            for rec in self.iter_result_records():
                fields = (
                    rec.id, rec.elements_out, rec.operation, rec.matrix_I, rec.matrix_II,
                    rec.matrix_III, coefficient_text(rec.r), coefficient_text(rec.s),
                    rec.p, rec.q, rec.dimension,
                )
                fh.write("\t".join(map(str, fields)))
                fh.write("\n")
        return directory

    def import_dump(self, directory):
        """Load a dump written by :meth:`export`, keeping every id.

        Returns ``(matrix_records, result_records)`` counts.
        """
        directory = Path(directory)
        in_rows = _read_tsv(directory / "matrices_in.tsv", len(MATRICES_IN_FIELDS))
        out_rows = _read_tsv(directory / "matrices_out.tsv", len(MATRICES_OUT_FIELDS))
        try:
            with self._write() as conn:
                pending = {}
                for id_in, elements, dimension, test, sparse in in_rows:
                    id_in = int(id_in)
                    parse_dimension(dimension)
                    if sparse == "0":
                        self._import_dense(conn, id_in, elements, dimension, test)
                    elif sparse in ("1", "2", "3"):
                        pending.setdefault(id_in - int(sparse) + 1, {})[sparse] = (
                            id_in, elements, dimension, test,
                        )
                    else:
                        raise CorruptRecord(f"record {id_in}: bad sparse flag {sparse!r}")
                for base, triple in pending.items():
                    if sorted(triple) != ["1", "2", "3"]:
                        raise CorruptRecord(f"sparse matrix {base} is incomplete in the dump")
                    digest = _digest(*(triple[f][1] for f in ("1", "2", "3")))
                    for flag in ("1", "2", "3"):
                        id_in, elements, dimension, test = triple[flag]
                        conn.execute(
                            "INSERT INTO matrices_in VALUES (?, ?, ?, ?, ?, ?)",
                            (id_in, elements, dimension, test, flag, digest),
                        )
                for row in out_rows:
                    (id_out, elements, operation, m1, m2, m3, r, s, p, q, dimension) = row
                    if operation not in OPERATIONS:
                        raise CorruptRecord(f"result {id_out}: unknown operation {operation!r}")
                    parse_dimension(dimension)
                    conn.execute(
                        "INSERT INTO matrices_out VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                        (int(id_out), elements, operation, int(m1), int(m2), int(m3),
                         coefficient_text(_coefficient_value(r)), coefficient_text(_coefficient_value(s)),
                         int(p), int(q), dimension),
                    )
        except sqlite3.IntegrityError as exc:
            raise DuplicateMatrix(f"dump conflicts with records already in the store: {exc}") from exc
        return len(in_rows), len(out_rows)

    def _import_dense(self, conn, id_in, elements, dimension, test):
        digest = _digest(elements)
        stored = elements if self.layout == "R" else ""
        conn.execute(
            "INSERT INTO matrices_in VALUES (?, ?, ?, ?, '0', ?)",
            (id_in, stored, dimension, test, digest),
        )
        if self.layout == "mR":
            m, n = parse_dimension(dimension)
            tokens = elements.split(",")
            if len(tokens) != m * n:
                raise CorruptRecord(f"record {id_in}: {len(tokens)} elements for {dimension}")
            conn.executemany(
                "INSERT INTO matrix_rows VALUES (?, ?, ?)",
                ((id_in, i, ",".join(tokens[i * n:(i + 1) * n])) for i in range(m)),
            )


def _result_record(row):
    (id_out, elements, operation, m1, m2, m3, r, s, p, q, dimension) = row
    return ResultRecord(
        id_out, elements, operation, m1, m2, m3,
        _coefficient_value(r), _coefficient_value(s), p, q, dimension,
    )


def _read_tsv(path, width):
    if not os.path.exists(path):
        raise StoreUnavailable(f"dump file {path} not found")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != width:
                raise CorruptRecord(f"{path}:{lineno}: expected {width} fields, got {len(fields)}")
            rows.append(fields)
    return rows

