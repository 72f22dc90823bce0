"""Text formats: matrix text files, R strings, mR records, COO records, display.

Numbers are written in their shortest round-tripping decimal form with a
trailing ``.0`` removed, so ``2.0`` becomes ``"2"`` and ``-0.0`` becomes
``"-0"``. Parsing that text gives back the same bits, which is what makes
string equality usable as matrix equality in the store.
"""

import re
from decimal import ROUND_HALF_UP, Decimal, localcontext

import numpy as np

from .errors import EmptyInput, LengthMismatch, NonFiniteValue, ParseError, RaggedRows
from .matrix import Backend, DenseMatrix, SparseCoo

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER_RE = re.compile(_NUMBER)
_R_STRING_RE = re.compile(rf"{_NUMBER}(?:,{_NUMBER})*")
_INT_LIST_RE = re.compile(r"\d+(?:,\d+)*")
_TRAILING_ZERO_RE = re.compile(r"\.0(?=,|$)")


def format_number(x):
    """Canonical text for one binary64 value."""
    return _TRAILING_ZERO_RE.sub("", repr(float(x)))


def _join(values):
    return _TRAILING_ZERO_RE.sub("", ",".join(map(repr, values)))


def _parse_values(text, expected=None):
    if not _R_STRING_RE.fullmatch(text):
        raise ParseError(f"not a comma-separated list of decimal literals: {text[:60]!r}")
    values = np.array(text.split(","), dtype=np.float64)
    if expected is not None and len(values) != expected:
        raise LengthMismatch(f"expected {expected} elements, got {len(values)}")
    if not np.isfinite(values).all():
        raise NonFiniteValue("element literal out of binary64 range")
    return values


# -- R format --------------------------------------------------------------

def to_r_string(A):
    """Row-major, comma-separated, no spaces."""
    if A._canonical is None:
        A._canonical = _join(A.flat_values().tolist())
    return A._canonical


def from_r_string(text, m, n, backend=Backend.FLAT):
    values = _parse_values(text, m * n)
    return DenseMatrix._from_2d(values.reshape(m, n), backend)


# -- mR format -------------------------------------------------------------

def to_mr_records(A):
    """One R string per matrix row."""
    arr = A.to_numpy()
    return [_join(row) for row in arr.tolist()]


def from_mr_records(records, n, backend=Backend.FLAT):
    if not records:
        raise EmptyInput("no mR records")
    rows = [_parse_values(rec, n) for rec in records]
    return DenseMatrix._from_2d(np.vstack(rows), backend)


# -- COO records -----------------------------------------------------------

def to_coo_strings(S):
    """The three records (row indices, column indices, values) of a COO matrix.

    An empty matrix has three empty records.
    """
    return (
        ",".join(map(str, S.row_idx.tolist())),
        ",".join(map(str, S.col_idx.tolist())),
        _join(S.values.tolist()),
    )


def from_coo_strings(row_text, col_text, value_text, m, n):
    if row_text == col_text == value_text == "":
        return SparseCoo(m, n, [], [], [])
    for text in (row_text, col_text):
        if not _INT_LIST_RE.fullmatch(text):
            raise ParseError(f"not a comma-separated list of indices: {text[:60]!r}")
    row_idx = np.array(row_text.split(","), dtype=np.int64)
    col_idx = np.array(col_text.split(","), dtype=np.int64)
    values = _parse_values(value_text)
    if not (len(row_idx) == len(col_idx) == len(values)):
        raise LengthMismatch("COO records have different lengths")
    return SparseCoo(m, n, row_idx, col_idx, values)


# -- matrix text files -----------------------------------------------------

def parse_matrix_text(text, backend=Backend.FLAT):
    """Parse one matrix row per non-empty line.

    Elements are comma-separated if the text contains any comma, otherwise
    whitespace-separated.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("matrix text is not valid UTF-8") from exc
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise EmptyInput("no matrix rows found")
    use_commas = "," in text
    rows = []
    for lineno, line in enumerate(lines, 1):
        tokens = [t.strip() for t in line.split(",")] if use_commas else line.split()
        for token in tokens:
            if not _NUMBER_RE.fullmatch(token):
                raise ParseError(f"line {lineno}: not a number: {token!r}")
        if rows and len(tokens) != len(rows[0]):
            raise RaggedRows(
                f"line {lineno} has {len(tokens)} elements, expected {len(rows[0])}"
            )
        rows.append(tokens)
    arr = np.array(rows, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise NonFiniteValue("element literal out of binary64 range")
    return DenseMatrix(arr, backend)


def format_matrix_text(A):
    """Comma-separated text file contents, one row per line."""
    return "\n".join(to_mr_records(A)) + "\n"


# -- display ---------------------------------------------------------------

def round_display(x, places=3):
    """Round half away from zero to ``places`` decimals and trim zeros."""
    if places < 0:
        raise ValueError("places must be non-negative")
    with localcontext() as ctx:
        ctx.prec = 1000
        q = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    out = format(q, "f")
    if "." in out:
        out = out.rstrip("0").rstrip(".")
    if out in ("-0", ""):
        out = "0"
    return out


def display_round(A, places=3):
    """Row-major list of display strings for every element of A."""
    return [round_display(x, places) for x in A.flat_values().tolist()]


def render_result(X, places=3):
    """Display grid: one list of cell strings per matrix row."""
    cells = display_round(X, places)
    n = X.cols
    return [cells[i * n:(i + 1) * n] for i in range(X.rows)]


def format_grid(grid):
    return "\n".join(" ".join(row) for row in grid)
