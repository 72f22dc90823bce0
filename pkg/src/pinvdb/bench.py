"""Benchmark harness.

Every timing uses the monotonic ``perf_counter_ns`` clock, takes one discarded
warm-up run plus ``samples`` measured runs, and reports the median and the
minimum. Ratios are always computed from medians. Random matrices are drawn
uniformly from [-10, 10] with a seeded generator whose seed goes into the
report.
"""

import dataclasses
import json
import statistics
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .matrix import Backend, DenseMatrix, add, multiply, subtract
from .pinv import WeightPair, weighted_pinv
from .pipeline import OperationRequest, execute
from .store import MatrixStore

MIN_SAMPLES = 5

# Default size set for the weighted-inverse benchmark. Named test-family labels
# are not built in; each is replaced by a seeded random matrix of the same
# dimensions.
PINV_SIZES = [
    ("A_30_3", (31, 30)), ("A_50_4", (51, 50)), ("F_15_2", (15, 15)), ("F_30_3", (30, 30)),
    ("F_50_4", (50, 50)), ("S_50_4", (50, 50)), ("S_80_5", (80, 80)),
    ("50x50", (50, 50)), ("15x15", (15, 15)), ("50x35", (50, 35)),
    ("45x70", (45, 70)), ("60x60", (60, 60)),
]

# Default operand pairs for the fundamental-operation benchmark.
FUNDAMENTAL_SIZES = {
    "multiply": [
        ((3, 3), (3, 3)), ((5, 5), (5, 5)), ((10, 10), (10, 10)), ((20, 50), (50, 50)),
        ((45, 45), (45, 70)), ((80, 80), (80, 60)), ((80, 70), (70, 70)), ((81, 81), (81, 81)),
    ],
    "add": [((k, k), (k, k)) for k in (3, 5, 10, 50, 60, 70, 80)],
    "subtract": [((k, k), (k, k)) for k in (3, 5, 10, 50, 60, 70, 81)],
}

_FUNDAMENTAL_OPS = {"multiply": multiply, "add": add, "subtract": subtract}


@dataclass
class BenchReport:
    experiment: str
    parameters: dict
    samples: int
    seed: int
    rows: list = field(default_factory=list)
    ratios: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return dataclasses.asdict(self)

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    def format_table(self):
        lines = [f"{self.experiment} (samples={self.samples}, seed={self.seed})"]
        for row in self.rows:
            label = ", ".join(
                f"{k}={v}" for k, v in row.items() if k not in ("median_s", "min_s")
            )
            lines.append(f"  {label}: median {row['median_s'] * 1e3:.3f} ms, min {row['min_s'] * 1e3:.3f} ms")
        for name, value in self.ratios.items():
            lines.append(f"  ratio {name}: {value:.2f}")
        for name, value in self.verdicts.items():
            lines.append(f"  {name}: {value}")
        lines.extend(f"  note: {note}" for note in self.notes)
        return "\n".join(lines)


def time_call(fn, samples=MIN_SAMPLES, before=None):
    """Durations in seconds of ``samples`` calls, after one discarded warm-up call.

    ``before`` runs untimed ahead of every call.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"at least {MIN_SAMPLES} samples are required")
    durations = []
    for i in range(samples + 1):
        if before is not None:
            before()
        t0 = time.perf_counter_ns()
        fn()
        elapsed = time.perf_counter_ns() - t0
        if i:
            durations.append(max(elapsed, 1) / 1e9)
    return durations


def _summary(durations):
    return {"median_s": statistics.median(durations), "min_s": min(durations)}


def random_matrix(rng, m, n, backend=Backend.FLAT):
    return DenseMatrix(rng.uniform(-10.0, 10.0, size=(m, n)), backend)


def random_spd(rng, n, backend=Backend.FLAT):
    """``B'B + n I`` with B uniform on [-1, 1]: symmetric, positive definite, well conditioned."""
    B = rng.uniform(-1.0, 1.0, size=(n, n))
    S = B.T @ B + n * np.eye(n)
    return DenseMatrix((S + S.T) / 2, backend)


def parse_size(text):
    """``"70x70"`` -> ``(70, 70)``."""
    m, n = text.lower().replace("×", "x").split("x")
    return int(m), int(n)


# -- search latency by layout ---------------------------------------------

def bench_search(layout, n_matrices, dim=(70, 70), samples=MIN_SAMPLES, seed=0,
                 full_scan=True, directory=None):
    """Time find_matrix for the last of ``n_matrices`` stored random matrices."""
    if n_matrices < 1:
        raise ValueError("n_matrices must be at least 1")
    rng = np.random.default_rng(seed)
    m, n = dim
    with tempfile.TemporaryDirectory(dir=directory) as tmp:
        store = MatrixStore(Path(tmp) / f"search-{layout}.db", layout=layout, full_scan=full_scan)
        try:
            last = None
            for _ in range(n_matrices):
                last = random_matrix(rng, m, n)
                last_id = store.insert_matrix(last)
            found = []
            durations = time_call(lambda: found.append(store.find_matrix(last)), samples)
        finally:
            store.close()
    report = BenchReport(
        "SearchFormat",
        {"layout": layout, "n_matrices": n_matrices, "dimension": f"{m}x{n}", "full_scan": full_scan},
        samples, seed,
    )
    report.rows.append({"layout": layout, "n_matrices": n_matrices, **_summary(durations)})
    report.verdicts["found_last"] = all(f == last_id for f in found)
    return report


def compare_search(n_matrices, dim=(70, 70), samples=MIN_SAMPLES, seed=0, full_scan=True,
                   directory=None):
    """R and mR search latency side by side; ratio ``mR/R`` from medians."""
    reports = [
        bench_search(layout, n_matrices, dim, samples, seed, full_scan, directory)
        for layout in ("R", "mR")
    ]
    report = BenchReport(
        "SearchFormat",
        {"layout": "both", "n_matrices": n_matrices, "dimension": f"{dim[0]}x{dim[1]}",
         "full_scan": full_scan},
        samples, seed,
    )
    for r in reports:
        report.rows.extend(r.rows)
        report.verdicts[f"found_last_{r.parameters['layout']}"] = r.verdicts["found_last"]
    report.ratios["mR/R"] = reports[1].rows[0]["median_s"] / reports[0].rows[0]["median_s"]
    return report


# -- weighted pseudo-inverse by representation -----------------------------

def _size_entries(sizes):
    out = []
    for entry in sizes:
        if isinstance(entry, str):
            out.append((entry, parse_size(entry)))
        elif isinstance(entry[0], str):
            out.append(tuple(entry))
        else:
            out.append((f"{entry[0]}x{entry[1]}", tuple(entry)))
    return out


def bench_pinv_representation(sizes=None, backends=("flat", "nested"), samples=MIN_SAMPLES, seed=0):
    """Time weighted_pinv per size and backend and check the results are bit-identical."""
    entries = _size_entries(sizes if sizes else PINV_SIZES)
    if not entries:
        raise ValueError("sizes must not be empty")
    rng = np.random.default_rng(seed)
    report = BenchReport(
        "Representation",
        {"sizes": [label for label, _ in entries], "backends": list(backends)},
        samples, seed,
    )
    identical = True
    for label, (m, n) in entries:
        A = rng.uniform(-10.0, 10.0, size=(m, n))
        M = random_spd(rng, m)
        N = random_spd(rng, n)
        results = []
        medians = {}
        for backend in backends:
            Ab = DenseMatrix(A, backend)
            W = WeightPair(M.with_backend(backend), N.with_backend(backend))
            out = []
            durations = time_call(lambda: out.append(weighted_pinv(Ab, W)), samples)
            results.append(out[-1])
            medians[backend] = statistics.median(durations)
            report.rows.append({"size": label, "backend": backend, **_summary(durations)})
        same = all(results[0].identical(x) for x in results[1:])
        identical &= same
        if len(backends) == 2:
            report.ratios[f"{label} {backends[1]}/{backends[0]}"] = (
                medians[backends[1]] / medians[backends[0]]
            )
        if label[0].isalpha() and "_" in label:
            report.notes.append(f"{label}: seeded random {m}x{n} matrix substituted for the test family")
    report.verdicts["identical_across_backends"] = identical
    return report


# -- cache hit vs recompute ------------------------------------------------

def bench_hit_miss(size=(80, 80), store=None, samples=MIN_SAMPLES, seed=0, populate=0,
                   directory=None):
    """Median latency of A(MN) when the result is absent (miss) vs. stored (hit).

    Operands are passed inline, so both paths include canonicalizing and
    looking up the three input matrices. ``populate`` pre-fills the store with
    that many small random matrices.
    """
    m, n = size
    rng = np.random.default_rng(seed)
    own = store is None
    tmp = None
    if own:
        tmp = tempfile.TemporaryDirectory(dir=directory)
        store = MatrixStore(Path(tmp.name) / "hitmiss.db")
    try:
        for _ in range(populate):
            store.find_or_insert(random_matrix(rng, 3, 3))
        A = random_matrix(rng, m, n)
        req = OperationRequest("A(MN)", (A, random_spd(rng, m), random_spd(rng, n)))
        first = execute(store, req)
        key = first.key

        miss_flags, hit_flags, payloads = [], [], []

        def run(flags):
            resp = execute(store, req)
            flags.append(resp.cache_hit)
            payloads.append(resp.elements)

        miss = time_call(lambda: run(miss_flags), samples, before=lambda: store.discard_result(key))
        hit = time_call(lambda: run(hit_flags), samples)
    finally:
        if own:
            store.close()
            tmp.cleanup()
    report = BenchReport(
        "HitMiss",
        {"dimension": f"{m}x{n}", "populate": populate, "operation": "A(MN)"},
        samples, seed,
    )
    report.rows.append({"path": "miss", **_summary(miss)})
    report.rows.append({"path": "hit", **_summary(hit)})
    report.ratios["miss/hit"] = statistics.median(miss) / statistics.median(hit)
    report.verdicts["miss_paths_computed"] = not any(miss_flags)
    report.verdicts["hit_paths_cached"] = all(hit_flags)
    report.verdicts["payloads_identical"] = all(payloads[0].identical(p) for p in payloads)
    return report


# -- fundamental operations ------------------------------------------------

def bench_fundamental(ops=("multiply", "add", "subtract"), sizes=None,
                      backends=("flat", "nested"), samples=MIN_SAMPLES, seed=0):
    """Time multiply/add/subtract per operand pair and backend.

    ``sizes`` is a list of ``(a_shape, b_shape)`` pairs used for every op, or a
    dict of such lists keyed by op; the default is the table of pairs above.
    """
    rng = np.random.default_rng(seed)
    report = BenchReport(
        "FundamentalOps", {"ops": list(ops), "backends": list(backends)}, samples, seed,
    )
    identical = True
    for op in ops:
        fn = _FUNDAMENTAL_OPS[op]
        if sizes is None:
            pairs = FUNDAMENTAL_SIZES[op]
        elif isinstance(sizes, dict):
            pairs = sizes[op]
        else:
            pairs = sizes
        for a_shape, b_shape in pairs:
            A = rng.uniform(-10.0, 10.0, size=a_shape)
            B = rng.uniform(-10.0, 10.0, size=b_shape)
            results = []
            for backend in backends:
                Ab, Bb = DenseMatrix(A, backend), DenseMatrix(B, backend)
                out = []
                durations = time_call(lambda: out.append(fn(Ab, Bb)), samples)
                results.append(out[-1])
                report.rows.append({
                    "op": op,
                    "sizes": f"{a_shape[0]}x{a_shape[1]}, {b_shape[0]}x{b_shape[1]}",
                    "backend": backend,
                    **_summary(durations),
                })
            identical &= all(results[0].identical(x) for x in results[1:])
    report.verdicts["identical_across_backends"] = identical
    return report


# -- compiled vs numpy kernels ---------------------------------------------

def bench_kernels(sizes=(10, 40, 80), samples=MIN_SAMPLES, seed=0):
    """Raw kernel latency: numba vs. the pure-numpy fallback, flat and nested layouts."""
    report = BenchReport("Kernels", {"sizes": list(sizes)}, samples, seed)
    impls = [kernels.numpy_kernels]
    if kernels.numba_kernels is not None:
        impls.insert(0, kernels.numba_kernels)
    else:
        report.notes.append("numba disabled; only the numpy kernels were timed")
    rng = np.random.default_rng(seed)
    identical = True
    for k in sizes:
        A = rng.uniform(-10.0, 10.0, size=(k, k))
        B = rng.uniform(-10.0, 10.0, size=(k, k))
        products = []
        for impl in impls:
            a, b = A.reshape(-1).copy(), B.reshape(-1).copy()
            ra, rb = impl.pack_rows(A), impl.pack_rows(B)
            cases = {
                "matmul flat": lambda: impl.matmul_flat(a, k, k, b, k),
                "matmul nested": lambda: impl.matmul_rows(ra, rb, k),
                "axpby flat": lambda: impl.axpby_flat(3.0, a, 4.0, b),
                "axpby nested": lambda: impl.axpby_rows(3.0, ra, 4.0, rb),
            }
            for name, fn in cases.items():
                durations = time_call(fn, samples)
                report.rows.append({"kernels": impl.NAME, "case": name, "size": f"{k}x{k}", **_summary(durations)})
            products.append(np.asarray(impl.matmul_flat(a, k, k, b, k)))
        identical &= all(np.array_equal(products[0].view(np.uint64), p.view(np.uint64)) for p in products)
        if len(impls) == 2:
            by = {(r["kernels"], r["case"]): r["median_s"] for r in report.rows if r["size"] == f"{k}x{k}"}
            for case in ("matmul flat", "matmul nested"):
                report.ratios[f"{k}x{k} {case} numpy/numba"] = by[("numpy", case)] / by[("numba", case)]
    report.verdicts["identical_across_kernels"] = identical
    return report


# -- concurrent clients ----------------------------------------------------

def bench_concurrent(size=(20, 20), clients=4, requests=5, seed=0, directory=None):
    """Several threads issue the same A(MN) request against one store.

    Reports per-request latency; asserts nothing about timing. The verdict
    records whether every client received the same payload.
    """
    from concurrent.futures import ThreadPoolExecutor

    m, n = size
    rng = np.random.default_rng(seed)
    req = OperationRequest(
        "A(MN)", (random_matrix(rng, m, n), random_spd(rng, m), random_spd(rng, n))
    )
    with tempfile.TemporaryDirectory(dir=directory) as tmp:
        store = MatrixStore(Path(tmp) / "concurrent.db")
        try:
            def one(_):
                t0 = time.perf_counter_ns()
                resp = execute(store, req)
                return (time.perf_counter_ns() - t0) / 1e9, resp

            with ThreadPoolExecutor(max_workers=clients) as pool:
                results = list(pool.map(one, range(clients * requests)))
        finally:
            store.close()
    durations = [d for d, _ in results]
    payloads = [r.elements for _, r in results]
    report = BenchReport(
        "ConcurrentClients",
        {"dimension": f"{m}x{n}", "clients": clients, "requests_per_client": requests},
        len(durations), seed,
    )
    report.rows.append({"path": "all", **_summary(durations)})
    report.verdicts["payloads_identical"] = all(payloads[0].identical(p) for p in payloads)
    report.verdicts["result_ids"] = sorted({r.result_id for _, r in results})
    return report
