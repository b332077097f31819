"""Benchmark harness: per-algorithm timings and the size claims.

The headline claims this reproduces at desk scale:

  * the re-encryption key's cryptographic token is two group elements no
    matter how large n or |S| get, while a naive per-condition scheme pays
    two elements per condition (linear);
  * rekeygen wall-time is dominated by its two exponentiations, so growing
    n (and |S| with it) barely moves it.

Rows report measured wall-times and exact serialized sizes; nothing asserts
absolute durations — shapes and sizes only, hardware-independent.
"""

from __future__ import annotations

import csv
import secrets
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import codec, core
from .pairing import DeterministicRandom

CSV_HEADER = ["operation", "n", "set_size", "mean_ns", "std_ns", "iters", "bytes", "seed"]

OPERATIONS = [
    "keygen",
    "rekeygen",
    "rekeygen_naive",
    "enc2",
    "enc1",
    "reenc",
    "dec2",
    "dec1",
]

WARMUP = 5


@dataclass(frozen=True)
class BenchRow:
    """One (operation, n, |S|) measurement.

    bytes is the serialized size of the operation's output: the envelope for
    keys/ciphertexts, the bare two-element token for rekeygen (that is the
    constant-size claim), |S| * two elements for the naive baseline, and the
    plaintext length for decryptions.  mom_ns (median of means over 5
    sample chunks) is a robustness statistic reported beside the mean; it is
    not part of the CSV schema and does not participate in equality.
    """

    operation: str
    n: int
    set_size: int
    mean_ns: int
    std_ns: int
    iters: int
    bytes: int
    seed: int
    mom_ns: int = field(default=0, compare=False)


@dataclass
class BenchReport:
    curve: str
    rows: list[BenchRow]

    def row(self, operation: str, n: int, set_size: int | None = None) -> BenchRow:
        for r in self.rows:
            if r.operation == operation and r.n == n and (set_size is None or r.set_size == set_size):
                return r
        raise KeyError(f"no row for {operation} n={n} set_size={set_size}")

    def summary(self) -> str:
        lines = [
            f"curve {self.curve}; times in ms (mean / median-of-means); sizes in bytes",
            f"{'operation':<16}{'n':>6}{'|S|':>6}{'mean':>10}{'mom':>10}{'bytes':>10}",
        ]
        for r in self.rows:
            lines.append(
                f"{r.operation:<16}{r.n:>6}{r.set_size:>6}"
                f"{r.mean_ns / 1e6:>10.3f}{r.mom_ns / 1e6:>10.3f}{r.bytes:>10}"
            )
        return "\n".join(lines)


def measure(fn, iterations: int) -> tuple[int, int, int]:
    """(mean_ns, std_ns, mom_ns) over `iterations` timed calls after warmup."""
    for _ in range(WARMUP):
        fn()
    samples = []
    for _ in range(iterations):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    mean = statistics.fmean(samples)
    std = statistics.pstdev(samples)
    chunks = max(1, min(5, len(samples)))
    size = len(samples) // chunks
    means = [statistics.fmean(samples[i * size : (i + 1) * size]) for i in range(chunks)]
    return round(mean), round(std), round(statistics.median(means))


def run_sweep(
    n_values: list[int],
    set_fractions: list[float],
    iterations: int,
    curve: str = "ss512",
    l: int = 32,
    seed: int | None = None,
) -> BenchReport:
    """Time every operation for each (n, |S| = fraction*n) combination.

    Keys and fixtures are regenerated per n; timings use a seeded generator
    so a report is reproducible from its recorded seed.
    """
    if iterations < 30:
        raise ValueError("iterations must be >= 30 for stable rows")
    if seed is None:
        seed = secrets.randbits(32)
    rng = DeterministicRandom(seed)
    par = core.setup(curve, l=l, rng=rng)
    ebytes = par.ctx.element_bytes
    order = par.ctx.order
    m = rng.fill(l)
    rows: list[BenchRow] = []

    for n in n_values:
        pk_i, sk_i = core.keygen(par, n, rng)
        pk_j, sk_j = core.keygen(par, n, rng)
        inv_a1 = pow(sk_i.a1, -1, order)
        pk_bytes = len(codec.encode(pk_i))
        for frac in set_fractions:
            set_size = max(1, min(n, round(frac * n)))
            S = frozenset(range(1, set_size + 1))
            rho = 1
            rk = core.rekeygen(par, S, sk_i, pk_i, pk_j)
            ct2 = core.enc2(par, pk_i, m, rho, rng)
            ct1 = core.reenc(par, pk_i, rk, ct2, rng)
            ct2_bytes = len(codec.encode(ct2))
            ct1_bytes = len(codec.encode(ct1))

            def naive_rekeygen():
                out = []
                for v in S:
                    out.append(pk_j.pk1 ** inv_a1)
                    out.append(pk_i.gpow(n + 1 - v) ** sk_i.a2)
                return out

            timed = {
                "keygen": (lambda: core.keygen(par, n, rng), pk_bytes),
                "rekeygen": (
                    lambda: core.rekeygen(par, S, sk_i, pk_i, pk_j),
                    len(codec.encode_rekey_token(rk)),
                ),
                "rekeygen_naive": (naive_rekeygen, set_size * 2 * ebytes),
                "enc2": (lambda: core.enc2(par, pk_i, m, rho, rng), ct2_bytes),
                "enc1": (lambda: core.enc1(par, pk_j, m, rng), ct1_bytes),
                "reenc": (lambda: core.reenc(par, pk_i, rk, ct2, rng), ct1_bytes),
                "dec2": (lambda: core.dec2(par, sk_i, pk_i, ct2, rng), l),
                "dec1": (lambda: core.dec1(par, sk_j, ct1), l),
            }
            for op in OPERATIONS:
                fn, out_bytes = timed[op]
                mean, std, mom = measure(fn, iterations)
                rows.append(
                    BenchRow(op, n, set_size, mean, std, iterations, out_bytes, seed, mom)
                )
    return BenchReport(curve, rows)


def emit_csv(report: BenchReport, path: str | Path) -> Path:
    """Write the report with the fixed column order."""
    if not report.rows:
        raise ValueError("empty report")
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for r in report.rows:
            writer.writerow(
                [r.operation, r.n, r.set_size, r.mean_ns, r.std_ns, r.iters, r.bytes, r.seed]
            )
    return path


def parse_csv(path: str | Path, curve: str = "ss512") -> BenchReport:
    """Re-read an emitted CSV.  mom_ns is not persisted and parses as 0;
    row equality ignores it."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        rows = [
            BenchRow(op, int(n), int(s), int(mean), int(std), int(it), int(b), int(seed))
            for op, n, s, mean, std, it, b, seed in reader
        ]
    return BenchReport(curve, rows)
