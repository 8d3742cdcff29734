"""Wall-clock benchmark comparing the two schemes over key sizes.

Each measurement encrypts a seeded random payload in ECB mode: one warm-up
pass, then a fixed number of timed repetitions whose median is reported.
Timings are wall clock on whatever machine runs them; the point is the
side-by-side comparison, not absolute numbers.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .streams import encrypt_stream, make_cipher

CSV_HEADER = "scheme,key_bits,payload_bytes,workers,wall_ns,ns_per_block,mb_per_s"
DEFAULT_REPS = 5


@dataclass(frozen=True)
class BenchRecord:
    scheme: str
    key_bits: int
    payload_bytes: int
    workers: int
    wall_ns: int

    @property
    def block_count(self) -> int:
        return self.payload_bytes // 16 + 1  # payload blocks plus the pad block

    @property
    def ns_per_block(self) -> float:
        return self.wall_ns / self.block_count

    @property
    def mb_per_s(self) -> float:
        return self.payload_bytes / (1 << 20) / (self.wall_ns / 1e9)

    def csv_row(self) -> str:
        return (
            f"{self.scheme},{self.key_bits},{self.payload_bytes},{self.workers},"
            f"{self.wall_ns},{self.ns_per_block:.1f},{self.mb_per_s:.3f}"
        )


def measure(
    scheme: str, key_bits: int, payload_bytes: int, workers: int, reps: int = DEFAULT_REPS
) -> BenchRecord:
    """Median-of-``reps`` ECB encryption time for one configuration."""
    if payload_bytes < 0 or reps < 1:
        raise ValueError("payload must be non-negative and reps positive")
    rng = np.random.default_rng(abs(hash((scheme, key_bits))) % (1 << 32))
    key = rng.bytes(key_bits // 8)
    payload = rng.bytes(payload_bytes)
    cipher = make_cipher(scheme, key)
    encrypt_stream(payload, cipher, "ecb", workers)  # warm-up
    times = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        encrypt_stream(payload, cipher, "ecb", workers)
        times.append(time.perf_counter_ns() - t0)
    wall = int(statistics.median(times))
    return BenchRecord(scheme, key_bits, payload_bytes, workers, max(wall, 1))


def run_bench(
    schemes=("aes", "pca"),
    key_sizes=(128, 192, 256),
    payload_bytes: int = 1 << 20,
    worker_counts=(1,),
    reps: int = DEFAULT_REPS,
) -> list[BenchRecord]:
    records = []
    for workers in worker_counts:
        for key_bits in key_sizes:
            for scheme in schemes:
                records.append(measure(scheme, key_bits, payload_bytes, workers, reps))
    return records


def to_csv(records: list[BenchRecord]) -> str:
    return "\n".join([CSV_HEADER, *(r.csv_row() for r in records)]) + "\n"


def render_table(records: list[BenchRecord]) -> str:
    """Key sizes down the side, schemes side by side, one block per cell."""
    schemes = sorted({r.scheme for r in records})
    lines = []
    for workers in sorted({r.workers for r in records}):
        subset = [r for r in records if r.workers == workers]
        payload = subset[0].payload_bytes
        lines.append(
            f"Execution time per 16-byte block "
            f"(payload {payload} bytes, workers {workers}, median of reps)"
        )
        header = "Key Size".ljust(12) + "".join(s.ljust(16) for s in schemes)
        lines.append(header)
        for key_bits in sorted({r.key_bits for r in subset}):
            row = f"{key_bits} bit".ljust(12)
            for scheme in schemes:
                rec = next(
                    r for r in subset if r.key_bits == key_bits and r.scheme == scheme
                )
                row += f"{rec.ns_per_block / 1000:.3f} us".ljust(16)
            lines.append(row)
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
