"""pcacrypt command line: encrypt, decrypt, analyze, bench.

Exit codes: 0 success, 2 usage, 3 key problems, 4 I/O failures, 5 corrupt
ciphertext. Human-readable results go to stdout, diagnostics to stderr,
and output files are written atomically (temp file, then rename) so a
failure never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from pathlib import Path

from .bench import run_bench, render_table, to_csv
from .cipher import KeyFormatError
from .eca import Boundary
from .streams import CorruptCiphertextError, decrypt_stream, encrypt_stream, make_cipher
from .transitions import build_graph, export_csv, export_dot, find_cycles

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_KEY = 3
EXIT_IO = 4
EXIT_CORRUPT = 5

KEY_HEX_DIGITS = (32, 48, 64)


class UsageError(ValueError):
    pass


def _default_threads() -> int:
    raw = os.environ.get("PCACRYPT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcacrypt",
        description="Cellular-automata block cipher toolkit: file encryption, "
        "transition-diagram analysis, and scheme benchmarking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("encrypt", "encrypt a file"), ("decrypt", "decrypt a file")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scheme", choices=("pca", "aes"), default="pca")
        p.add_argument("--key", required=True, help="hex key file (32/48/64 digits)")
        p.add_argument("--in", dest="input", required=True, help="input path")
        p.add_argument("--out", dest="output", required=True, help="output path")
        p.add_argument("--mode", choices=("ecb", "ctr"), default="ecb")
        p.add_argument("--threads", type=int, default=None, help="worker count")

    p = sub.add_parser("analyze", help="cycle-decompose a PCA step and export DOT/CSV")
    p.add_argument("--rules", required=True, help="comma-separated rule numbers, "
                   "or one rule to apply uniformly")
    p.add_argument("--width", type=int, default=None, help="cell count")
    p.add_argument("--boundary", choices=("null", "periodic"), default="null")
    p.add_argument("--dot", default=None, help="write a DOT digraph here")
    p.add_argument("--csv", default=None, help="write a per-state CSV here")

    p = sub.add_parser("bench", help="compare schemes in the shape of a timing table")
    p.add_argument("--sizes", default="128,192,256", help="key sizes in bits")
    p.add_argument("--bytes", dest="payload_bytes", type=int, default=1 << 20,
                   help="payload size per measurement")
    p.add_argument("--threads", default=None, help="worker count, or comma list")
    p.add_argument("--csv", default=None, help="write bench records here")
    return parser


def load_key(path: str) -> bytes:
    text = Path(path).read_text()
    digits = text.strip()
    if len(digits) not in KEY_HEX_DIGITS:
        raise KeyFormatError(
            f"key file must hold 32, 48, or 64 hex digits, got {len(digits)}"
        )
    try:
        return bytes.fromhex(digits)
    except ValueError:
        raise KeyFormatError("key file is not valid hex") from None


def atomic_write(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _cmd_crypt(args, encrypting: bool) -> int:
    key = load_key(args.key)
    data = Path(args.input).read_bytes()
    cipher = make_cipher(args.scheme, key)
    workers = args.threads if args.threads is not None else _default_threads()
    if workers < 1:
        raise UsageError("--threads must be at least 1")
    if encrypting:
        out = encrypt_stream(data, cipher, args.mode, workers)
    else:
        out = decrypt_stream(data, cipher, args.mode, workers)
    atomic_write(args.output, out)
    return EXIT_OK


def _parse_rules(raw: str, width: int | None) -> list[int]:
    try:
        rules = [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError:
        raise UsageError(f"--rules must be comma-separated integers, got {raw!r}") from None
    if not rules:
        raise UsageError("--rules is empty")
    if any(not 0 <= r <= 255 for r in rules):
        raise UsageError("rule numbers must lie in [0, 255]")
    if len(rules) == 1 and width is not None:
        rules = rules * width
    if width is not None and len(rules) != width:
        raise UsageError(f"--width {width} does not match {len(rules)} rules")
    return rules


def _format_lengths(lengths) -> str:
    parts = []
    for value, group in itertools.groupby(sorted(lengths)):
        count = len(list(group))
        if count > 4:
            parts.append(f"{value}×{count}")
        else:
            parts.extend([str(value)] * count)
    return "[" + ",".join(parts) + "]"


def _cmd_analyze(args) -> int:
    rules = _parse_rules(args.rules, args.width)
    boundary = Boundary.parse(args.boundary)
    try:
        graph = build_graph(rules, boundary)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    decomposition = find_cycles(graph)
    if args.dot:
        atomic_write(args.dot, export_dot(graph, decomposition).encode())
    if args.csv:
        atomic_write(args.csv, export_csv(graph, decomposition).encode())
    print(
        f"cycles={len(decomposition.cycles)} "
        f"lengths={_format_lengths(decomposition.cycle_lengths)} "
        f"transients={len(decomposition.transients)}"
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        sizes = tuple(int(tok) for tok in args.sizes.split(","))
        raw_threads = args.threads if args.threads is not None else str(_default_threads())
        workers = tuple(int(tok) for tok in str(raw_threads).split(","))
    except ValueError:
        raise UsageError("--sizes and --threads must be comma-separated integers") from None
    if any(s not in (128, 192, 256) for s in sizes):
        raise UsageError("key sizes must be in {128, 192, 256}")
    if any(w < 1 for w in workers) or args.payload_bytes < 0:
        raise UsageError("--threads entries must be >= 1 and --bytes non-negative")
    records = run_bench(("aes", "pca"), sizes, args.payload_bytes, workers)
    if args.csv:
        atomic_write(args.csv, to_csv(records).encode())
    print(render_table(records), end="")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "encrypt":
            return _cmd_crypt(args, encrypting=True)
        if args.command == "decrypt":
            return _cmd_crypt(args, encrypting=False)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "bench":
            return _cmd_bench(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"pcacrypt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyFormatError as exc:
        print(f"pcacrypt: key error: {exc}", file=sys.stderr)
        return EXIT_KEY
    except CorruptCiphertextError as exc:
        print(f"pcacrypt: corrupt ciphertext: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except OSError as exc:
        print(f"pcacrypt: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
