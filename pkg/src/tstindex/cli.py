"""Command-line interface: build, query, edit, stats and bench.

Exit status is 0 on success, 1 on usage errors and 2 on data errors
(unreadable files, bad indexes, out-of-range edits or queries).
Patterns and inserted strings are given as hex.
"""
from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from typing import Optional, Sequence

from .index import TstIndex
from .signature import CapacityError
from .strings import lz77, make_text

Z_LIMIT = 1 << 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _hex(s: str) -> bytes:
    try:
        return bytes.fromhex(s)
    except ValueError:
        raise UsageError(f"not a hex string: {s!r}") from None


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x]
    except ValueError:
        raise UsageError(f"not a comma-separated integer list: {s!r}") from None


def _read_text(path: str) -> bytes:
    with open(path, "rb") as fh:
        return make_text(fh.read())


def lz_count(text: bytes, limit: int = Z_LIMIT) -> Optional[int]:
    """LZ77 factor count, or None when the text is too long to factor quickly."""
    return len(lz77(text)) if len(text) <= limit else None


def cmd_build(args, out) -> int:
    text = _read_text(args.input)
    t0 = time.perf_counter()
    ix = TstIndex.build(text, args.q, args.M, static=args.static)
    elapsed = time.perf_counter() - t0
    size = ix.save(args.output)
    st = ix.stats()
    z = lz_count(text) if not args.no_z else None
    print(
        f"N={st['N']} z={'-' if z is None else z} w'={st['w_prime']} qgrams={st['qgrams']} "
        f"build_s={elapsed:.3f} bytes={size}",
        file=out,
    )
    return 0


def cmd_query(args, out) -> int:
    ix = TstIndex.load(args.index)
    if args.mode == "count":
        print(ix.count(_hex(args.pattern)), file=out)
    elif args.mode == "locate":
        for p in ix.locate(_hex(args.pattern)):
            print(p, file=out)
    else:
        data = ix.extract(args.i, args.length)
        out.flush()
        stream = getattr(out, "buffer", None)
        if stream is None:
            out.write(data.decode("latin-1"))
        else:
            stream.write(data)
            stream.flush()
    return 0


def cmd_edit(args, out) -> int:
    ix = TstIndex.load(args.index)
    if args.op == "insert":
        ix.insert(args.position, _hex(args.payload))
    else:
        try:
            k = int(args.payload)
        except ValueError:
            raise UsageError(f"delete length must be an integer, got {args.payload!r}") from None
        ix.delete(args.position, k)
    ix.save(args.index)
    return 0


def cmd_stats(args, out) -> int:
    ix = TstIndex.load(args.index)
    for k, v in ix.stats().items():
        print(f"{k}\t{v}", file=out)
    return 0


def _mean_us(fn, items, warmup: int = 10) -> float:
    for p in items[:warmup]:
        fn(p)
    t0 = time.perf_counter()
    for p in items:
        fn(p)
    return (time.perf_counter() - t0) / max(1, len(items)) * 1e6


def bench_rows(text: bytes, q_list: Sequence[int], lengths: Sequence[int], samples: int, seed: int) -> list[dict]:
    body = text[:-1]
    rows = []
    for q in q_list:
        ix = TstIndex.build(text, q)
        nbytes = len(ix.to_bytes())
        for m in lengths:
            if m > len(body):
                continue
            rng = random.Random(f"{seed}:{q}:{m}")
            pats = [body[a : a + m] for a in (rng.randrange(len(body) - m + 1) for _ in range(samples))]
            occ = sum(ix.count(p) for p in pats)
            rows.append(
                {
                    "q": q,
                    "m": m,
                    "count_us": round(_mean_us(ix.count, pats), 3),
                    "locate_us": round(_mean_us(ix.locate, pats), 3),
                    "occ": occ,
                    "index_bytes": nbytes,
                }
            )
    return rows


def cmd_bench(args, out) -> int:
    text = _read_text(args.input)
    rows = bench_rows(text, _int_list(args.q), _int_list(args.m), args.samples, args.seed)
    w = csv.DictWriter(out, fieldnames=["q", "m", "count_us", "locate_us", "occ", "index_bytes"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tstindex", description="Compressed dynamic self-index (q-TST + signature grammar).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="index a file")
    b.add_argument("input")
    b.add_argument("-q", type=int, required=True)
    b.add_argument("-M", type=int, default=None, help="capacity (maximum text length); default 2N")
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--static", action="store_true", help="enable shortcut offsets for faster locate")
    b.add_argument("--no-z", action="store_true", help="skip the LZ77 factor count")
    b.set_defaults(func=cmd_build)

    qp = sub.add_parser("query", help="count, locate or extract")
    qsub = qp.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    for mode in ("count", "locate"):
        m = qsub.add_parser(mode)
        m.add_argument("index")
        m.add_argument("pattern", help="pattern as hex")
    e = qsub.add_parser("extract")
    e.add_argument("index")
    e.add_argument("i", type=int)
    e.add_argument("length", type=int)
    qp.set_defaults(func=cmd_query)

    ed = sub.add_parser("edit", help="insert or delete, rewriting the index file atomically")
    ed.add_argument("index")
    ed.add_argument("op", choices=["insert", "delete"])
    ed.add_argument("position", type=int)
    ed.add_argument("payload", help="hex string to insert, or number of symbols to delete")
    ed.set_defaults(func=cmd_edit)

    s = sub.add_parser("stats", help="print index statistics")
    s.add_argument("index")
    s.set_defaults(func=cmd_stats)

    be = sub.add_parser("bench", help="time count and locate; CSV on stdout")
    be.add_argument("input")
    be.add_argument("--q", default="4,8,16,32", help="comma-separated q values")
    be.add_argument("--m", default="4,8,16,32,64", help="comma-separated pattern lengths")
    be.add_argument("--samples", type=int, default=100)
    be.add_argument("--seed", type=int, default=0)
    be.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = make_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"tstindex: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, IndexError, KeyError, CapacityError) as exc:
        print(f"tstindex: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
