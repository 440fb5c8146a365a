"""Command line: ``negseq {mine,match,gen,bench}``.

Input and output default to stdin/stdout. Item labels in pattern text are
the labels used in the SPMF input.
"""
from __future__ import annotations

import argparse
import contextlib
import logging
import sys

from . import bench, ensp, generator, io, negpspan
from .model import InvalidPatternError
from .oracle import (
    EmbeddingMode,
    GapConstraints,
    Inclusion,
    OccurrenceMode,
    SemanticsConfig,
    occurs,
    support,
)

log = logging.getLogger("negseq")


def _sigma(text: str):
    """``0.1`` or ``10%`` is a fraction of the db, ``3`` is a count."""
    text = text.strip()
    try:
        if text.endswith("%"):
            return float(text[:-1]) / 100
        if any(c in text for c in ".eE"):
            return float(text)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid support {text!r}") from None


def _bound(text: str):
    if text.lower() in ("inf", "none", "-"):
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bound {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("bounds must be >= 1")
    return v


def _positive_int(text: str):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


@contextlib.contextmanager
def _open(path, mode):
    if path in (None, "-"):
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8", newline="") as fh:
            yield fh


def _read_db(args):
    symbols = io.SymbolTable()
    with _open(args.input, "r") as fh:
        db = io.read_spmf(fh, symbols)
    return db, symbols


def cmd_mine(args):
    if args.algo == "ensp" and (args.maxgap is not None or args.maxspan is not None):
        raise SystemExit("error: eNSP cannot honour --maxgap/--maxspan")
    db, symbols = _read_db(args)
    if args.algo == "ensp":
        results = ensp.mine(db, args.sigma, args.partner_frac, args.maxlen)
    else:
        neg_itemsets = None
        if args.neg_lang:
            with open(args.neg_lang, encoding="utf-8") as fh:
                neg_itemsets = io.read_itemsets(fh, symbols)
        cfg = negpspan.MinerConfig(
            sigma=args.sigma, maxgap=args.maxgap, maxspan=args.maxspan, max_length=args.maxlen,
            nu=args.nu, neg_itemsets=neg_itemsets, no_surrounding=not args.allow_surrounding,
            inclusion=Inclusion(args.inclusion),
        )
        results = negpspan.mine(db, cfg)
    with _open(args.output, "w") as out:
        n = io.write_results(results, out, symbols, tidset=args.tidsets)
    log.info("%d patterns", n)
    return 0


def cmd_match(args):
    db, symbols = _read_db(args)
    p = io.parse_pattern(args.pattern, symbols)
    cfg = SemanticsConfig(Inclusion(args.inclusion), EmbeddingMode(args.embedding),
                          OccurrenceMode(args.occurrence))
    gaps = GapConstraints(args.maxgap, args.maxspan)
    with _open(args.output, "w") as out:
        out.write("sid,occurs\n")
        for s in db:
            out.write(f"{s.sid},{int(occurs(p, s, cfg, gaps))}\n")
    count, _ = support(p, db, cfg, gaps)
    log.info("support %d of %d", count, len(db))
    return 0


def cmd_gen(args):
    params = generator.GenParams(n=args.n, l=args.len, d=args.alphabet, n_patterns=args.patterns,
                                 pattern_len=args.patlen, min_occ_freq=args.freq, seed=args.seed)
    db, hidden = generator.generate(params)
    target = args.out or args.output
    with _open(target, "w") as out:
        io.write_spmf(db, out)
    sidecar = args.hidden or (target + ".hidden" if target not in (None, "-") else None)
    if sidecar:
        with open(sidecar, "w", encoding="utf-8", newline="") as fh:
            for h in hidden:
                count, _ = support(h, db)
                fh.write(f"{io.format_pattern(h)} #SUP: {count}\n")
    elif hidden:
        log.warning("hidden patterns not written (no --out or --hidden)")
    return 0


def cmd_bench(args):
    datasets = list(args.dataset or [])
    if args.input:
        datasets.append(args.input)
    for seed in range(args.gen_seeds or 0):
        datasets.append(f"gen:seed={seed},l={args.gen_len}")
    cells = bench.expand_grid(args.algo, datasets, args.sigma, args.maxgap or [None],
                              args.maxspan or [None], max_length=args.maxlen,
                              partner_frac=args.partner_frac)
    with _open(args.output, "w") as out:
        rows = bench.run_bench(cells, out, timeout=args.timeout, jobs=args.jobs)
    return 1 if any(r.status == "error" for r in rows) else 0


def _common(top: bool) -> argparse.ArgumentParser:
    # the global flags are accepted before and after the subcommand; the
    # subcommand copy must not reset values given before it
    kw = {} if top else {"default": argparse.SUPPRESS}
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="input SPMF file (default stdin)", **kw)
    common.add_argument("--output", "-o", help="output file (default stdout)", **kw)
    common.add_argument("--format", choices=["spmf"], **({"default": "spmf"} if top else kw))
    common.add_argument("-v", "--verbose", action="store_true", **kw)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="negseq", description="Negative sequential pattern mining.",
                                     parents=[_common(True)])
    common = _common(False)
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mine", parents=[common], help="mine frequent negative sequential patterns")
    m.add_argument("--algo", choices=["negpspan", "ensp"], default="negpspan")
    m.add_argument("--sigma", type=_sigma, required=True, help="count, fraction or percentage")
    m.add_argument("--maxgap", type=_bound)
    m.add_argument("--maxspan", type=_bound)
    m.add_argument("--maxlen", type=_positive_int, help="maximum number of items per pattern")
    m.add_argument("--nu", type=_positive_int, help="maximum size of a negated itemset")
    m.add_argument("--neg-lang", help="file of allowed negative itemsets, one per line")
    m.add_argument("--inclusion", choices=[i.value for i in Inclusion], default="total")
    m.add_argument("--allow-surrounding", action="store_true",
                   help="allow negating an item of a neighbouring positive itemset")
    m.add_argument("--partner-frac", type=float, default=1.0,
                   help="eNSP positive-partner threshold as a fraction of sigma")
    m.add_argument("--tidsets", action="store_true", help="append supporting sequence ids")
    m.set_defaults(func=cmd_mine)

    t = sub.add_parser("match", parents=[common], help="test a pattern against every sequence")
    t.add_argument("--pattern", required=True, help="e.g. 'a !(b c) d'")
    t.add_argument("--inclusion", choices=[i.value for i in Inclusion], default="total")
    t.add_argument("--embedding", choices=[e.value for e in EmbeddingMode], default="soft")
    t.add_argument("--occurrence", choices=[o.value for o in OccurrenceMode], default="soft")
    t.add_argument("--maxgap", type=_bound)
    t.add_argument("--maxspan", type=_bound)
    t.set_defaults(func=cmd_match)

    g = sub.add_parser("gen", parents=[common], help="generate a synthetic database")
    g.add_argument("--n", type=int, default=500)
    g.add_argument("--len", type=int, default=20)
    g.add_argument("--alphabet", type=int, default=20)
    g.add_argument("--patterns", type=int, default=3)
    g.add_argument("--patlen", type=int, default=4)
    g.add_argument("--freq", type=float, default=0.10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="SPMF output (same as --output)")
    g.add_argument("--hidden", help="hidden-pattern file (default <out>.hidden)")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", parents=[common], help="run a benchmark grid, CSV output")
    b.add_argument("--algo", nargs="+", choices=list(bench.ALGOS), default=["negpspan", "ensp"])
    b.add_argument("--dataset", nargs="+", help="SPMF paths or gen:key=value,... specs")
    b.add_argument("--gen-seeds", type=int, help="add generated datasets with seeds 0..N-1")
    b.add_argument("--gen-len", type=int, default=20, help="mean length of generated sequences")
    b.add_argument("--sigma", nargs="+", type=_sigma, default=[0.1])
    b.add_argument("--maxgap", nargs="+", type=_bound)
    b.add_argument("--maxspan", nargs="+", type=_bound)
    b.add_argument("--maxlen", type=_positive_int, default=5)
    b.add_argument("--partner-frac", type=float, default=1.0)
    b.add_argument("--timeout", type=float, default=bench.DEFAULT_TIMEOUT)
    b.add_argument("--jobs", type=int, default=1, help=">1 runs cells in parallel, without memory figures")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (io.SpmfParseError, io.PatternSyntaxError, InvalidPatternError, negpspan.ConfigError,
            generator.GenerationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
