"""Command-line entry point: train, recommend, evaluate, stats, serve.

Machine-readable output goes to stdout, a short human summary to stderr.
Failures print {"error": {"type", "message"}} and exit non-zero.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys
import time

from . import bundle as B
from .corpus.loader import CorpusError, SplitError, load_corpus, load_units, read_split
from .corpus.stats import corpus_stats, write_stats
from .evaluation import SCENARIOS, evaluate
from .heavy import DEFAULT_TIMEOUT, HeavyClient, HeavyModelScorer
from .service import Service, ServiceError
from .typesys.index import TypeIndexError

EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 2, 3, 1


class CliError(Exception):
    def __init__(self, kind, message, code=EXIT_INPUT):
        super().__init__(message)
        self.kind = kind
        self.code = code


def _emit(doc, out=None):
    out = out or sys.stdout
    out.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _note(msg):
    print(msg, file=sys.stderr)


def _bundle_path(args):
    path = args.bundle or os.environ.get("ARGREC_BUNDLE")
    if not path:
        raise CliError("usage", "no bundle given (use --bundle or ARGREC_BUNDLE)", EXIT_USAGE)
    return path


def _timeout(args):
    if args.timeout is not None:
        return args.timeout
    env = os.environ.get("ARGREC_TIMEOUT")
    try:
        return float(env) if env else DEFAULT_TIMEOUT
    except ValueError:
        raise CliError("usage", f"ARGREC_TIMEOUT is not a number: {env!r}", EXIT_USAGE) from None


def _load(args):
    try:
        return B.load(_bundle_path(args))
    except B.BundleError as exc:
        raise CliError("bundle", str(exc)) from None


def _heavy(args, trained, bundle_dir):
    if args.heavy == "off":
        return None
    if args.heavy == "bundle":
        return HeavyModelScorer(trained.heavy_model)
    if args.heavy == "process":
        cmd = shlex.split(args.heavy_cmd) if args.heavy_cmd else \
            [sys.executable, "-m", "argrec.heavy", "--bundle", bundle_dir]
        return HeavyClient(cmd, _timeout(args))
    raise CliError("usage", f"unknown heavy mode {args.heavy}", EXIT_USAGE)


def _config(args, trained):
    heavy = _heavy(args, trained, _bundle_path(args))
    kw = {}
    if getattr(args, "rt", None) is not None:
        kw["rt"] = None if args.rt == 0 else args.rt
    return trained.config(heavy=heavy, rules=not args.no_rules,
                          static_features=not args.no_static_features, **kw)


def _strict(args, trained):
    return True if args.strict_compat else trained.options.strict


# ---------------------------------------------------------------- commands

def cmd_train(args):
    if args.split:
        split = read_split(args.split)
        if not split.train:
            raise CliError("split", f"split {args.split} has no training files")
        units = load_units(split.train)
    else:
        units = load_corpus(args.corpus)
    opts = B.TrainOptions(order=args.order, min_count=args.min_count, strict=args.strict_compat)
    man = B.train_bundle(units, args.out, opts)
    _emit({"bundle": args.out, "stats": man["stats"], "warnings": man["warnings"]})
    st = man["stats"]
    _note(f"trained on {st['units']} files ({st['tokens']} tokens, {st['requests']} requests); "
          f"bundle written to {args.out}")


def cmd_recommend(args):
    trained = _load(args)
    doc = {"file": args.file, "k": args.k}
    if args.callee:
        doc.update(callee=args.callee, pos=args.pos)
        if args.line is not None:
            doc["line"] = args.line
    else:
        if args.line is None or args.col is None:
            raise CliError("usage", "give --line and --col, or --callee and --pos", EXIT_USAGE)
        doc.update(line=args.line, col=args.col)
    if args.beam:
        doc["mode"] = "beam"
    cfg = _config(args, trained)
    svc = Service(trained, cfg, _strict(args, trained))
    try:
        out = svc.handle(doc)
    except ServiceError as exc:
        raise CliError(exc.kind, str(exc)) from None
    finally:
        if cfg.heavy is not None:
            cfg.heavy.close()
    _emit(out)
    rq = out["request"]
    _note(f"{rq['callee']} argument {rq['pos']} at {rq['line']}:{rq['col']}: "
          f"{len(out['candidates'])} candidates")
    for i, c in enumerate(out["candidates"][:5], 1):
        _note(f"  {i}. {c.get('rendered', c.get('text'))}  {c['score']:.4g}")


def cmd_evaluate(args):
    trained = _load(args)
    split = read_split(args.split)
    test_units = load_units(split.test)
    if split.train and sorted(f.path for f in split.train) != sorted(trained.files):
        _note("warning: split's training files differ from the bundle's")
    scenarios = SCENARIOS if args.scenario == "all" else (args.scenario,)
    cfg = _config(args, trained)
    reports = {}
    try:
        for sc in scenarios:
            t0 = time.perf_counter()
            rep = evaluate(trained, test_units, sc, cfg, keep_requests=args.requests,
                           strict=_strict(args, trained))
            reports[sc] = rep.to_json(timing=args.timing)
            m = reports[sc]["metrics"]
            _note(f"{sc}: A={m['A']} S={m['S']} top1={m['topK']['1']:.3f} "
                  f"top10={m['topK']['10']:.3f} MRR={m['mrr']:.3f} "
                  f"({rep.mean_latency_ms:.1f} ms/request, {time.perf_counter() - t0:.1f}s)")
    finally:
        if cfg.heavy is not None:
            cfg.heavy.close()
    doc = {"schema": "argrec-report/1", "reports": reports}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            _emit(doc, fh)
    _emit(doc)


def cmd_stats(args):
    units = load_corpus(args.corpus)
    doc = corpus_stats(units, candidate_counts=args.candidates, strict=args.strict_compat)
    if args.out:
        files = write_stats(doc, args.out)
        _note(f"wrote {', '.join(files)} to {args.out}")
    _emit(doc)
    et = doc["distributions"]["exprType"]
    top = sorted(et.items(), key=lambda x: -x[1]["count"])[:3]
    _note(f"{doc['units']} files, {doc['requests']} arguments; top expression types: "
          + ", ".join(f"{k} {v['share']:.0%}" for k, v in top))


def cmd_serve(args):
    trained = _load(args)
    cfg = _config(args, trained)
    svc = Service(trained, cfg, _strict(args, trained))
    try:
        n = svc.serve()
    finally:
        if cfg.heavy is not None:
            cfg.heavy.close()
    _note(f"served {n} requests")


# ---------------------------------------------------------------- parser

def build_parser():
    ap = argparse.ArgumentParser(prog="argrec", description="Argument recommendation for Java method calls.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def ranking_opts(p):
        p.add_argument("--bundle", help="model bundle directory (default: $ARGREC_BUNDLE)")
        p.add_argument("--heavy", choices=("bundle", "process", "off"), default="bundle",
                       help="heavy scorer: in-process reference model, subprocess, or none")
        p.add_argument("--heavy-cmd", help="command for --heavy process (default: the reference scorer)")
        p.add_argument("--timeout", type=float, help="heavy scorer timeout in seconds (default: $ARGREC_TIMEOUT or 2)")
        p.add_argument("--rt", type=int, help="reducing threshold; 0 keeps every candidate")
        p.add_argument("--no-rules", action="store_true", help="disable reduction rules")
        p.add_argument("--no-static-features", action="store_true")
        p.add_argument("--strict-compat", action="store_true", help="only identity and inheritance count as compatible")

    p = sub.add_parser("train", help="train a model bundle from a corpus manifest")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--corpus", help="file listing project roots, one per line")
    g.add_argument("--split", help="train on the 'train' entries of a split file")
    p.add_argument("--out", required=True, help="bundle directory to write")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--strict-compat", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("recommend", help="rank arguments for one call site")
    ranking_opts(p)
    p.add_argument("--file", required=True)
    p.add_argument("--line", type=int)
    p.add_argument("--col", type=int)
    p.add_argument("--callee")
    p.add_argument("--pos", type=int, default=1)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--beam", action="store_true", help="beam-search baseline (no validity filtering)")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("evaluate", help="evaluate a bundle on the test part of a split")
    ranking_opts(p)
    p.add_argument("--split", required=True, help="file of 'train <path>' / 'test <path>' lines")
    p.add_argument("--scenario", choices=SCENARIOS + ("all",), default="static")
    p.add_argument("--out", help="also write the report here")
    p.add_argument("--requests", action="store_true", help="include per-request records")
    p.add_argument("--timing", action="store_true", help="include mean latency (not deterministic)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="argument-usage statistics of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", help="directory for stats.json and per-distribution CSVs")
    p.add_argument("--candidates", action="store_true", help="also count valid candidates per request")
    p.add_argument("--strict-compat", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="answer line-delimited JSON requests on stdin")
    ranking_opts(p)
    p.set_defaults(func=cmd_serve)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CliError as exc:
        _emit({"error": {"type": exc.kind, "message": str(exc)}})
        _note(f"error: {exc}")
        return exc.code
    except (CorpusError, SplitError, B.BundleError, TypeIndexError) as exc:
        kind = ("split" if isinstance(exc, SplitError) else "corpus" if isinstance(exc, CorpusError)
                else "bundle" if isinstance(exc, B.BundleError) else "index")
        _emit({"error": {"type": kind, "message": str(exc)}})
        _note(f"error: {exc}")
        return EXIT_INPUT
    except Exception as exc:
        _emit({"error": {"type": "internal", "message": f"{type(exc).__name__}: {exc}"}})
        _note(f"internal error: {exc}")
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
