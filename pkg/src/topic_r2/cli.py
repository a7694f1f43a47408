"""Command-line entry point: ``topic-r2 {simulate,ingest,fit,evaluate,sweep}``.

Exit status is 0 on success, 1 for usage errors and 2 for data or validation
errors. Each run echoes its fully resolved configuration to stderr before
doing any work, and writes it next to the primary output as
``<output>.provenance.json``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__, goodness
from .corpus import (
    VOCAB_SUFFIX,
    IngestOptions,
    build_dtm,
    default_stopwords,
    load_dtm,
    read_documents,
    read_stopwords,
    save_dtm,
)
from .experiments import SweepSpec, run_k_sweep, run_property_sweep
from .lda import GibbsConfig, fit_lda
from .model import load_model, read_phi_csv, write_phi_csv, write_theta_csv
from .simgen import SimulationConfig, simulate_corpus

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return obj


def _write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _announce(resolved: dict) -> None:
    print("resolved config: " + json.dumps(resolved, sort_keys=True), file=sys.stderr)


def _provenance(out, resolved: dict) -> None:
    _write_json(resolved, f"{out}.provenance.json")


def cmd_simulate(args) -> int:
    config = SimulationConfig.from_dict(_read_json(args.config)) if args.config else SimulationConfig()
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    resolved = {
        "subcommand": "simulate",
        "config": config.to_dict(),
        "out": args.out,
        "truth_theta": args.truth_theta,
        "truth_phi": args.truth_phi,
    }
    _announce(resolved)
    truth = simulate_corpus(config)
    save_dtm(truth.dtm, args.out)
    if args.truth_theta:
        write_theta_csv(truth.model.theta, truth.dtm.doc_ids, args.truth_theta)
    if args.truth_phi:
        write_phi_csv(truth.model.phi, truth.dtm.vocabulary, args.truth_phi)
    _provenance(args.out, resolved)
    return EXIT_OK


def cmd_ingest(args) -> int:
    if args.stopwords == "none":
        stop = frozenset()
    elif args.stopwords:
        stop = read_stopwords(args.stopwords)
    else:
        stop = default_stopwords()
    options = IngestOptions(stopwords=stop, min_doc_frequency=args.min_df, lowercase=not args.keep_case)
    resolved = {
        "subcommand": "ingest",
        "in": args.input,
        "stopwords": args.stopwords or "<bundled english>",
        "n_stopwords": len(stop),
        "min_df": args.min_df,
        "lowercase": options.lowercase,
        "out": args.out,
    }
    _announce(resolved)
    dtm, dropped = build_dtm(read_documents(args.input), options)
    if dropped:
        print(f"warning: dropped {dropped} document(s) left empty by filtering", file=sys.stderr)
    save_dtm(dtm, args.out)
    _provenance(args.out, {**resolved, "dropped_documents": dropped})
    return EXIT_OK


def cmd_fit(args) -> int:
    config = GibbsConfig(
        k=args.k, alpha=args.alpha, beta=args.beta, burn_in=args.burn_in,
        samples=args.samples, thin=args.thin, seed=args.seed,
    )
    resolved = {"subcommand": "fit", "dtm": args.dtm, "gibbs": config.to_dict(),
                "theta": args.theta, "phi": args.phi}
    _announce(resolved)
    dtm = load_dtm(args.dtm)
    model = fit_lda(dtm, config)
    write_theta_csv(model.theta, dtm.doc_ids, args.theta)
    write_phi_csv(model.phi, dtm.vocabulary, args.phi)
    _provenance(args.theta, resolved)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    resolved = {"subcommand": "evaluate", "dtm": args.dtm, "theta": args.theta, "phi": args.phi,
                "out": args.out, "per_doc": args.per_doc, "threads": args.threads}
    _announce(resolved)
    vocabulary = None
    if not Path(args.dtm + VOCAB_SUFFIX).exists():
        # no column sidecar: take the column order from phi's header
        _, vocabulary, _ = read_phi_csv(args.phi)
    dtm = load_dtm(args.dtm, vocabulary=vocabulary)
    model = load_model(args.theta, args.phi, dtm.doc_ids, dtm.vocabulary)
    fit = goodness.r_squared(dtm, model, threads=args.threads)
    lik = goodness.mcfadden_r2(dtm, model, threads=args.threads)
    report = {"documents": dtm.n_docs, "terms": dtm.n_terms, "tokens": dtm.total_tokens,
              **fit.to_dict(), **lik.to_dict()}
    _write_json(report, args.out)
    if args.per_doc:
        with open(args.per_doc, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["doc_id", "squared_residual"])
            for doc_id, r in zip(dtm.doc_ids, fit.per_doc_resid):
                w.writerow([doc_id, repr(float(r))])
    _provenance(args.out, resolved)
    return EXIT_OK


def _sweep_from_json(obj: dict, base_dir: Path):
    kind = obj.get("kind", "property")
    if kind == "property":
        spec = SweepSpec(
            varied=obj["varied"],
            values=obj["values"],
            base=SimulationConfig.from_dict(obj.get("base", {})),
            seeds=obj.get("seeds", [0]),
            metrics=obj.get("metrics", ["r_squared", "mcfadden", "log_likelihood"]),
        )
        return kind, spec
    if kind == "k":
        if ("corpus" in obj) == ("simulate" in obj):
            raise ValueError("k sweep needs exactly one of 'corpus' or 'simulate'")
        gibbs = GibbsConfig(**{"k": 1, **obj.get("gibbs", {})})
        return kind, (obj.get("corpus"), obj.get("simulate"), obj["k_values"], gibbs)
    raise ValueError(f"unknown sweep kind {kind!r}")


def cmd_sweep(args) -> int:
    spec_path = Path(args.spec)
    kind, spec = _sweep_from_json(_read_json(spec_path), spec_path.parent)
    if kind == "property":
        resolved = {"subcommand": "sweep", "kind": kind, "varied": spec.varied,
                    "values": list(spec.values), "base": spec.base.to_dict(),
                    "seeds": list(spec.seeds), "metrics": list(spec.metrics),
                    "threads": args.threads, "out": args.out}
        _announce(resolved)
        result = run_property_sweep(spec, threads=args.threads)
    else:
        corpus, sim, k_values, gibbs = spec
        resolved = {"subcommand": "sweep", "kind": kind, "k_values": list(k_values),
                    "gibbs": {k: v for k, v in gibbs.to_dict().items() if k != "k"},
                    "threads": args.threads, "out": args.out}
        if corpus is not None:
            corpus_path = Path(corpus)
            if not corpus_path.is_absolute():
                corpus_path = spec_path.parent / corpus_path
            resolved["corpus"] = str(corpus_path)
            _announce(resolved)
            dtm = load_dtm(corpus_path)
        else:
            sim_config = SimulationConfig.from_dict(sim)
            resolved["simulate"] = sim_config.to_dict()
            _announce(resolved)
            dtm = simulate_corpus(sim_config).dtm
        result = run_k_sweep(dtm, k_values, gibbs, threads=args.threads)
    result.write_csv(args.out)
    result.write_provenance(f"{args.out}.provenance.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="topic-r2", description="R-squared and McFadden's pseudo-R-squared for topic models")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="simulate a corpus from the LDA generative process")
    s.add_argument("--config", help="simulation config JSON (defaults used when omitted)")
    s.add_argument("--seed", type=int, help="override the config's seed")
    s.add_argument("--out", required=True, help="triplet file to write")
    s.add_argument("--truth-theta", help="write the generating theta as CSV")
    s.add_argument("--truth-phi", help="write the generating phi as CSV")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("ingest", help="build a DTM from 'id<TAB>text' lines")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--stopwords", help="stopword file, or 'none' (default: bundled English list)")
    s.add_argument("--min-df", type=int, default=2)
    s.add_argument("--keep-case", action="store_true", help="do not lowercase tokens")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("fit", help="fit LDA by collapsed Gibbs sampling")
    s.add_argument("--dtm", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", type=float, default=0.1)
    s.add_argument("--beta", type=float, default=0.01)
    s.add_argument("--burn-in", type=int, default=200)
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--thin", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--theta", required=True)
    s.add_argument("--phi", required=True)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("evaluate", help="compute R-squared and McFadden's R-squared")
    s.add_argument("--dtm", required=True)
    s.add_argument("--theta", required=True)
    s.add_argument("--phi", required=True)
    s.add_argument("--out", required=True, help="report JSON")
    s.add_argument("--per-doc", help="per-document squared residual CSV")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("sweep", help="run a property or estimated-K sweep")
    s.add_argument("--spec", required=True, help="sweep spec JSON")
    s.add_argument("--out", required=True, help="tidy results CSV")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            parser.error("--threads must be >= 1")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        if isinstance(exc, KeyError):
            msg = f"missing key {exc}"
        elif isinstance(exc, OSError) and exc.filename:
            msg = f"{exc.filename}: {exc.strerror}"
        else:
            msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
