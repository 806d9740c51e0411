"""Command line interface.

Every evaluation command embeds a run manifest in its JSON output: the
command line, SHA-256 digests of the input files, the resolved seed, the
tool version, a timestamp and the parameter snapshot. Data outputs (text
files, scores) are deterministic given the same inputs, parameters and
seed; the timestamp lives only in the manifest. Seeds resolve in order:
--seed flag, then the UGC_BENCH_SEED environment variable, then 42.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__, align, bootstrap, generate, lm, metrics, report
from .corpus import CorpusValidationError, corpus_stats, parse_corpus, src_normalized
from .tok import intl_tokenize, word_tokenize

DEFAULT_SEED = 42
SEED_ENV_VAR = "UGC_BENCH_SEED"


def resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_SEED


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(command: str, inputs: list[str], params: dict, seed: int | None = None) -> dict:
    return {
        "command": command,
        "inputs": {p: _sha256(p) for p in sorted(set(inputs))},
        "seed": seed,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "params": params,
    }


def _load_corpus(path: str):
    with open(path, "rb") as fh:
        return parse_corpus(fh)


def _read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def _read_token_lines(path: str, tokenizer: str) -> list[list[str]]:
    lines = _read_lines(path)
    if tokenizer == "space":
        return [line.split() for line in lines]
    if tokenizer == "intl":
        return [list(intl_tokenize(line)) for line in lines]
    if tokenizer == "word":
        return [list(word_tokenize(line)) for line in lines]
    raise SystemExit(f"unknown tokenizer {tokenizer!r}")


def _emit(payload: dict) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))


def cmd_validate(args) -> int:
    try:
        corpus = _load_corpus(args.corpus)
    except CorpusValidationError as e:
        print(f"INVALID [{e.kind}] {e}", file=sys.stderr)
        return 1
    spans = sum(len(r.spans) for r in corpus.records)
    print(f"OK: {len(corpus.records)} records, {spans} spans")
    return 0


def cmd_stats(args) -> int:
    stats = corpus_stats(_load_corpus(args.corpus))
    if args.format == "json":
        payload = stats.to_dict()
        payload["distribution"] = report.distribution_data(stats, mode=args.mode)
        _emit(payload)
        return 0
    rows = report.distribution_data(stats, mode=args.mode)
    table = report.ReportTable(
        title=f"count ({args.mode})",
        row_labels=tuple(f"{r['code']} {r['label']}" for r in rows),
        col_labels=("count",),
        cells=tuple((report.Cell(value=float(r["count"]), kind=report.KIND_COUNT),) for r in rows),
    )
    print(report.render(table, args.format), end="")
    return 0


def cmd_normalize(args) -> int:
    corpus = _load_corpus(args.corpus)
    os.makedirs(args.out, exist_ok=True)
    _write_lines(os.path.join(args.out, "src.txt"), [r.src for r in corpus.records])
    _write_lines(os.path.join(args.out, "src_normalized.txt"),
                 [src_normalized(r) for r in corpus.records])
    _write_lines(os.path.join(args.out, "tgt.txt"), [r.tgt for r in corpus.records])
    _write_lines(os.path.join(args.out, "tgt_norm.txt"), [r.tgt_norm for r in corpus.records])
    manifest = build_manifest("normalize", [args.corpus], {"out": args.out})
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote 4 files for {len(corpus.records)} records to {args.out}")
    return 0


def _keep_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    n = int(text)
    return n, n


def cmd_generate(args) -> int:
    corpus = _load_corpus(args.corpus)
    sets = []
    if args.single_type is not None:
        codes = range(1, 14) if args.single_type == "all" else [int(args.single_type)]
        for code in codes:
            sets.append(generate.single_type_sets(corpus, code, strict=args.strict,
                                                  reference_policy=args.reference))
    else:
        lo, hi = _keep_range(args.exactly_n)
        sets.append(generate.exactly_n_sets(corpus, lo, hi, cap=args.cap,
                                            reference_policy=args.reference))
    run = build_manifest("generate", [args.corpus], {
        "single_type": args.single_type, "strict": args.strict,
        "exactly_n": args.exactly_n, "cap": args.cap, "reference": args.reference,
    })
    written = []
    for eval_set in sets:
        sub = os.path.join(args.out, eval_set.label.replace("/", "-"))
        manifest = generate.export_eval_set(eval_set, sub)
        manifest["run"] = run
        with open(os.path.join(sub, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")
        written.append((eval_set.label, len(eval_set)))
    for label, size in written:
        print(f"{label}: {size} variants")
    return 0


def cmd_evaluate(args) -> int:
    hyps = _read_lines(args.hyp)
    refs = _read_lines(args.ref)
    score = metrics.score_corpus(args.metric, hyps, refs)
    seed = resolve_seed(args.seed)
    payload = {
        "metric": args.metric,
        "score": score.value,
        "components": score.components,
        "manifest": build_manifest("evaluate", [args.hyp, args.ref],
                                   {"metric": args.metric, "bootstrap": args.bootstrap,
                                    "level": args.level}, seed=seed),
    }
    if args.bootstrap:
        ci = bootstrap.bootstrap_ci(list(zip(hyps, refs)), args.metric,
                                    b=args.bootstrap, level=args.level, seed=seed)
        payload["ci"] = ci.to_dict()
    _emit(payload)
    return 0


def cmd_ratio(args) -> int:
    noisy_pairs = list(zip(_read_lines(args.noisy_hyp), _read_lines(args.noisy_ref)))
    norm_pairs = list(zip(_read_lines(args.norm_hyp), _read_lines(args.norm_ref)))
    noisy = metrics.score_corpus(args.metric, [h for h, _ in noisy_pairs], [r for _, r in noisy_pairs])
    normalized = metrics.score_corpus(args.metric, [h for h, _ in norm_pairs], [r for _, r in norm_pairs])
    rep = metrics.ratio(noisy, normalized, label=args.label)
    seed = resolve_seed(args.seed)
    payload = rep.to_dict()
    payload["manifest"] = build_manifest(
        "ratio",
        [args.noisy_hyp, args.noisy_ref, args.norm_hyp, args.norm_ref],
        {"metric": args.metric, "paired_bootstrap": args.paired_bootstrap,
         "level": args.level, "label": args.label}, seed=seed)
    if args.paired_bootstrap and not rep.undefined:
        ci = bootstrap.paired_bootstrap_ratio(noisy_pairs, norm_pairs, args.metric,
                                              b=args.paired_bootstrap, level=args.level,
                                              seed=seed)
        payload["ci"] = ci.to_dict()
    _emit(payload)
    return 0


def cmd_divergence(args) -> int:
    train = _read_token_lines(args.train, args.tokenizer)
    test = _read_token_lines(args.test, args.tokenizer)
    rep = lm.divergence_report(train, test, label=args.label, lm_order=args.order,
                               alpha=args.alpha, unk_threshold=args.unk_threshold)
    payload = rep.to_dict()
    payload["manifest"] = build_manifest(
        "divergence", [args.train, args.test],
        {"order": args.order, "alpha": args.alpha, "unk_threshold": args.unk_threshold,
         "tokenizer": args.tokenizer, "label": args.label})
    _emit(payload)
    return 0


def cmd_lm_train(args) -> int:
    train = _read_token_lines(args.train, args.tokenizer)
    model = lm.train_kn(train, order=args.order, unk_threshold=args.unk_threshold)
    lm.write_arpa(model, args.out)
    print(f"wrote order-{args.order} model over {len(model.vocab)} symbols to {args.out}")
    if model.fallback_orders:
        print(f"note: discount fell back to {lm.FALLBACK_DISCOUNT} at orders "
              f"{list(model.fallback_orders)}", file=sys.stderr)
    return 0


def cmd_lm_ppl(args) -> int:
    model = lm.read_arpa(args.model)
    test = _read_token_lines(args.test, args.tokenizer)
    payload = {
        "ppl": lm.perplexity(model, test),
        "oov_pct": lm.oov_rate(model.vocab - {lm.UNK, lm.EOS}, test),
        "manifest": build_manifest("lm ppl", [args.model, args.test],
                                   {"tokenizer": args.tokenizer}),
    }
    _emit(payload)
    return 0


def cmd_align_train(args) -> int:
    src = _read_token_lines(args.src, args.tokenizer)
    tgt = _read_token_lines(args.tgt, args.tokenizer)
    if len(src) != len(tgt):
        raise SystemExit(f"length mismatch: {len(src)} source vs {len(tgt)} target sentences")
    model = align.train_ibm1(list(zip(src, tgt)), iterations=args.iterations)
    align.write_table(model, args.out, min_prob=args.min_prob)
    ll = model.log_likelihood
    print(f"trained {args.iterations} iterations, log-likelihood {ll[0]:.4f} -> {ll[-1]:.4f}")
    return 0


def cmd_align_replace_unk(args) -> int:
    model = align.read_table(args.table)
    src = _read_token_lines(args.src, args.tokenizer)
    hyp = _read_token_lines(args.hyp, args.tokenizer)
    if len(src) != len(hyp):
        raise SystemExit(f"length mismatch: {len(src)} source vs {len(hyp)} hypothesis sentences")
    out_lines = [align.replace_unk(model, s, h, unk_token=args.unk_token)
                 for s, h in zip(src, hyp)]
    if args.out:
        _write_lines(args.out, out_lines)
    else:
        for line in out_lines:
            print(line)
    return 0


def cmd_report(args) -> int:
    with open(args.table, "r", encoding="utf-8") as fh:
        table = report.parse_json(fh.read())
    print(report.render(table, args.format), end="")
    return 0


def cmd_serve(args) -> int:
    from .server import make_server

    server = make_server(args.corpus, host=args.host, port=args.port, ui_dir=args.ui)
    host, port = server.server_address[:2]
    print(f"serving {args.corpus} on http://{host}:{port}/ (ctrl-c to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _add_tokenizer_arg(p, default="space"):
    p.add_argument("--tokenizer", choices=("space", "intl", "word"), default=default,
                   help="how to split input lines into tokens (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ugc-bench",
                                     description="Noisy UGC translation benchmark toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a corpus file against the schema")
    p.add_argument("corpus")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="annotation statistics and code distribution")
    p.add_argument("corpus")
    p.add_argument("--mode", choices=("per-code", "per-span"), default="per-code")
    p.add_argument("--format", choices=("json", "md", "csv"), default="json")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("normalize", help="write aligned raw and normalized text files")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("generate", help="write controlled evaluation sets")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--single-type", metavar="CODE",
                       help="one variant per span of this code (1..13 or 'all')")
    group.add_argument("--exactly-n", metavar="N[..M]",
                       help="all variants keeping exactly N (or N..M) spans")
    p.add_argument("--strict", action="store_true",
                   help="admit only single-code spans into single-type sets")
    p.add_argument("--cap", type=int, default=None,
                   help="bound on subsets per record and N")
    p.add_argument("--reference", choices=("normalized", "original"), default="normalized")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="score a hypothesis file against a reference file")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--metric", choices=metrics.METRICS, default="bleu-intl")
    p.add_argument("--bootstrap", type=int, default=0, metavar="B",
                   help="resamples for a confidence interval (0 = none)")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ratio", help="noisy/normalized score ratio")
    p.add_argument("--noisy-hyp", required=True)
    p.add_argument("--noisy-ref", required=True)
    p.add_argument("--norm-hyp", required=True)
    p.add_argument("--norm-ref", required=True)
    p.add_argument("--metric", choices=metrics.METRICS, default="bleu-intl")
    p.add_argument("--paired-bootstrap", type=int, default=0, metavar="B")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--label", default="")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("divergence", help="trigram KL, OOV rate and perplexity of test vs train")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--alpha", type=float, default=1e-3)
    p.add_argument("--unk-threshold", type=int, default=1)
    p.add_argument("--label", default="")
    _add_tokenizer_arg(p)
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("lm", help="n-gram language model commands")
    lm_sub = p.add_subparsers(dest="lm_command", required=True)
    q = lm_sub.add_parser("train", help="train a Kneser-Ney model and write it as ARPA")
    q.add_argument("--train", required=True)
    q.add_argument("--order", type=int, default=3)
    q.add_argument("--unk-threshold", type=int, default=1)
    q.add_argument("--out", required=True)
    _add_tokenizer_arg(q)
    q.set_defaults(func=cmd_lm_train)
    q = lm_sub.add_parser("ppl", help="perplexity of a test file under an ARPA model")
    q.add_argument("--model", required=True)
    q.add_argument("--test", required=True)
    _add_tokenizer_arg(q)
    q.set_defaults(func=cmd_lm_ppl)

    p = sub.add_parser("align", help="IBM Model 1 commands")
    al_sub = p.add_subparsers(dest="align_command", required=True)
    q = al_sub.add_parser("train", help="train a translation table")
    q.add_argument("--src", required=True)
    q.add_argument("--tgt", required=True)
    q.add_argument("--iterations", type=int, default=10)
    q.add_argument("--min-prob", type=float, default=0.0,
                   help="omit table rows below this probability")
    q.add_argument("--out", required=True)
    _add_tokenizer_arg(q)
    q.set_defaults(func=cmd_align_train)
    q = al_sub.add_parser("replace-unk", help="project source tokens into UNK slots")
    q.add_argument("--table", required=True)
    q.add_argument("--src", required=True)
    q.add_argument("--hyp", required=True)
    q.add_argument("--unk-token", default="<UNK>")
    q.add_argument("--out", default=None)
    _add_tokenizer_arg(q)
    q.set_defaults(func=cmd_align_replace_unk)

    p = sub.add_parser("report", help="re-render a JSON result table as md, csv or json")
    p.add_argument("table")
    p.add_argument("--format", choices=("md", "csv", "json"), default="md")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="serve the corpus over the annotation HTTP API")
    p.add_argument("corpus")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8737)
    p.add_argument("--ui", default=None, help="directory of UI static files to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CorpusValidationError as e:
        print(f"error [{e.kind}] {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
