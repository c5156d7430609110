"""Command-line entry point: corpus generation, preprocessing, training,
evaluation, offline file filtering, and serving.

Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import classifier, corpus, preprocess, server, synth
from .data_files import default_lexicon_path, default_stopwords_path
from .errors import (
    BindError,
    InvalidFraction,
    MalformedInput,
    ModelLoadError,
    SmartBulletsError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_manifest(path) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fin:
        doc = json.load(fin)
    if not isinstance(doc, dict):
        raise MalformedInput("manifest must be a JSON object")
    return doc


def _setting(args_value, manifest: dict, key: str, default=None):
    if args_value is not None:
        return args_value
    return manifest.get(key, default)


def _load_corpus_records(paths) -> list[corpus.ScoredRecord]:
    records = []
    for path in paths:
        with open(path, "rb") as fin:
            bullets = corpus.parse_tencent_json(fin.read())
        records.extend(
            corpus.ScoredRecord(content=b.content, score=corpus.score(b)) for b in bullets
        )
    return records


def _example_to_dict(ex: preprocess.LabeledExample) -> dict:
    return {"tokens": list(ex.tokens), "label": ex.label, "score": ex.score}


def _example_from_dict(d: dict) -> preprocess.LabeledExample:
    return preprocess.LabeledExample(
        tokens=tuple(d["tokens"]), label=int(d["label"]), score=int(d["score"])
    )


def _load_dataset(path) -> tuple[list, list, dict]:
    with open(path, encoding="utf-8") as fin:
        doc = json.load(fin)
    train = [_example_from_dict(d) for d in doc["train"]]
    test = [_example_from_dict(d) for d in doc["test"]]
    return train, test, doc.get("meta", {})


def cmd_gen_corpus(args) -> int:
    records, labels = synth.generate(args.size, args.seed, args.noise)
    synth.write_corpus(records, labels, args.out, args.labels)
    print(
        json.dumps(
            {
                "records": len(records),
                "unique_contents": len(labels),
                "positive_labels": sum(labels.values()),
                "negative_labels": len(labels) - sum(labels.values()),
            }
        )
    )
    return 0


def cmd_preprocess(args) -> int:
    manifest = _read_manifest(args.manifest)
    corpus_paths = _setting(args.corpus, manifest, "corpus")
    if corpus_paths is None:
        raise _UsageError("no corpus file given (--corpus or manifest key 'corpus')")
    if isinstance(corpus_paths, str):
        corpus_paths = [corpus_paths]
    labels_path = _setting(args.labels, manifest, "labels")
    if labels_path is None:
        raise _UsageError("no label file given (--labels or manifest key 'labels')")
    out_path = _setting(args.out, manifest, "dataset")
    if out_path is None:
        raise _UsageError("no output path given (--out or manifest key 'dataset')")
    lexicon_path = _setting(args.lexicon, manifest, "lexicon", default_lexicon_path())
    stopwords_path = _setting(args.stopwords, manifest, "stopwords", default_stopwords_path())
    test_fraction = float(_setting(args.test_fraction, manifest, "test_fraction", 0.2))
    seed = int(_setting(args.seed, manifest, "seed", 0))

    lex = preprocess.Lexicon.from_file(lexicon_path)
    stop = preprocess.StopwordSet.from_file(stopwords_path)
    labels = preprocess.load_labels(labels_path)

    raw = _load_corpus_records(corpus_paths)
    aggregated = preprocess.aggregate(raw)
    examples, dropped_empty = preprocess.apply_labels(aggregated, labels, lex, stop)
    train, test = preprocess.split_train_test(examples, test_fraction, seed)

    meta = {
        "raw_records": len(raw),
        "after_aggregation": len(aggregated),
        "labeled": len(examples) + dropped_empty,
        "dropped_empty": dropped_empty,
        "examples": len(examples),
        "train_size": len(train),
        "test_size": len(test),
        "test_fraction": test_fraction,
        "seed": seed,
    }
    doc = {
        "meta": meta,
        "train": [_example_to_dict(e) for e in train],
        "test": [_example_to_dict(e) for e in test],
    }
    with open(out_path, "w", encoding="utf-8") as fout:
        fout.write(json.dumps(doc, ensure_ascii=False, separators=(",", ":")))
    print(json.dumps(meta))
    return 0


def _report_row_dict(row: classifier.ReportRow) -> dict:
    return {
        "step": row.step,
        "train_loss": row.train_loss,
        "accuracy": row.metrics.accuracy,
        "precision_negative": row.metrics.precision_negative,
        "recall_negative": row.metrics.recall_negative,
        "test_loss": row.metrics.loss,
    }


def cmd_train(args) -> int:
    manifest = _read_manifest(args.manifest)
    dataset_path = _setting(args.dataset, manifest, "dataset")
    if dataset_path is None:
        raise _UsageError("no dataset given (--dataset or manifest key 'dataset')")
    model_out = _setting(args.model, manifest, "model")
    if model_out is None:
        raise _UsageError("no model output path given (--model or manifest key 'model')")
    report_out = _setting(args.report, manifest, "report")

    mc_over = dict(manifest.get("model_config", {}))
    tc_over = dict(manifest.get("train_config", {}))
    for name in ("embed_dim", "feature_maps", "dropout_rate", "max_len"):
        v = getattr(args, name)
        if v is not None:
            mc_over[name] = v
    if args.filter_widths is not None:
        mc_over["filter_widths"] = [int(w) for w in args.filter_widths.split(",")]
    if args.model_seed is not None:
        mc_over["seed"] = args.model_seed
    for name in ("lr", "batch_size", "max_steps", "eval_every", "seed"):
        v = getattr(args, name)
        if v is not None:
            tc_over[name] = v

    train_examples, test_examples, _ = _load_dataset(dataset_path)
    vocab = preprocess.build_vocabulary(train_examples, min_count=args.min_count)
    mc_over["vocab_size"] = vocab.size
    if "filter_widths" in mc_over:
        mc_over["filter_widths"] = tuple(mc_over["filter_widths"])
    mcfg = classifier.ModelConfig(**mc_over)
    tcfg = classifier.TrainConfig(**tc_over)

    train_set = classifier.encode_examples(train_examples, vocab, mcfg.max_len)
    test_set = classifier.encode_examples(test_examples, vocab, mcfg.max_len)

    model = classifier.init_model(mcfg, vocab)
    model, report = classifier.train(model, train_set, test_set, tcfg)
    classifier.save_model(model, model_out)

    if report_out:
        with open(report_out, "w", encoding="utf-8") as fout:
            for row in report.rows:
                fout.write(json.dumps(_report_row_dict(row)) + "\n")
    print(json.dumps(report.final.as_dict()))
    return 0


def cmd_eval(args) -> int:
    model = classifier.load_model(args.model)
    train_examples, test_examples, _ = _load_dataset(args.dataset)
    examples = {"train": train_examples, "test": test_examples, "all": train_examples + test_examples}[args.split]
    X, y = classifier.encode_examples(examples, model.vocab, model.config.max_len)
    metrics = classifier.evaluate(model, X, y)
    print(json.dumps(metrics.as_dict()))
    return 0


def cmd_filter_file(args) -> int:
    model = classifier.load_model(args.model)
    lex = preprocess.Lexicon.from_file(args.lexicon or default_lexicon_path())
    stop = preprocess.StopwordSet.from_file(args.stopwords or default_stopwords_path())
    pipeline = classifier.TextPipeline.for_model(model, lex, stop)

    with open(args.infile, "rb") as fin:
        danmaku = corpus.parse_bilibili_xml(fin.read())
    mask = classifier.predict_mask(model, [b.content for b in danmaku.bullets], pipeline)
    kept = [b for b, keep in zip(danmaku.bullets, mask) if keep == 1]
    cleaned = corpus.DanmakuFile(video_id=danmaku.video_id, bullets=kept)
    with open(args.outfile, "wb") as fout:
        fout.write(corpus.serialize_bilibili_xml(cleaned))
    print(
        json.dumps(
            {"total": len(danmaku.bullets), "kept": len(kept), "removed": len(danmaku.bullets) - len(kept)}
        )
    )
    return 0


def cmd_serve(args) -> int:
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        raise _UsageError(f"--listen must be host:port, got {args.listen!r}")
    cfg = server.ServerConfig(
        host=host,
        port=int(port),
        model_path=args.model,
        lexicon_path=str(args.lexicon or default_lexicon_path()),
        stopwords_path=str(args.stopwords or default_stopwords_path()),
        max_comments=args.max_comments,
        max_concurrent=args.max_concurrent,
        timeout_s=args.timeout_s,
    )
    server.serve(cfg)
    return 0


def cmd_report_to_csv(args) -> int:
    with open(args.infile, encoding="utf-8") as fin:
        rows = [json.loads(line) for line in fin if line.strip()]
    fields = ["step", "train_loss", "accuracy", "precision_negative", "recall_negative", "test_loss"]
    with open(args.outfile, "w", encoding="utf-8", newline="") as fout:
        writer = csv.DictWriter(fout, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k) for k in fields})
    print(json.dumps({"rows": len(rows)}))
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="smartbullets", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-corpus", help="write a deterministic synthetic corpus + label file")
    g.add_argument("--out", required=True, help="corpus JSON output path")
    g.add_argument("--labels", required=True, help="label TSV output path")
    g.add_argument("--size", type=int, required=True, help="number of bullet records (>= 10)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--noise", type=float, default=synth.DEFAULT_NOISE, help="label flip rate")
    g.set_defaults(func=cmd_gen_corpus)

    pp = sub.add_parser("preprocess", help="corpus -> tokenized/labeled/split dataset file")
    pp.add_argument("--manifest", help="JSON manifest with paths and overrides")
    pp.add_argument("--corpus", action="append", help="corpus JSON file (repeatable)")
    pp.add_argument("--labels", help="label TSV file")
    pp.add_argument("--out", help="dataset output path")
    pp.add_argument("--lexicon", help="lexicon file (default: bundled)")
    pp.add_argument("--stopwords", help="stopwords file (default: bundled)")
    pp.add_argument("--test-fraction", dest="test_fraction", type=float)
    pp.add_argument("--seed", type=int)
    pp.set_defaults(func=cmd_preprocess)

    t = sub.add_parser("train", help="train a model on a dataset file")
    t.add_argument("--manifest", help="JSON manifest with paths and overrides")
    t.add_argument("--dataset", help="dataset file from preprocess")
    t.add_argument("--model", help="model JSON output path")
    t.add_argument("--report", help="JSONL training report output path")
    t.add_argument("--min-count", dest="min_count", type=int, default=1)
    t.add_argument("--embed-dim", dest="embed_dim", type=int)
    t.add_argument("--filter-widths", dest="filter_widths", help="comma list, e.g. 3,4,5")
    t.add_argument("--feature-maps", dest="feature_maps", type=int)
    t.add_argument("--dropout-rate", dest="dropout_rate", type=float)
    t.add_argument("--max-len", dest="max_len", type=int)
    t.add_argument("--model-seed", dest="model_seed", type=int)
    t.add_argument("--lr", type=float)
    t.add_argument("--batch-size", dest="batch_size", type=int)
    t.add_argument("--max-steps", dest="max_steps", type=int)
    t.add_argument("--eval-every", dest="eval_every", type=int)
    t.add_argument("--seed", type=int)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="print metrics of a model on a dataset split")
    e.add_argument("--model", required=True)
    e.add_argument("--dataset", required=True)
    e.add_argument("--split", choices=["train", "test", "all"], default="test")
    e.set_defaults(func=cmd_eval)

    f = sub.add_parser("filter-file", help="remove low-quality bullets from a danmaku XML file")
    f.add_argument("--model", required=True)
    f.add_argument("--in", dest="infile", required=True)
    f.add_argument("--out", dest="outfile", required=True)
    f.add_argument("--lexicon", help="lexicon file (default: bundled)")
    f.add_argument("--stopwords", help="stopwords file (default: bundled)")
    f.set_defaults(func=cmd_filter_file)

    s = sub.add_parser("serve", help="run the HTTP filter service")
    s.add_argument("--listen", default=None, help="host:port (env SB_LISTEN, default 127.0.0.1:8731)")
    s.add_argument("--model", default=None, help="model file (env SB_MODEL)")
    s.add_argument("--lexicon", default=None, help="lexicon file (env SB_LEXICON, default bundled)")
    s.add_argument("--stopwords", default=None, help="stopwords file (env SB_STOPWORDS, default bundled)")
    s.add_argument("--max-comments", dest="max_comments", type=int, default=10000)
    s.add_argument("--max-concurrent", dest="max_concurrent", type=int, default=200)
    s.add_argument("--timeout-s", dest="timeout_s", type=float, default=30.0)
    s.set_defaults(func=cmd_serve)

    r = sub.add_parser("report-to-csv", help="convert a JSONL training report to CSV")
    r.add_argument("--in", dest="infile", required=True)
    r.add_argument("--out", dest="outfile", required=True)
    r.set_defaults(func=cmd_report_to_csv)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            args.listen = args.listen or os.environ.get("SB_LISTEN", "127.0.0.1:8731")
            args.model = args.model or os.environ.get("SB_MODEL")
            args.lexicon = args.lexicon or os.environ.get("SB_LEXICON")
            args.stopwords = args.stopwords or os.environ.get("SB_STOPWORDS")
            if args.model is None:
                raise _UsageError("serve needs --model or SB_MODEL")
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ModelLoadError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3 if isinstance(e.__cause__, OSError) else 2
    except BindError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (MalformedInput, InvalidFraction, SmartBulletsError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
