import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from smartbullets import classifier, preprocess, synth
from smartbullets.data_files import default_lexicon_path, default_stopwords_path


@pytest.fixture(scope="session")
def bundled_lexicon() -> preprocess.Lexicon:
    return preprocess.Lexicon.from_file(default_lexicon_path())


@pytest.fixture(scope="session")
def bundled_stopwords() -> preprocess.StopwordSet:
    return preprocess.StopwordSet.from_file(default_stopwords_path())


@pytest.fixture(scope="session")
def small_corpus_dir(tmp_path_factory) -> Path:
    """A small generated corpus on disk: corpus.json + labels.tsv."""
    d = tmp_path_factory.mktemp("corpus")
    records, labels = synth.generate(size=400, seed=11)
    synth.write_corpus(records, labels, d / "corpus.json", d / "labels.tsv")
    return d


@pytest.fixture(scope="session")
def small_trained(small_corpus_dir, bundled_lexicon, bundled_stopwords, tmp_path_factory):
    """A quickly trained small model plus its pipeline and dataset, shared
    by server/CLI tests that need a working model but not a strong one."""
    d = tmp_path_factory.mktemp("model")
    with open(small_corpus_dir / "corpus.json", "rb") as fin:
        from smartbullets import corpus as corpus_mod

        bullets = corpus_mod.parse_tencent_json(fin.read())
    records = [
        corpus_mod.ScoredRecord(content=b.content, score=corpus_mod.score(b))
        for b in bullets
    ]
    aggregated = preprocess.aggregate(records)
    labels = preprocess.load_labels(small_corpus_dir / "labels.tsv")
    examples, _ = preprocess.apply_labels(aggregated, labels, bundled_lexicon, bundled_stopwords)
    train_ex, test_ex = preprocess.split_train_test(examples, 0.2, seed=5)
    vocab = preprocess.build_vocabulary(train_ex)

    cfg = classifier.ModelConfig(
        vocab_size=vocab.size, embed_dim=24, filter_widths=(2, 3), feature_maps=12,
        max_len=16, seed=3,
    )
    tcfg = classifier.TrainConfig(batch_size=32, max_steps=150, eval_every=50, seed=3)
    model = classifier.init_model(cfg, vocab)
    model, report = classifier.train(
        model,
        classifier.encode_examples(train_ex, vocab, cfg.max_len),
        classifier.encode_examples(test_ex, vocab, cfg.max_len),
        tcfg,
    )
    model_path = d / "model.json"
    classifier.save_model(model, model_path)
    pipeline = classifier.TextPipeline.for_model(model, bundled_lexicon, bundled_stopwords)
    return {
        "model": model,
        "model_path": model_path,
        "pipeline": pipeline,
        "report": report,
        "train_examples": train_ex,
        "test_examples": test_ex,
        "vocab": vocab,
    }
