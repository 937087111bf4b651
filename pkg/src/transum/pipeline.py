"""End-to-end runs: corpus loading, summarization, evaluation and parameter sweeps."""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from . import rouge
from .errors import InputError, InvariantError, TransumError
from .textprep import Document, build_vocabulary, load_stoplist, make_sentences, preprocess
from .themegraph import build_hypergraph, tag_sentences, theme_weights, topic_scores
from .topics import SemcotParams, dissimilarity_matrix, semcot
from .transversal import TOL, Summary, tc_transum, tl_transum

log = logging.getLogger(__name__)

STAGES = ("ingest", "preprocess", "topics", "tagging", "hypergraph", "selection")
QUERY_FILE = "query.txt"


@dataclass(frozen=True)
class Config:
    mode: str = "length"
    target_length: float = 250
    gamma: float = 0.7
    lam: float = 0.4
    delta: float = 0.85
    mu: float = 1.98
    epsilon0: float = 0.9
    beta: float = 0.95
    min_terms: int = 3
    max_cluster_frac: float = 0.1
    max_iterations: int = 200
    stoplist: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("length", "coverage"):
            raise InputError(f"mode must be 'length' or 'coverage', got {self.mode!r}")
        if not 0 <= self.gamma <= 1:
            raise InputError("gamma must lie in [0, 1]")
        if not 0 <= self.lam <= 1:
            raise InputError("lambda must lie in [0, 1]")
        if self.delta <= 0:
            raise InputError("delta must be positive")
        if self.target_length <= 0:
            raise InputError("target length must be positive")

    def semcot_params(self) -> SemcotParams:
        return SemcotParams(
            epsilon0=self.epsilon0,
            max_cluster_frac=self.max_cluster_frac,
            min_terms=self.min_terms,
            beta=self.beta,
            mu=self.mu,
            max_iterations=self.max_iterations,
        )

    @classmethod
    def field_types(cls) -> dict[str, type]:
        casts = {"str | None": str, "float": float, "int": int, "str": str}
        return {f.name: casts[f.type] for f in fields(cls)}


def read_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment. Keys are Config field names."""
    types = Config.field_types()
    aliases = {"lambda": "lam", "min-terms": "min_terms"}
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = aliases.get(key, key).replace("-", "_")
        if key not in types:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = types[key](value)
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def load_corpus(path: str | Path) -> tuple[list[Document], str | None]:
    """Load documents and an optional query.

    ``path`` is a JSON manifest (a list of ``{doc_id, text}`` or an object
    with ``documents`` and ``query``) or a directory of ``.txt`` files. In a
    directory, ``query.txt`` holds the query and a ``docs/`` subdirectory,
    if present, holds the documents.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"corpus not found: {path}")
    query = None
    if path.is_file():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot parse manifest {path}: {exc}") from exc
        if isinstance(data, dict):
            query = data.get("query")
            data = data.get("documents", [])
        try:
            docs = [Document(str(d["doc_id"]), d["text"]) for d in data]
        except (KeyError, TypeError) as exc:
            raise InputError(f"manifest entries need doc_id and text: {exc!r}") from exc
    else:
        qfile = path / QUERY_FILE
        if qfile.is_file():
            query = qfile.read_text(encoding="utf-8").strip()
        doc_dir = path / "docs" if (path / "docs").is_dir() else path
        files = sorted(p for p in doc_dir.glob("*.txt") if p.name != QUERY_FILE)
        docs = [Document(p.stem, p.read_text(encoding="utf-8")) for p in files]
    if not docs:
        raise InputError(f"empty corpus: {path}")
    ids = [d.doc_id for d in docs]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate doc_id in corpus")
    return docs, query


@dataclass
class RunReport:
    summary_text: str
    selected: list[dict]
    covered_weight: float
    total_weight: float
    coverage_fraction: float
    total_length: float
    themes: list[dict]
    stats: dict
    trace: list[dict]
    timings: dict
    config: dict

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, timings: bool = True) -> str:
        data = self.to_dict()
        if not timings:
            data.pop("timings")
        return json.dumps(data, indent=2, sort_keys=True)


class _Timer:
    def __init__(self):
        self.times = {}
        self.current = None

    @contextmanager
    def __call__(self, stage):
        self.current = stage
        t0 = time.perf_counter()
        yield
        self.times[stage] = time.perf_counter() - t0


@dataclass
class Prepared:
    """Intermediate pipeline products up to and including the hypergraph."""

    documents: list
    query: str
    sentences: list
    vocab: object
    query_tokens: list
    assignment: object
    themes: list
    graph: object


def prepare(
    documents: Sequence[Document] | str | Path,
    query: str | None = None,
    config: Config = Config(),
    timer: _Timer | None = None,
) -> Prepared:
    """Run every stage before sentence selection.

    ``documents`` may be a loaded list or a corpus path; a query stored
    with the corpus is used when ``query`` is None.
    """
    timer = timer or _Timer()
    with timer("ingest"):
        if isinstance(documents, (str, Path)):
            documents, stored_query = load_corpus(documents)
            query = query if query is not None else stored_query
        documents = list(documents)
        if not documents:
            raise InputError("empty corpus")
        stoplist = load_stoplist(config.stoplist)
    query = query or ""
    try:
        with timer("preprocess"):
            sentences = make_sentences(documents, stoplist)
            vocab = build_vocabulary(sentences)
            query_tokens = preprocess(query, stoplist) if query.strip() else []
        with timer("topics"):
            assignment = semcot(dissimilarity_matrix(vocab), vocab, config.semcot_params())
        with timer("tagging"):
            scores = topic_scores(sentences, vocab, assignment)
            themes = tag_sentences(scores, config.delta, [s.sent_id for s in sentences])
        with timer("hypergraph"):
            graph = build_hypergraph(sentences, themes, vocab, query_tokens, config.lam)
    except TransumError as exc:
        raise type(exc)(f"[{timer.current}] {exc}") from exc
    return Prepared(documents, query, sentences, vocab, query_tokens, assignment, themes, graph)


def summarize(
    documents: Sequence[Document] | str | Path,
    query: str | None = None,
    config: Config = Config(),
) -> RunReport:
    """Run the full pipeline on a corpus and return a report."""
    timer = _Timer()
    t_start = time.perf_counter()
    p = prepare(documents, query, config, timer)
    graph, vocab = p.graph, p.vocab
    with timer("selection"):
        if config.mode == "length":
            summary = tl_transum(graph, config.target_length)
        else:
            summary = tc_transum(graph, config.gamma)
    timings = dict(timer.times)
    timings["total"] = time.perf_counter() - t_start

    _check(summary, graph, config)
    by_id = {s.sent_id: s for s in p.sentences}
    chosen = [by_id[i] for i in summary.sentence_ids]
    sims = theme_weights(p.sentences, p.themes, vocab, p.query_tokens, config.lam)
    topics = p.assignment.topics()
    return RunReport(
        summary_text=" ".join(s.raw_text for s in chosen),
        selected=[
            {
                "sent_id": s.sent_id,
                "doc_id": s.doc_id,
                "position": s.position,
                "length": s.length_words,
                "text": s.raw_text,
            }
            for s in chosen
        ],
        covered_weight=summary.covered_weight,
        total_weight=graph.total_weight,
        coverage_fraction=summary.coverage_fraction,
        total_length=summary.total_length,
        themes=[
            {
                "topic_id": th.topic_id,
                "terms": [vocab.terms[t] for t in topics[th.topic_id]],
                "size": len(th.sentence_ids),
                "w": w,
                "sim_corpus": sd,
                "sim_query": sq,
            }
            for th, (sd, sq, w) in zip(p.themes, sims)
        ],
        stats={
            "n_documents": len(p.documents),
            "n_sentences": len(p.sentences),
            "n_terms": len(vocab),
            "n_topics": p.assignment.K,
            "n_rescued": len(p.assignment.rescued),
            "n_themes": len(p.themes),
            "semcot_passes": len(p.assignment.epsilons),
            "final_epsilon": p.assignment.epsilons[-1],
            "max_cluster": p.assignment.max_cluster,
        },
        trace=[
            {"sent_id": st.sentence_id, "ratio": st.ratio, "gain": st.gain}
            for st in summary.trace
        ],
        timings=timings,
        config=asdict(config),
    )


def _check(summary: Summary, graph, config: Config) -> None:
    if config.mode == "length" and summary.total_length > config.target_length + TOL:
        raise InvariantError(
            f"summary length {summary.total_length} exceeds target {config.target_length}"
        )
    if config.mode == "coverage" and summary.covered_weight < config.gamma * graph.total_weight - TOL:
        raise InvariantError(
            f"coverage {summary.covered_weight} misses target {config.gamma * graph.total_weight}"
        )


def read_references(ref_dir: str | Path) -> list[rouge.EvalText]:
    files = sorted(Path(ref_dir).glob("*.txt"))
    if not files:
        raise InputError(f"no reference summaries in {ref_dir}")
    return [rouge.eval_text(p.read_text(encoding="utf-8")) for p in files]


def _score_set(
    candidates: dict[str, str], references: dict[str, list], jackknife: bool = True
) -> dict[str, rouge.RougeResult]:
    return {
        cid: rouge.score_summary(rouge.eval_text(text), references[cid], jackknife)
        for cid, text in sorted(candidates.items())
    }


def _aggregate(per_corpus: dict[str, rouge.RougeResult], bootstrap: bool, iterations: int, seed: int) -> dict:
    r2 = [r.rouge2 for r in per_corpus.values()]
    su4 = [r.rouge_su4 for r in per_corpus.values()]
    mean = {"rouge2": sum(r2) / len(r2), "rougeSU4": sum(su4) / len(su4)}
    if bootstrap and len(r2) >= 2:
        mean["ci95"] = {
            "rouge2": list(rouge.bootstrap_ci(r2, iterations, seed)),
            "rougeSU4": list(rouge.bootstrap_ci(su4, iterations, seed)),
        }
    return mean


def evaluate(
    candidate_dir: str | Path,
    reference_dir: str | Path,
    bootstrap: bool = False,
    iterations: int = 1000,
    seed: int = 0,
    jackknife: bool = True,
) -> dict:
    """Score ``<cid>.txt`` candidates against reference directories ``<cid>/*.txt``."""
    candidate_dir, reference_dir = Path(candidate_dir), Path(reference_dir)
    cands = {p.stem: p.read_text(encoding="utf-8") for p in sorted(candidate_dir.glob("*.txt"))}
    ref_ids = {p.name for p in reference_dir.iterdir() if p.is_dir()} if reference_dir.is_dir() else set()
    missing_refs = sorted(set(cands) - ref_ids)
    missing_cands = sorted(ref_ids - set(cands))
    if missing_refs or missing_cands or not cands:
        raise InputError(
            f"corpus id mismatch: no references for {missing_refs}, no candidate for {missing_cands}"
        )
    refs = {cid: read_references(reference_dir / cid) for cid in cands}
    per = _score_set(cands, refs, jackknife)
    return {
        "per_corpus": {cid: r.as_dict() for cid, r in per.items()},
        "mean": _aggregate(per, bootstrap, iterations, seed),
    }


SWEEP_PARAMS = {"delta": "delta", "lambda": "lam", "gamma": "gamma"}


def sweep(
    corpus_set: str | Path,
    reference_dir: str | Path,
    parameter: str,
    grid: Iterable[float],
    config: Config = Config(),
) -> list[dict]:
    """One row per grid value: mean ROUGE-2, ROUGE-SU4 and summary length over the corpus set.

    ``corpus_set`` holds one corpus directory per id; ``reference_dir``
    holds a matching directory of reference summaries per id.
    """
    if parameter not in SWEEP_PARAMS:
        raise InputError(f"sweep parameter must be one of {sorted(SWEEP_PARAMS)}")
    corpus_set, reference_dir = Path(corpus_set), Path(reference_dir)
    corpora = sorted(p for p in corpus_set.iterdir() if p.is_dir())
    if not corpora:
        raise InputError(f"no corpora in {corpus_set}")
    missing = [p.name for p in corpora if not (reference_dir / p.name).is_dir()]
    if missing:
        raise InputError(f"missing references for corpora: {missing}")
    refs = {p.name: read_references(reference_dir / p.name) for p in corpora}
    loaded = {p.name: load_corpus(p) for p in corpora}
    if parameter == "gamma":
        config = replace(config, mode="coverage")

    rows = []
    for value in grid:
        cfg = replace(config, **{SWEEP_PARAMS[parameter]: float(value)})
        texts, lengths = {}, []
        for cid, (docs, query) in loaded.items():
            report = summarize(docs, query, cfg)
            texts[cid] = report.summary_text
            lengths.append(report.total_length)
        agg = _aggregate(_score_set(texts, refs), False, 0, cfg.seed)
        rows.append(
            {
                parameter: float(value),
                "rouge2": agg["rouge2"],
                "rougeSU4": agg["rougeSU4"],
                "mean_length": sum(lengths) / len(lengths),
            }
        )
    return rows
