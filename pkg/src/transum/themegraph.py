"""Topic tagging of sentences and the theme hypergraph."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateCorpusError, InputError
from .textprep import Sentence, Vocabulary, cosine_similarity, tfisf_vector
from .topics import NOISE, TopicAssignment

# floor for hyperedges whose blended similarity is zero
EPS_W = 1e-9


@dataclass(frozen=True)
class Theme:
    topic_id: int
    sentence_ids: frozenset[int]


def topic_scores(
    sentences: Sequence[Sentence], vocab: Vocabulary, assignment: TopicAssignment
) -> np.ndarray:
    """Matrix of unnormalized topic scores, rows = sentences, column l-1 = topic l."""
    scores = np.zeros((len(sentences), assignment.K))
    for row, s in enumerate(sentences):
        for t, w in tfisf_vector(s.tokens, vocab).items():
            label = assignment.labels[t]
            if label != NOISE:
                scores[row, label - 1] += w
    return scores


def topic_score(
    sentence: Sentence, topic: int, vocab: Vocabulary, assignment: TopicAssignment
) -> float:
    vec = tfisf_vector(sentence.tokens, vocab)
    return math.fsum(w for t, w in vec.items() if assignment.labels[t] == topic)


def tag_sentences(
    scores: np.ndarray, delta: float, sentence_ids: Sequence[int] | None = None
) -> list[Theme]:
    """Themes T_l = {i : score(i, l) >= delta}.

    A sentence reaching no threshold is put in its best-scoring topic
    (lowest topic id on ties) so every sentence has at least one theme.
    Empty themes are dropped.
    """
    if delta <= 0:
        raise InputError("delta must be positive")
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    n, k = scores.shape
    if k == 0:
        raise DegenerateCorpusError("no topics found (K=0); cannot build themes")
    if sentence_ids is None:
        sentence_ids = range(1, n + 1)
    members: list[set[int]] = [set() for _ in range(k)]
    for row, sid in enumerate(sentence_ids):
        hits = np.flatnonzero(scores[row] >= delta)
        if hits.size == 0:
            hits = [int(np.argmax(scores[row]))]
        for col in hits:
            members[col].add(sid)
    return [Theme(l + 1, frozenset(m)) for l, m in enumerate(members) if m]


@dataclass(frozen=True)
class Hypergraph:
    """Node- and hyperedge-weighted hypergraph with 0-based node positions.

    ``labels`` maps positions to external ids (sentence ids) and
    ``edge_labels`` carries topic ids.
    """

    node_weights: tuple[float, ...]
    edges: tuple[frozenset[int], ...]
    edge_weights: tuple[float, ...]
    labels: tuple = ()
    edge_labels: tuple = ()
    incidence: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.node_weights)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, n + 1)))
        if not self.edge_labels:
            object.__setattr__(self, "edge_labels", tuple(range(1, len(self.edges) + 1)))
        if len(self.labels) != n or len(self.edge_labels) != len(self.edges):
            raise InputError("label count mismatch")
        if len(self.edge_weights) != len(self.edges):
            raise InputError("one weight per hyperedge required")
        if any(not phi > 0 for phi in self.node_weights):
            raise InputError("node weights must be positive")
        if any(not w > 0 for w in self.edge_weights):
            raise InputError("hyperedge weights must be positive")
        inc: list[list[int]] = [[] for _ in range(n)]
        for e, members in enumerate(self.edges):
            if not members:
                raise InputError(f"hyperedge {e} is empty")
            for i in members:
                if not 0 <= i < n:
                    raise InputError(f"hyperedge {e} references unknown node {i}")
                inc[i].append(e)
        object.__setattr__(self, "incidence", tuple(tuple(x) for x in inc))

    @property
    def n_nodes(self) -> int:
        return len(self.node_weights)

    @property
    def total_weight(self) -> float:
        return math.fsum(self.edge_weights)

    @classmethod
    def from_sets(cls, node_weights, edges: Iterable[Iterable[int]], edge_weights, **kw) -> Hypergraph:
        return cls(
            tuple(float(x) for x in node_weights),
            tuple(frozenset(e) for e in edges),
            tuple(float(w) for w in edge_weights),
            **kw,
        )

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": lab, "phi": phi} for lab, phi in zip(self.labels, self.node_weights)],
            "edges": [
                {"topic_id": t, "sentences": sorted(self.labels[i] for i in e), "w": w}
                for t, e, w in zip(self.edge_labels, self.edges, self.edge_weights)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> Hypergraph:
        try:
            labels = [node["id"] for node in data["nodes"]]
            phi = [node["phi"] for node in data["nodes"]]
            pos = {lab: i for i, lab in enumerate(labels)}
            if len(pos) != len(labels):
                raise InputError("duplicate node ids")
            edges = [frozenset(pos[s] for s in e["sentences"]) for e in data["edges"]]
            weights = [e["w"] for e in data["edges"]]
            topic_ids = [e.get("topic_id", k + 1) for k, e in enumerate(data["edges"])]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed hypergraph JSON: {exc!r}") from exc
        return cls.from_sets(phi, edges, weights, labels=tuple(labels), edge_labels=tuple(topic_ids))

    @classmethod
    def from_json(cls, text: str) -> Hypergraph:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def theme_weights(
    sentences: Sequence[Sentence],
    themes: Sequence[Theme],
    vocab: Vocabulary,
    query_tokens: Sequence[str],
    lam: float,
) -> list[tuple[float, float, float]]:
    """(sim to corpus, sim to query, blended weight) per theme."""
    by_id = {s.sent_id: s for s in sentences}
    corpus_vec = tfisf_vector((t for s in sentences for t in s.tokens), vocab)
    query_vec = tfisf_vector(query_tokens, vocab)
    if not query_vec:
        warnings.warn("query has no in-vocabulary terms; query relevance is zero for every theme")
    out = []
    for theme in themes:
        vec = tfisf_vector((t for i in sorted(theme.sentence_ids) for t in by_id[i].tokens), vocab)
        sim_d = cosine_similarity(vec, corpus_vec)
        sim_q = cosine_similarity(vec, query_vec)
        w = (1 - lam) * sim_d + lam * sim_q
        out.append((sim_d, sim_q, w if w > 0 else EPS_W))
    return out


def build_hypergraph(
    sentences: Sequence[Sentence],
    themes: Sequence[Theme],
    vocab: Vocabulary,
    query_tokens: Sequence[str],
    lam: float = 0.4,
) -> Hypergraph:
    if not themes:
        raise DegenerateCorpusError("no themes to build hyperedges from")
    if not 0 <= lam <= 1:
        raise InputError("lambda must lie in [0, 1]")
    position = {s.sent_id: i for i, s in enumerate(sentences)}
    weights = [w for _, _, w in theme_weights(sentences, themes, vocab, query_tokens, lam)]
    graph = Hypergraph.from_sets(
        [s.length_words for s in sentences],
        [[position[i] for i in theme.sentence_ids] for theme in themes],
        weights,
        labels=tuple(s.sent_id for s in sentences),
        edge_labels=tuple(theme.topic_id for theme in themes),
    )
    uncovered = [graph.labels[i] for i, inc in enumerate(graph.incidence) if not inc]
    if uncovered:
        raise DegenerateCorpusError(f"sentences outside every theme: {uncovered[:10]}")
    return graph
