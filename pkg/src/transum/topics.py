"""Term dissimilarities and SEMCOT topic clustering (iterated DBSCAN with a shrinking radius)."""

from __future__ import annotations

import json
import logging
import math
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError, UnknownTermError
from .textprep import Vocabulary

log = logging.getLogger(__name__)

# marks term pairs that never co-occur; lies outside every radius
INCOMPARABLE = math.inf
NOISE = -1


def _term_index(term: str | int, vocab: Vocabulary) -> int:
    if isinstance(term, (int, np.integer)):
        if not 0 <= term < len(vocab):
            raise UnknownTermError(term)
        return int(term)
    try:
        return vocab.index[term]
    except KeyError:
        raise UnknownTermError(term) from None


def joint_isf(u: str | int, v: str | int, vocab: Vocabulary) -> float:
    """log(N_s / N_s^{uv}), or INCOMPARABLE when the terms never share a sentence."""
    count = vocab.pair_count(_term_index(u, vocab), _term_index(v, vocab))
    if count == 0:
        return INCOMPARABLE
    return math.log(vocab.n_sentences / count)


def _dsem(joint: float, isf_u: float, isf_v: float) -> float:
    if joint == INCOMPARABLE:
        return INCOMPARABLE
    hi = max(isf_u, isf_v)
    if hi == 0:
        # both terms occur in every sentence
        return 0.0
    d = (joint - min(isf_u, isf_v)) / hi
    return min(1.0, max(0.0, d))


def semantic_dissimilarity(u: str | int, v: str | int, vocab: Vocabulary) -> float:
    i, j = _term_index(u, vocab), _term_index(v, vocab)
    if i == j:
        return 0.0
    return _dsem(joint_isf(i, j, vocab), vocab.isf[i], vocab.isf[j])


def dissimilarity_matrix(vocab: Vocabulary) -> np.ndarray:
    """Dense symmetric matrix of clamped dissimilarities, INCOMPARABLE off the co-occurrence graph."""
    n = len(vocab)
    d = np.full((n, n), INCOMPARABLE)
    np.fill_diagonal(d, 0.0)
    if vocab.pair_counts:
        pairs = np.array(list(vocab.pair_counts.keys()), dtype=np.int64)
        counts = np.array(list(vocab.pair_counts.values()), dtype=float)
        isf = np.asarray(vocab.isf)
        joint = np.log(vocab.n_sentences / counts)
        iu, iv = isf[pairs[:, 0]], isf[pairs[:, 1]]
        hi = np.maximum(iu, iv)
        lo = np.minimum(iu, iv)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(hi > 0, (joint - lo) / np.where(hi > 0, hi, 1.0), 0.0)
        vals = np.clip(vals, 0.0, 1.0)
        d[pairs[:, 0], pairs[:, 1]] = vals
        d[pairs[:, 1], pairs[:, 0]] = vals
    return d


def dbscan(d: np.ndarray, epsilon: float, min_pts: int) -> tuple[list[int], int]:
    """DBSCAN over a precomputed dissimilarity matrix.

    Labels are NOISE or 1..K. Points are scanned in ascending index and a
    border point keeps the first cluster that reaches it. A neighborhood
    includes the point itself and uses ``d <= epsilon``.
    """
    if epsilon <= 0 or min_pts < 1:
        raise InputError("dbscan needs epsilon > 0 and min_pts >= 1")
    d = np.asarray(d)
    n = d.shape[0]
    close = d <= epsilon
    neighbors = [np.flatnonzero(close[i]) for i in range(n)]
    core = [len(nb) >= min_pts for nb in neighbors]
    labels = [NOISE] * n
    visited = [False] * n
    k = 0
    for i in range(n):
        if visited[i] or not core[i]:
            continue
        k += 1
        visited[i] = True
        labels[i] = k
        queue = deque([i])
        while queue:
            p = queue.popleft()
            for q in neighbors[p]:
                if labels[q] == NOISE:
                    labels[q] = k
                if not visited[q] and core[q]:
                    visited[q] = True
                    queue.append(q)
    return labels, k


@dataclass(frozen=True)
class SemcotParams:
    epsilon0: float = 0.9
    max_cluster_frac: float = 0.1
    min_terms: int = 3
    beta: float = 0.95
    mu: float = 1.98
    max_iterations: int = 200
    max_cluster: int | None = None  # absolute M; overrides max_cluster_frac

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise InputError(f"beta must lie in (0, 1), got {self.beta}")
        if self.epsilon0 <= 0:
            raise InputError("epsilon0 must be positive")
        if self.min_terms < 1:
            raise InputError("min_terms must be >= 1")
        if self.mu < 0:
            raise InputError("mu must be nonnegative")
        if self.max_cluster is not None and self.max_cluster < self.min_terms:
            raise InputError("max_cluster must be >= min_terms")

    def max_cluster_size(self, n_terms: int) -> int:
        if self.max_cluster is not None:
            return self.max_cluster
        return max(math.ceil(self.max_cluster_frac * n_terms), self.min_terms)


@dataclass(frozen=True)
class TopicAssignment:
    K: int
    labels: tuple[int, ...]
    epsilons: tuple[float, ...] = ()
    rescued: tuple[int, ...] = ()
    max_cluster: int = 0

    def members(self, topic: int) -> list[int]:
        return [t for t, lab in enumerate(self.labels) if lab == topic]

    def topics(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {k: [] for k in range(1, self.K + 1)}
        for t, lab in enumerate(self.labels):
            if lab != NOISE:
                out[lab].append(t)
        return out

    def to_json(self, vocab: Vocabulary) -> str:
        return json.dumps(
            {str(k): [vocab.terms[t] for t in ts] for k, ts in self.topics().items()},
            indent=2,
        )


def _renumber(labels: list[int]) -> tuple[list[int], int]:
    ids: dict[int, int] = {}
    for lab in labels:
        if lab != NOISE and lab not in ids:
            ids[lab] = len(ids) + 1
    return [ids.get(lab, NOISE) for lab in labels], len(ids)


def semcot(d: np.ndarray, isf, params: SemcotParams = SemcotParams()) -> TopicAssignment:
    """Cluster terms into topics.

    Shrink epsilon by ``beta`` until every DBSCAN cluster is smaller than M,
    then promote each noise term with isf >= mu to a singleton topic.
    Groups of M or more terms at dissimilarity 0 (terms that always occur
    together) cannot be split by shrinking; they are turned into noise.
    ``isf`` may be a Vocabulary or a per-term sequence.
    """
    if isinstance(isf, Vocabulary):
        isf = isf.isf
    d = np.asarray(d)
    n = d.shape[0]
    if len(isf) != n:
        raise InputError("isf length does not match dissimilarity matrix")
    big_m = params.max_cluster_size(n)
    positive = d[(d > 0) & np.isfinite(d)]
    min_positive = float(positive.min()) if positive.size else math.inf

    eps = params.epsilon0
    epsilons = []
    for _ in range(params.max_iterations):
        epsilons.append(eps)
        labels, k = dbscan(d, eps, params.min_terms)
        largest = max(Counter(lab for lab in labels if lab != NOISE).values(), default=0)
        if largest < big_m:
            break
        if eps < min_positive:
            # only zero-distance groups remain and shrinking cannot split them
            sizes = Counter(labels)
            labels = [NOISE if lab != NOISE and sizes[lab] >= big_m else lab for lab in labels]
            labels, k = _renumber(labels)
            log.warning(
                "SEMCOT: %d terms in zero-dissimilarity groups of size >= M=%d treated as noise",
                sum(lab == NOISE for lab in labels) - sizes[NOISE],
                big_m,
            )
            break
        eps *= params.beta
    else:
        raise ConvergenceError(
            f"SEMCOT did not converge in {params.max_iterations} iterations "
            f"(epsilon={eps:.3g}, largest cluster {largest}, M={big_m})"
        )
    log.debug("SEMCOT: %d DBSCAN passes, final epsilon %.4f, K=%d", len(epsilons), eps, k)

    rescued = []
    for t in range(n):
        if labels[t] == NOISE and isf[t] >= params.mu:
            k += 1
            labels[t] = k
            rescued.append(t)
    return TopicAssignment(
        K=k,
        labels=tuple(int(x) for x in labels),
        epsilons=tuple(epsilons),
        rescued=tuple(rescued),
        max_cluster=big_m,
    )
