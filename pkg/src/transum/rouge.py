"""Recall-oriented ROUGE-2 and ROUGE-SU4 with stemming, jackknifing and bootstrap intervals.

Stopwords are kept. SU4 pools unigrams and skip-bigrams (gap <= 4) into one
ratio and adds no begin-of-sentence marker, so values track but do not
exactly reproduce the Perl ROUGE-1.5.5 toolkit.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .textprep import stem

R2 = "R2"
SU4 = "SU4"
METRICS = (R2, SU4)

_WORD = re.compile(r"[^\W_]+")

EvalText = tuple[str, ...]


def eval_text(raw: str) -> EvalText:
    return tuple(stem(w) for w in _WORD.findall(raw.lower()))


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def skip_bigrams(tokens: Sequence[str], max_gap: int = 4) -> Counter:
    """Ordered pairs (t_i, t_j), i < j, with at most ``max_gap`` words between them."""
    if max_gap < 0:
        raise ValueError("max_gap must be >= 0")
    out: Counter = Counter()
    n = len(tokens)
    for i in range(n - 1):
        for j in range(i + 1, min(n, i + max_gap + 2)):
            out[(tokens[i], tokens[j])] += 1
    return out


def _units(tokens: Sequence[str], metric: str) -> Counter:
    if metric == R2:
        return ngrams(tokens, 2)
    if metric == SU4:
        return ngrams(tokens, 1) + skip_bigrams(tokens, 4)
    raise ValueError(f"unknown metric {metric!r}")


def _recall(cand: Counter, refs: list[Counter]) -> float:
    hits = sum(sum((cand & ref).values()) for ref in refs)
    total = sum(sum(ref.values()) for ref in refs)
    return hits / total if total else 0.0


def rouge_score(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    metric: str = R2,
    jackknife: bool = False,
) -> float:
    """Multi-reference recall: clipped overlaps summed over references / reference unit count.

    With ``jackknife`` the score is the mean over leave-one-reference-out subsets.
    """
    if not references:
        raise InputError("at least one reference summary is required")
    if jackknife and len(references) < 2:
        raise InputError("jackknifing needs at least two references")
    if not candidate:
        return 0.0
    cand = _units(candidate, metric)
    refs = [_units(r, metric) for r in references]
    if not jackknife:
        return _recall(cand, refs)
    return float(np.mean([_recall(cand, refs[:k] + refs[k + 1 :]) for k in range(len(refs))]))


@dataclass(frozen=True)
class RougeResult:
    rouge2: float
    rouge_su4: float
    ci95: dict | None = None

    def as_dict(self) -> dict:
        out = {"rouge2": self.rouge2, "rougeSU4": self.rouge_su4}
        if self.ci95 is not None:
            out["ci95"] = {k: list(v) for k, v in self.ci95.items()}
        return out


def score_summary(
    candidate: Sequence[str], references: Sequence[Sequence[str]], jackknife: bool = True
) -> RougeResult:
    jackknife = jackknife and len(references) >= 2
    return RougeResult(
        rouge_score(candidate, references, R2, jackknife),
        rouge_score(candidate, references, SU4, jackknife),
    )


def bootstrap_ci(
    scores: Sequence[float], iterations: int = 1000, seed: int = 0
) -> tuple[float, float]:
    """Percentile bootstrap 95% interval of the mean."""
    values = np.asarray(scores, dtype=float)
    if values.size < 2:
        raise InputError("bootstrap needs at least two scores")
    rng = np.random.default_rng(seed)
    means = values[rng.integers(0, values.size, size=(iterations, values.size))].mean(axis=1)
    low, high = np.percentile(means, [2.5, 97.5])
    mean = values.mean()
    return float(min(low, mean)), float(max(high, mean))
