"""Sentence splitting, token preprocessing, isf statistics and tfisf vectors."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from nltk.stem.porter import PorterStemmer

from .errors import EmptyDocumentError, EmptyVocabularyError, InputError

# term index -> tfisf weight; zero weights are never stored
TfisfVector = dict[int, float]

DEFAULT_ABBREVIATIONS = frozenset(
    {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "mt.",
        "gen.", "col.", "lt.", "sgt.", "capt.", "gov.", "sen.", "rep.", "rev.",
        "inc.", "ltd.", "co.", "corp.", "vs.", "etc.", "e.g.", "i.e.", "u.s.",
        "u.k.", "u.n.", "no.", "fig.", "jan.", "feb.", "mar.", "apr.", "jun.",
        "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec.", "a.m.", "p.m.",
    }
)

# terminal punctuation, optional closing quotes/brackets, whitespace, then an
# uppercase letter or digit (possibly behind an opening quote/bracket)
_BOUNDARY = re.compile(r"[.!?][\"')\]]*\s+(?=[\"'(\[]?[A-Z0-9])")
_WORD = re.compile(r"[^\W_]+")

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


@lru_cache(maxsize=None)
def stem(word: str) -> str:
    return _stemmer.stem(word)


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str

    def __post_init__(self):
        if not self.text.strip():
            raise EmptyDocumentError(f"document {self.doc_id!r} is empty")


@dataclass(frozen=True)
class Sentence:
    sent_id: int
    doc_id: str
    position: int
    raw_text: str
    tokens: tuple[str, ...]
    length_words: int

    def __post_init__(self):
        if self.length_words < 1:
            raise InputError(f"sentence {self.sent_id} has no words")


def split_sentences(
    doc: Document, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS
) -> list[tuple[int, str]]:
    """Split a document into ``(position, text)`` pairs.

    A boundary is terminal punctuation followed by whitespace and an
    uppercase or digit start, unless the word carrying the period is in
    ``abbreviations``.
    """
    abbrev = {a.lower() for a in abbreviations}
    text = doc.text.strip()
    pieces = []
    start = 0
    for match in _BOUNDARY.finditer(text):
        head = text[start : match.end()].rstrip()
        last_word = head.split()[-1].lower() if head.split() else ""
        last_word = last_word.lstrip("\"'([")
        if last_word in abbrev:
            continue
        pieces.append(head)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    pieces = [p for p in pieces if p.strip()]
    if not pieces:
        raise EmptyDocumentError(f"no sentence found in document {doc.doc_id!r}")
    return list(enumerate(pieces))


def preprocess(raw: str, stoplist: frozenset[str] | set[str]) -> list[str]:
    tokens = []
    for word in _WORD.findall(raw.lower()):
        if word.isdigit() or len(word) < 2 or word in stoplist:
            continue
        tokens.append(stem(word))
    return tokens


def load_stoplist(path: str | Path | None = None) -> frozenset[str]:
    """Read a stoplist (one word per line, ``#`` comments). ``None`` loads the bundled list."""
    if path is None:
        text = resources.files("transum.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def make_sentences(
    documents: Iterable[Document],
    stoplist: frozenset[str],
    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
) -> list[Sentence]:
    sentences = []
    for doc in documents:
        for position, raw in split_sentences(doc, abbreviations):
            sentences.append(
                Sentence(
                    sent_id=len(sentences) + 1,
                    doc_id=doc.doc_id,
                    position=position,
                    raw_text=raw,
                    tokens=tuple(preprocess(raw, stoplist)),
                    length_words=len(raw.split()),
                )
            )
    return sentences


@dataclass(frozen=True)
class Vocabulary:
    """Terms with their sentence counts, co-occurrence counts and isf values.

    Term indices are 0-based and follow sorted term order.
    """

    terms: tuple[str, ...]
    n_sentences: int
    sentence_counts: tuple[int, ...]
    pair_counts: Mapping[tuple[int, int], int]
    isf: tuple[float, ...]
    index: Mapping[str, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def pair_count(self, u: int, v: int) -> int:
        if u == v:
            return self.sentence_counts[u]
        return self.pair_counts.get((u, v) if u < v else (v, u), 0)


def build_vocabulary(sentences: list[Sentence]) -> Vocabulary:
    terms = sorted({t for s in sentences for t in s.tokens})
    if not terms:
        raise EmptyVocabularyError("no terms survive preprocessing")
    index = {t: i for i, t in enumerate(terms)}
    counts = [0] * len(terms)
    pairs: Counter = Counter()
    for s in sentences:
        present = sorted({index[t] for t in s.tokens})
        for i in present:
            counts[i] += 1
        pairs.update(combinations(present, 2))
    n = len(sentences)
    isf = tuple(math.log(n / c) for c in counts)
    return Vocabulary(
        terms=tuple(terms),
        n_sentences=n,
        sentence_counts=tuple(counts),
        pair_counts=dict(pairs),
        isf=isf,
        index=index,
    )


def tfisf_vector(fragment: Iterable[str], vocab: Vocabulary) -> TfisfVector:
    counts = Counter(vocab.index[t] for t in fragment if t in vocab.index)
    vec = {}
    for i, tf in counts.items():
        weight = tf * vocab.isf[i]
        if weight > 0:
            vec[i] = weight
    return vec


def cosine_similarity(a: Mapping[int, float], b: Mapping[int, float]) -> float:
    if not a or not b:
        return 0.0
    if len(a) > len(b):
        a, b = b, a
    dot = math.fsum(w * b[t] for t, w in a.items() if t in b)
    if dot == 0:
        return 0.0
    norm_a = math.sqrt(math.fsum(w * w for w in a.values()))
    norm_b = math.sqrt(math.fsum(w * w for w in b.values()))
    return min(1.0, dot / (norm_a * norm_b))
