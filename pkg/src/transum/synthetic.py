"""Deterministic synthetic corpora for demos, acceptance checks and timing runs."""

from __future__ import annotations

import random

from .textprep import Document

VOLCANO = (
    "volcano lava magma eruption crater ash tremor seismograph caldera "
    "pyroclastic fumarole basalt summit vent plume geologist"
).split()
FINANCE = (
    "bank loan mortgage credit inflation bond equity dividend portfolio "
    "treasury currency lender banker deposit investor brokerage"
).split()
FILLER = "report city official region morning village harbor council".split()
GLUE = "the a and of in with was were near".split()


def _sentence(rng: random.Random, words: list[str]) -> str:
    out = []
    for w in words:
        out.append(w)
        if rng.random() < 0.6:
            out.append(rng.choice(GLUE))
    text = " ".join(out)
    return text[0].upper() + text[1:] + "."


def planted_corpus(seed: int = 7, n_docs: int = 3, per_doc: int = 12) -> tuple[list[Document], str]:
    """Documents mixing a volcano topic and a finance topic, plus bridging sentences.

    Every third sentence mentions both topics, so themes overlap by
    construction. The query asks about the volcano topic.
    """
    rng = random.Random(seed)
    docs = []
    for d in range(n_docs):
        sentences = []
        for k in range(per_doc):
            kind = k % 3
            if kind == 0:
                words = rng.sample(VOLCANO, rng.randint(3, 5))
            elif kind == 1:
                words = rng.sample(FINANCE, rng.randint(3, 5))
            else:
                words = rng.sample(VOLCANO, rng.randint(2, 3)) + rng.sample(FINANCE, rng.randint(2, 3))
            if rng.random() < 0.5:
                words.append(rng.choice(FILLER))
            rng.shuffle(words)
            sentences.append(_sentence(rng, words))
        docs.append(Document(f"doc{d + 1}", " ".join(sentences)))
    return docs, "volcano eruption lava ash"


def scaling_corpus(
    n_terms: int, n_sentences: int = 200, cluster_size: int = 8, seed: int = 0
) -> tuple[list[Document], str]:
    """Random corpus with ``n_terms`` distinct synthetic terms grouped in co-occurring clusters.

    Terms look like ``t0042x``: letters plus digits, untouched by stemming
    and never pure numbers.
    """
    rng = random.Random(seed)
    terms = [f"t{i:05d}x" for i in range(n_terms)]
    clusters = [terms[i : i + cluster_size] for i in range(0, n_terms, cluster_size)]
    per_sentence = max(4, -(-3 * n_terms // n_sentences))
    bags: list[list[str]] = [[] for _ in range(n_sentences)]
    # every term shows up at least twice
    for t in terms:
        for s in rng.sample(range(n_sentences), 2):
            bags[s].append(t)
    for bag in bags:
        home = rng.choice(clusters)
        while len(bag) < per_sentence:
            pool = home if rng.random() < 0.8 else rng.choice(clusters)
            bag.append(rng.choice(pool))
    sentences = [_sentence(rng, bag) for bag in bags]
    docs = []
    chunk = max(1, n_sentences // 5)
    for d, start in enumerate(range(0, n_sentences, chunk)):
        docs.append(Document(f"doc{d + 1}", " ".join(sentences[start : start + chunk])))
    return docs, " ".join(clusters[0][:3])
