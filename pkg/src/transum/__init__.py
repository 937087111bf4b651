"""Query-oriented extractive summarization via weighted hypergraph transversals."""

from .errors import InputError, InvariantError, TransumError
from .textprep import Document, Sentence, Vocabulary, build_vocabulary, cosine_similarity
from .themegraph import Hypergraph, Theme, build_hypergraph, tag_sentences
from .topics import SemcotParams, TopicAssignment, semcot
from .transversal import Summary, coverage, tc_transum, tl_transum

__version__ = "0.1.0"

__all__ = [
    "Document",
    "Hypergraph",
    "InputError",
    "InvariantError",
    "SemcotParams",
    "Sentence",
    "Summary",
    "Theme",
    "TopicAssignment",
    "TransumError",
    "Vocabulary",
    "build_hypergraph",
    "build_vocabulary",
    "cosine_similarity",
    "coverage",
    "semcot",
    "tag_sentences",
    "tc_transum",
    "tl_transum",
]
