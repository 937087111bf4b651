"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also collected in the terminal summary.
"""

import math
import random
import statistics
import time
import warnings

import numpy as np
import pytest

from conftest import random_hypergraph
from transum.pipeline import Config, prepare, summarize
from transum.rouge import R2, SU4, rouge_score, skip_bigrams
from transum.synthetic import scaling_corpus
from transum.textprep import Document, build_vocabulary, make_sentences
from transum.topics import NOISE, SemcotParams, dissimilarity_matrix, semcot
from transum.transversal import (
    brute_force_budgeted,
    brute_force_soft,
    coverage,
    tc_transum,
    tl_transum,
)

TOL = 1e-9
BOUND = 0.5 * (1 - 1 / math.e)
GAMMAS = [k / 10 for k in range(11)]


def test_submodularity(verdict):
    rng = random.Random(2024)
    start = time.perf_counter()
    violations = checked = 0
    while checked < 200:
        g = random_hypergraph(rng, max_nodes=20, max_edges=15)
        if g.n_nodes < 2:
            continue
        u = rng.randrange(g.n_nodes)
        rest = [i for i in range(g.n_nodes) if i != u]
        T = set(rng.sample(rest, rng.randint(0, len(rest))))
        S = set(rng.sample(sorted(T), rng.randint(0, len(T))))
        f = lambda X: coverage(X, g)
        if f(T | {u}) - f(T) > f(S | {u}) - f(S) + TOL or f(S) > f(T) + TOL:
            violations += 1
        checked += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 5
    verdict(1, ok, f"submodular/monotone, {violations} violations in {checked} triples, {elapsed:.2f}s")
    assert ok


def test_budgeted_guarantee(verdict):
    rng = random.Random(3)
    start = time.perf_counter()
    ratios, failures = [], 0
    for _ in range(500):
        g = random_hypergraph(rng, max_nodes=12)
        budget = rng.uniform(min(g.node_weights), sum(g.node_weights))
        opt, _ = brute_force_budgeted(g, budget)
        got = tl_transum(g, budget)
        assert got.total_length <= budget + TOL
        ratio = got.covered_weight / opt if opt > 0 else 1.0
        failures += ratio < BOUND - TOL
        ratios.append(ratio)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    verdict(
        2,
        ok,
        f"TL-TranSum >= {BOUND:.4f} x optimum in {len(ratios) - failures}/{len(ratios)} instances, "
        f"ratio median {statistics.median(ratios):.4f} min {min(ratios):.4f}, {elapsed:.1f}s",
    )
    assert ok


@pytest.fixture(scope="module")
def soft_instances():
    rng = random.Random(5)
    return [random_hypergraph(rng, max_nodes=12) for _ in range(120)]


def test_target_coverage_feasible_and_monotone(verdict, soft_instances):
    infeasible = non_monotone = 0
    for g in soft_instances:
        lengths = []
        for gamma in GAMMAS:
            s = tc_transum(g, gamma)
            infeasible += s.covered_weight < gamma * g.total_weight - TOL
            lengths.append(s.total_length)
        non_monotone += any(b < a for a, b in zip(lengths, lengths[1:]))
    ok = infeasible == 0 and non_monotone == 0
    verdict(
        3,
        ok,
        f"{len(soft_instances)} instances x {len(GAMMAS)} gammas: {infeasible} infeasible, "
        f"{non_monotone} non-monotone length curves",
    )
    assert ok


def _soft_bound_check(instances, truncated):
    checked = divergent = violations = 0
    worst = 0.0
    for g in instances:
        for gamma in GAMMAS:
            target = gamma * g.total_weight
            s = tc_transum(g, gamma, truncated=truncated)
            opt, _ = brute_force_soft(g, gamma)
            if target <= TOL:
                checked += 1
                violations += s.total_length > TOL
                continue
            gap = target - s.coverage_before_last
            if gap <= TOL:
                divergent += 1
                continue
            bound = opt * (1 + math.log(target / gap))
            checked += 1
            if s.total_length > bound + TOL:
                violations += 1
                worst = max(worst, s.total_length / bound)
    return checked, divergent, violations, worst


def test_target_coverage_guarantee(verdict, soft_instances):
    checked, divergent, violations, worst = _soft_bound_check(soft_instances, truncated=False)
    ok = violations == 0
    verdict(
        4,
        ok,
        f"TC-TranSum cost bound held in {checked - violations}/{checked} cases "
        f"({divergent} divergent-log cases skipped, worst cost/bound {worst:.3f})",
    )
    t_checked, t_divergent, t_violations, _ = _soft_bound_check(soft_instances, truncated=True)
    print(
        f"      info: truncated-gain variant held in {t_checked - t_violations}/{t_checked} cases "
        f"({t_divergent} divergent-log cases skipped)"
    )
    assert t_violations == 0
    # Ranking by untruncated gain (as the algorithm is stated) can overshoot on the
    # last step; when the target is met in one step the bound demands the optimum.
    assert ok


def random_cooccurrence_corpus(rng: random.Random) -> list[Document]:
    n_terms = rng.randint(10, 200)
    terms = [f"q{i:03d}z" for i in range(n_terms)]
    weights = [1 / (k + 1) for k in range(n_terms)]
    sentences = []
    for _ in range(rng.randint(20, 120)):
        words = rng.choices(terms, weights, k=rng.randint(2, 9))
        sentences.append(" ".join(words).capitalize() + ".")
    return [Document("d", " ".join(sentences))]


def test_semcot_postconditions(verdict):
    rng = random.Random(11)
    params = SemcotParams()
    failures = []
    n_corpora = 100
    for trial in range(n_corpora):
        vocab = build_vocabulary(make_sentences(random_cooccurrence_corpus(rng), frozenset()))
        assert len(vocab) <= 200
        d = dissimilarity_matrix(vocab)
        runs = [semcot(d, vocab, params) for _ in range(3)]
        a = runs[0]
        if any(r != a for r in runs[1:]):
            failures.append(f"corpus {trial}: not deterministic")
        if len(a.epsilons) > params.max_iterations:
            failures.append(f"corpus {trial}: exceeded iteration guard")
        big_m = params.max_cluster_size(len(vocab))
        for topic, members in a.topics().items():
            rescued = len(members) == 1 and members[0] in a.rescued and vocab.isf[members[0]] >= params.mu
            if not (len(members) < big_m or rescued):
                failures.append(f"corpus {trial}: topic {topic} has {len(members)} terms, M={big_m}")
        if set(a.rescued) & {t for t, lab in enumerate(a.labels) if lab == NOISE}:
            failures.append(f"corpus {trial}: rescued term left as noise")
    ok = not failures
    verdict(5, ok, f"SEMCOT postconditions on {n_corpora} random corpora, {len(failures)} failures")
    assert ok, failures[:5]


def test_pipeline_postconditions(verdict, demo_dir):
    corpus = demo_dir / "corpora" / "c1"
    p = prepare(corpus, None, Config())
    g = p.graph
    n_docs, n_sentences = len({s.doc_id for s in p.sentences}), len(p.sentences)
    short = summarize(corpus, None, Config(mode="length", target_length=25))
    full = summarize(corpus, None, Config(mode="coverage", gamma=1.0))
    every_sentence = all(g.incidence[i] for i in range(g.n_nodes))
    overlap = max(len(inc) for inc in g.incidence)
    checks = {
        "corpus size": n_docs >= 3 and n_sentences >= 30,
        "L=25": short.total_length <= 25,
        "gamma=1": full.covered_weight >= g.total_weight - TOL,
        "every sentence tagged": every_sentence,
        "overlap": overlap >= 2,
    }
    ok = all(checks.values())
    verdict(
        6,
        ok,
        f"{n_docs} docs, {n_sentences} sentences, {len(g.edges)} themes; L=25 -> {short.total_length:g} words; "
        f"gamma=1 covers {full.coverage_fraction:.3f}; max incidences {overlap}",
    )
    assert ok, checks


def test_rouge_oracle(verdict):
    T = str.split
    hand = [
        (rouge_score(T("a b x d"), [T("a b c d")], R2), 1 / 3),
        (rouge_score(T("c b a"), [T("a b c")], R2), 0.0),
        (rouge_score(T("a c"), [T("a b c")], SU4), 0.5),
        (rouge_score(T("a b"), [T("a b c"), T("c d")], R2, jackknife=True), 0.25),
    ]
    hand_ok = all(abs(got - want) <= 1e-12 for got, want in hand)
    rng = random.Random(0)
    identity_ok = True
    for _ in range(50):
        x = [rng.choice("abcdefg") for _ in range(rng.randint(2, 30))]
        identity_ok &= rouge_score(x, [x], R2) == 1.0 and rouge_score(x, [x], SU4) == 1.0
    law_ok = all(
        sum(skip_bigrams([f"w{i}" for i in range(n)], gap).values())
        == sum(min(gap + 1, n - i) for i in range(1, n))
        for n in range(31)
        for gap in range(7)
    )
    ok = hand_ok and identity_ok and law_ok
    verdict(7, ok, f"hand values {hand_ok}, identity {identity_ok}, skip-bigram law n<=30 gap<=6 {law_ok}")
    assert ok


def test_complexity_smoke(verdict):
    sizes = [250, 500, 1000]
    times = []
    start = time.perf_counter()
    for n_terms in sizes:
        docs, query = scaling_corpus(n_terms, n_sentences=200)
        best = math.inf
        for _ in range(2):
            t0 = time.perf_counter()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                summarize(docs, query, Config(target_length=100))
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    total = time.perf_counter() - start
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    ok = slope < 3 and total < 120
    detail = ", ".join(f"N_t={n}: {t:.2f}s" for n, t in zip(sizes, times))
    verdict(8, ok, f"{detail}; log-log slope {slope:.2f}; total {total:.1f}s")
    if slope > 2.5:
        warnings.warn(f"runtime slope {slope:.2f} exceeds 2.5")
    assert ok
