"""Shared fixtures: a synthetic generative corpus and random guideline trees."""

from dataclasses import dataclass

import numpy as np
import pytest

from ethics_triage.corpus import BowDoc, Vocabulary
from ethics_triage.guideline import (
    Condition,
    GuidelineTree,
    Leaf,
    Question,
    Verdict,
    VerdictKind,
    Xor,
)
from ethics_triage.topics import LdaConfig, TopicModel, train_lda

N_TOPICS = 5
VOCAB_SIZE = 50
N_DOCS = 500
DOC_LEN = 100
CORPUS_SEED = 20260809
TRAIN_CONFIG = LdaConfig(num_topics=N_TOPICS, beta=0.01, iterations=300, burn_in=60, seed=42)


@dataclass(frozen=True)
class SyntheticCorpus:
    phi_star: np.ndarray
    theta_star: np.ndarray
    vocab: Vocabulary
    bows: list[BowDoc]


def make_synthetic_corpus(
    n_topics: int = N_TOPICS,
    vocab_size: int = VOCAB_SIZE,
    n_docs: int = N_DOCS,
    doc_len: int = DOC_LEN,
    seed: int = CORPUS_SEED,
) -> SyntheticCorpus:
    """Sample documents from a known topic-term / doc-topic structure.

    Each true topic concentrates 90% of its mass on its own block of
    vocab_size // n_topics terms, so topics are identifiable.
    """
    rng = np.random.default_rng(seed)
    block = vocab_size // n_topics
    phi_star = np.full((n_topics, vocab_size), 0.1 / (vocab_size - block))
    for k in range(n_topics):
        phi_star[k, k * block : (k + 1) * block] = 0.9 / block
    theta_star = rng.dirichlet([0.3] * n_topics, size=n_docs)

    vocab = Vocabulary.from_terms([f"w{i:02d}" for i in range(vocab_size)])
    bows = []
    for d in range(n_docs):
        counts = np.zeros(vocab_size, dtype=int)
        for k, c in enumerate(rng.multinomial(doc_len, theta_star[d])):
            if c:
                counts += rng.multinomial(c, phi_star[k])
        bows.append(
            BowDoc(
                doc_id=f"d{d}",
                counts={i: int(c) for i, c in enumerate(counts) if c},
                vocab_fingerprint=vocab.fingerprint,
            )
        )
    return SyntheticCorpus(phi_star=phi_star, theta_star=theta_star, vocab=vocab, bows=bows)


def greedy_align_tv(phi: np.ndarray, phi_star: np.ndarray) -> float:
    """Mean total-variation distance after greedily pairing recovered to true topics."""
    n = phi.shape[0]
    tv = 0.5 * np.abs(phi[:, None, :] - phi_star[None, :, :]).sum(axis=2)
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    paired = []
    for _ in range(n):
        best = None
        for i in range(n):
            if i in used_rows:
                continue
            for j in range(n):
                if j in used_cols:
                    continue
                if best is None or tv[i, j] < tv[best[0], best[1]]:
                    best = (i, j)
        paired.append(tv[best[0], best[1]])
        used_rows.add(best[0])
        used_cols.add(best[1])
    return float(np.mean(paired))


@pytest.fixture(scope="session")
def synthetic_corpus() -> SyntheticCorpus:
    return make_synthetic_corpus()


@pytest.fixture(scope="session")
def trained_model(synthetic_corpus: SyntheticCorpus) -> TopicModel:
    return train_lda(synthetic_corpus.bows, TRAIN_CONFIG, synthetic_corpus.vocab)


# -- random guideline trees ----------------------------------------------------

_KINDS = list(VerdictKind)


def random_node(rng: np.random.Generator, depth: int, max_depth: int = 4):
    roll = rng.random()
    if depth >= max_depth or roll < 0.35:
        kind = _KINDS[int(rng.integers(len(_KINDS)))]
        citations = tuple(f"src-{i}" for i in range(int(rng.integers(0, 3))))
        return Leaf(verdict=Verdict(kind=kind, rationale=f"r{depth}", citations=citations))
    if roll < 0.5:
        return Condition(note=f"open point {depth}", child=random_node(rng, depth + 1, max_depth))
    is_xor = roll < 0.7
    n_branches = int(rng.integers(2 if is_xor else 1, 5))
    branches = tuple(
        (f"choice {depth}-{i}", random_node(rng, depth + 1, max_depth))
        for i in range(n_branches)
    )
    cls = Xor if is_xor else Question
    return cls(prompt=f"q at depth {depth}?", branches=branches)


def random_tree(rng: np.random.Generator, name: str = "generated") -> GuidelineTree:
    return GuidelineTree(name=name, root=random_node(rng, 0))


def random_script(rng: np.random.Generator, tree: GuidelineTree) -> list[str]:
    """A random valid answer script driving the tree to a leaf."""
    script: list[str] = []
    node = tree.root
    while True:
        while isinstance(node, Condition):
            node = node.child
        if isinstance(node, Leaf):
            return script
        label = node.labels[int(rng.integers(len(node.labels)))]
        script.append(label)
        node = node.child(label)


def enumerate_scripts(tree: GuidelineTree) -> list[tuple[str, ...]]:
    """Every answer script of a tree, with the leaf object it reaches."""
    found: list[tuple[tuple[str, ...], Leaf]] = []

    def walk(node, acc):
        while isinstance(node, Condition):
            node = node.child
        if isinstance(node, Leaf):
            found.append((tuple(acc), node))
            return
        for label, child in node.branches:
            walk(child, acc + [label])

    walk(tree.root, [])
    return found
