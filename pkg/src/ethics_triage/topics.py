"""Topic modeling: collapsed-Gibbs LDA training, inference, and topic categories.

The sampler is deterministic under ``LdaConfig.seed``: all randomness is drawn
from one seeded generator outside the sweep kernel (one uniform per token per
sweep), so identical inputs give bit-identical models. The kernel is compiled
with numba when available and falls back to the same pure-Python code.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import BowDoc, Vocabulary
from .errors import FingerprintMismatch, ValidationError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

MODEL_FORMAT_VERSION = "1"
_LL_RECORD_EVERY = 10


@dataclass(frozen=True)
class LdaConfig:
    num_topics: int
    alpha: float | None = None  # resolved to 1 / num_topics
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_topics < 1:
            raise ValidationError(f"num_topics must be >= 1, got {self.num_topics}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 1.0 / self.num_topics)
        if self.alpha <= 0 or self.beta <= 0:
            raise ValidationError("alpha and beta must be > 0")
        if not self.iterations > self.burn_in >= 0:
            raise ValidationError(
                f"need iterations > burn_in >= 0, got {self.iterations} and {self.burn_in}"
            )


@dataclass
class TopicModel:
    """Trained LDA model: topic-term rows (phi) and document-topic rows (theta).

    ``vocab`` is attached in memory when known so term-level queries work; it
    is not part of the serialized form, which carries the fingerprint only.
    ``ll_history`` holds (sweep, corpus log-likelihood) training diagnostics.
    """

    phi: np.ndarray  # (K, V), rows sum to 1
    theta: np.ndarray  # (D, K), rows sum to 1
    config: LdaConfig
    vocab_fingerprint: str
    vocab: Vocabulary | None = field(default=None, repr=False, compare=False)
    ll_history: list[tuple[int, float]] = field(default_factory=list, repr=False, compare=False)

    @property
    def num_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.phi.shape[1]


def _gibbs_sweep_py(words, docs, z, n_dk, n_kw, n_k, alpha, beta, u, cum):
    # One full sweep over all token positions. counts exclude the current
    # token while its topic is resampled; u holds one uniform per token.
    n_topics = n_kw.shape[0]
    v_beta = n_kw.shape[1] * beta
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        k = z[i]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for t in range(n_topics):
            total += (n_kw[t, w] + beta) * (n_dk[d, t] + alpha) / (n_k[t] + v_beta)
            cum[t] = total
        r = u[i] * total
        k_new = 0
        while k_new < n_topics - 1 and cum[k_new] < r:
            k_new += 1
        z[i] = k_new
        n_dk[d, k_new] += 1
        n_kw[k_new, w] += 1
        n_k[k_new] += 1


if njit is not None:
    _gibbs_sweep = njit(cache=True)(_gibbs_sweep_py)
else:  # pragma: no cover
    _gibbs_sweep = _gibbs_sweep_py


def _point_estimates(n_dk, n_kw, n_k, doc_lengths, alpha, beta):
    phi = (n_kw + beta) / (n_k[:, None] + n_kw.shape[1] * beta)
    theta = (n_dk + alpha) / (doc_lengths[:, None] + n_dk.shape[1] * alpha)
    return phi, theta


def _corpus_ll(phi, theta, words, docs):
    if words.shape[0] == 0:
        return 0.0
    token_p = np.einsum("ik,ki->i", theta[docs], phi[:, words])
    return float(np.log(token_p).sum())


def _run_gibbs(words, docs, n_docs, n_terms, config, z0, uniform_for_sweep):
    """Core training loop over flat token arrays.

    ``uniform_for_sweep(sweep)`` must return one float64 uniform per token;
    exposing it (plus ``z0``) lets tests replay permuted token streams.
    """
    n_topics = config.num_topics
    z = z0.copy()
    n_dk = np.zeros((n_docs, n_topics), dtype=np.int32)
    n_kw = np.zeros((n_topics, n_terms), dtype=np.int32)
    n_k = np.zeros(n_topics, dtype=np.int32)
    np.add.at(n_dk, (docs, z), 1)
    np.add.at(n_kw, (z, words), 1)
    np.add.at(n_k, z, 1)
    doc_lengths = np.bincount(docs, minlength=n_docs) if words.size else np.zeros(n_docs, int)

    cum = np.empty(n_topics, dtype=np.float64)
    ll_history: list[tuple[int, float]] = []
    for sweep in range(1, config.iterations + 1):
        u = uniform_for_sweep(sweep)
        _gibbs_sweep(words, docs, z, n_dk, n_kw, n_k, config.alpha, config.beta, u, cum)
        if sweep % _LL_RECORD_EVERY == 0 or sweep == config.iterations:
            phi, theta = _point_estimates(n_dk, n_kw, n_k, doc_lengths, config.alpha, config.beta)
            ll_history.append((sweep, _corpus_ll(phi, theta, words, docs)))

    phi, theta = _point_estimates(n_dk, n_kw, n_k, doc_lengths, config.alpha, config.beta)
    return phi, theta, ll_history


def _check_bow(bow: BowDoc, vocab_size: int, fingerprint: str) -> None:
    if bow.vocab_fingerprint is not None and bow.vocab_fingerprint != fingerprint:
        raise FingerprintMismatch(
            f"document {bow.doc_id!r} was built against a different vocabulary"
        )
    for term_id in bow.counts:
        if term_id >= vocab_size:
            raise ValidationError(
                f"document {bow.doc_id!r}: term id {term_id} outside vocabulary of size {vocab_size}"
            )


def _flatten(bows: list[BowDoc]) -> tuple[np.ndarray, np.ndarray]:
    """Expand sparse counts to flat (word, doc) token arrays, corpus order."""
    words: list[np.ndarray] = []
    docs: list[np.ndarray] = []
    for d, bow in enumerate(bows):
        if not bow.counts:
            continue
        ids = np.fromiter(sorted(bow.counts), dtype=np.int32)
        reps = np.fromiter((bow.counts[int(i)] for i in ids), dtype=np.int32)
        words.append(np.repeat(ids, reps))
        docs.append(np.full(int(reps.sum()), d, dtype=np.int32))
    if not words:
        return np.empty(0, dtype=np.int32), np.empty(0, dtype=np.int32)
    return np.concatenate(words), np.concatenate(docs)


def train_lda(bows: list[BowDoc], config: LdaConfig, vocab: Vocabulary) -> TopicModel:
    """Train a collapsed-Gibbs LDA model on bag-of-words documents.

    Documents with no in-vocabulary terms are skipped with a warning; they
    keep a (uniform) theta row so rows stay aligned with the input order.
    """
    if not bows:
        raise ValidationError("cannot train on an empty corpus")
    fingerprint = vocab.fingerprint
    for bow in bows:
        _check_bow(bow, len(vocab), fingerprint)
    empty = [bow.doc_id for bow in bows if not bow.counts]
    if empty:
        warnings.warn(
            f"skipping {len(empty)} empty document(s) (no in-vocabulary terms): "
            + ", ".join(repr(i) for i in empty[:5]),
            stacklevel=2,
        )
    if config.num_topics > len(vocab):
        warnings.warn(
            f"num_topics={config.num_topics} exceeds the {len(vocab)} distinct terms",
            stacklevel=2,
        )

    words, docs = _flatten(bows)
    rng = np.random.default_rng(config.seed)
    z0 = rng.integers(0, config.num_topics, size=words.shape[0], dtype=np.int32)
    phi, theta, ll_history = _run_gibbs(
        words,
        docs,
        n_docs=len(bows),
        n_terms=len(vocab),
        config=config,
        z0=z0,
        uniform_for_sweep=lambda _sweep: rng.random(words.shape[0]),
    )
    return TopicModel(
        phi=phi,
        theta=theta,
        config=config,
        vocab_fingerprint=fingerprint,
        vocab=vocab,
        ll_history=ll_history,
    )


def infer_doc_topics(model: TopicModel, bow: BowDoc, inference_iterations: int = 100) -> np.ndarray:
    """Topic distribution of one document under a trained model (fold-in Gibbs).

    Topic assignments are resampled against the fixed trained phi; the
    returned vector averages the smoothed topic counts over the second half
    of the sweeps. Deterministic given the model's seed.
    """
    if inference_iterations < 1:
        raise ValidationError("inference_iterations must be >= 1")
    _check_bow(bow, model.vocab_size, model.vocab_fingerprint)
    n_topics = model.num_topics
    if not bow.counts:
        return np.full(n_topics, 1.0 / n_topics)

    words, _ = _flatten([bow])
    n = words.shape[0]
    alpha = model.config.alpha
    rng = np.random.default_rng(model.config.seed)
    z = rng.integers(0, n_topics, size=n)
    n_local = np.bincount(z, minlength=n_topics).astype(np.float64)

    keep_from = inference_iterations // 2
    acc = np.zeros(n_topics)
    kept = 0
    for sweep in range(inference_iterations):
        u = rng.random(n)
        for i in range(n):
            n_local[z[i]] -= 1
            p = model.phi[:, words[i]] * (n_local + alpha)
            cdf = np.cumsum(p)
            k_new = int(np.searchsorted(cdf, u[i] * cdf[-1]))
            if k_new >= n_topics:  # guard float rounding at u ~ 1
                k_new = n_topics - 1
            z[i] = k_new
            n_local[k_new] += 1
        if sweep >= keep_from:
            acc += (n_local + alpha) / (n + n_topics * alpha)
            kept += 1
    return acc / kept


def top_words(model: TopicModel, topic: int, n: int = 30) -> list[tuple[str, float]]:
    """The n most probable terms of one topic, descending, ties lexicographic."""
    if not 0 <= topic < model.num_topics:
        raise ValidationError(f"topic {topic} out of range 0..{model.num_topics - 1}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if model.vocab is None:
        raise ValidationError("model has no vocabulary attached; load it with its vocabulary")
    row = model.phi[topic]
    order = sorted(range(model.vocab_size), key=lambda i: (-row[i], model.vocab.terms[i]))
    return [(model.vocab.terms[i], float(row[i])) for i in order[:n]]


def log_likelihood(model: TopicModel, bows: list[BowDoc]) -> float:
    """Corpus log-likelihood sum over token positions of log(theta_d . phi[:, w]).

    ``bows`` must be (a prefix-aligned subset of) the training documents in
    training order, as theta rows are matched by position.
    """
    if len(bows) > model.theta.shape[0]:
        raise ValidationError(
            f"{len(bows)} documents given but model holds {model.theta.shape[0]} theta rows"
        )
    total = 0.0
    for d, bow in enumerate(bows):
        _check_bow(bow, model.vocab_size, model.vocab_fingerprint)
        if not bow.counts:
            continue
        ids = np.fromiter(sorted(bow.counts), dtype=np.int64)
        counts = np.fromiter((bow.counts[int(i)] for i in ids), dtype=np.float64)
        p = model.theta[d] @ model.phi[:, ids]
        total += float(counts @ np.log(p))
    return total


# -- topic categories ---------------------------------------------------------

UNCATEGORIZED = "uncategorized"


@dataclass(frozen=True)
class CategoryMap:
    """Hand-authored merge of topics into named categories.

    The map is input data (the merge is a human judgment); this class only
    validates and applies it.
    """

    entries: dict[int, str]
    category_order: tuple[str, ...] = ()

    @classmethod
    def from_categories(cls, categories: list[tuple[str, list[int]]]) -> "CategoryMap":
        entries: dict[int, str] = {}
        order: list[str] = []
        for name, topic_ids in categories:
            if not name:
                raise ValidationError("category name must be non-empty")
            if ";" in name:
                raise ValidationError(f"category name may not contain ';': {name!r}")
            if name in order:
                raise ValidationError(f"duplicate category name {name!r}")
            order.append(name)
            for topic in topic_ids:
                if topic in entries:
                    raise ValidationError(
                        f"topic {topic} mapped to both {entries[topic]!r} and {name!r}"
                    )
                entries[topic] = name
        return cls(entries=entries, category_order=tuple(order))

    @classmethod
    def from_json(cls, text: str) -> "CategoryMap":
        data = json.loads(text)
        if not isinstance(data, dict) or not isinstance(data.get("categories"), list):
            raise ValidationError('category map must be {"categories": [{"name", "topics"}]}')
        return cls.from_categories(
            [(c.get("name", ""), list(c.get("topics", []))) for c in data["categories"]]
        )

    @classmethod
    def load(cls, path: str | Path) -> "CategoryMap":
        return cls.from_json(Path(path).read_text("utf-8"))

    def category_of(self, topic: int) -> str:
        return self.entries.get(topic, UNCATEGORIZED)

    def topic_counts(self) -> dict[str, int]:
        counts = {name: 0 for name in self.category_order}
        for name in self.entries.values():
            counts[name] = counts.get(name, 0) + 1
        return counts


@dataclass(frozen=True)
class CategorizedModel:
    """A topic model viewed through a category map."""

    num_topics: int
    category_map: CategoryMap
    topics_by_category: dict[str, tuple[int, ...]]

    def category_of(self, topic: int) -> str:
        if not 0 <= topic < self.num_topics:
            raise ValidationError(f"topic {topic} out of range 0..{self.num_topics - 1}")
        return self.category_map.category_of(topic)


def apply_category_map(model: TopicModel, category_map: CategoryMap) -> CategorizedModel:
    """Group the model's topics by category; unmapped topics are 'uncategorized'."""
    bad = sorted(t for t in category_map.entries if not 0 <= t < model.num_topics)
    if bad:
        raise ValidationError(f"category map names topics outside 0..{model.num_topics - 1}: {bad}")
    grouped: dict[str, list[int]] = {}
    for topic in range(model.num_topics):
        grouped.setdefault(category_map.category_of(topic), []).append(topic)
    return CategorizedModel(
        num_topics=model.num_topics,
        category_map=category_map,
        topics_by_category={name: tuple(topics) for name, topics in grouped.items()},
    )


# -- persistence --------------------------------------------------------------


def model_to_json(model: TopicModel) -> str:
    payload = {
        "version": MODEL_FORMAT_VERSION,
        "config": {
            "num_topics": model.config.num_topics,
            "alpha": model.config.alpha,
            "beta": model.config.beta,
            "iterations": model.config.iterations,
            "burn_in": model.config.burn_in,
            "seed": model.config.seed,
        },
        "vocab_fingerprint": model.vocab_fingerprint,
        "phi": model.phi.tolist(),
        "theta": model.theta.tolist(),
    }
    return json.dumps(payload)


def save_model(model: TopicModel, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: str | Path, vocab: Vocabulary | None = None) -> TopicModel:
    data = json.loads(Path(path).read_text("utf-8"))
    if data.get("version") != MODEL_FORMAT_VERSION:
        raise ValidationError(f"unsupported model format version {data.get('version')!r}")
    config = LdaConfig(**data["config"])
    fingerprint = data["vocab_fingerprint"]
    if vocab is not None and vocab.fingerprint != fingerprint:
        raise FingerprintMismatch("vocabulary does not match the model's fingerprint")
    return TopicModel(
        phi=np.asarray(data["phi"], dtype=np.float64),
        theta=np.asarray(data["theta"], dtype=np.float64),
        config=config,
        vocab_fingerprint=fingerprint,
        vocab=vocab,
    )
