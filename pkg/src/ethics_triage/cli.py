"""Command-line interface.

Pipeline subcommands (ingest, train, topics, screen, classify, counts) are
batch, single-invocation steps exchanging JSON/CSV artifacts. Guideline
subcommands lint, walk (interactive or scripted, locally or against a running
service), and serve the HTTP API.

Exit codes: 0 success, 1 validation/ingestion error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .artifacts import (
    PreparedCorpus,
    read_assignments_csv,
    read_flags_csv,
    read_prepared_corpus,
    write_assignments_csv,
    write_flags_csv,
    write_prepared_corpus,
)
from .classify import AssignRules, assign_document, category_counts
from .corpus import (
    TokenizerConfig,
    build_vocabulary,
    extract_ngrams,
    load_corpus,
    load_stopwords,
    to_bow,
    tokenize,
)
from .errors import EthicsTriageError, ValidationError
from .guideline import (
    GuidelineTree,
    Xor,
    answer,
    load_guideline_file,
    start_session,
    undo,
    validate,
)
from .screening import combine_flags, screen_document
from .topics import CategoryMap, LdaConfig, apply_category_map, load_model, save_model, top_words, train_lda

DEFAULT_ADDR = "127.0.0.1:8080"


def _cmd_ingest(args: argparse.Namespace) -> int:
    stopwords = load_stopwords(args.stopwords)
    config = TokenizerConfig(
        stopword_list=frozenset(stopwords),
        max_ngram=args.max_ngram,
        min_token_length=args.min_token_length,
    )
    docs = load_corpus(args.manifest)
    include_title_abstract = not args.body_only
    term_lists = [
        extract_ngrams(tokenize(doc.text(include_title_abstract), config), config.max_ngram)
        for doc in docs
    ]
    vocab = build_vocabulary(term_lists, min_doc_freq=args.min_doc_freq)
    bows = [to_bow(terms, vocab, doc_id=doc.id) for terms, doc in zip(term_lists, docs)]
    prepared = PreparedCorpus(
        vocab=vocab,
        bows=bows,
        gray_flags={doc.id: doc.gray_flag for doc in docs},
        meta={
            "max_ngram": config.max_ngram,
            "min_token_length": config.min_token_length,
            "min_doc_freq": args.min_doc_freq,
            "include_title_abstract": include_title_abstract,
        },
    )
    write_prepared_corpus(args.out, prepared)
    print(f"ingested {len(docs)} documents; vocabulary {len(vocab)} terms -> {args.out}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    prepared = read_prepared_corpus(args.corpus)
    config = LdaConfig(
        num_topics=args.topics,
        alpha=args.alpha,
        beta=args.beta,
        iterations=args.iterations,
        burn_in=args.burn_in,
        seed=args.seed,
    )
    model = train_lda(prepared.bows, config, prepared.vocab)
    save_model(model, args.out)
    final_ll = model.ll_history[-1][1]
    print(
        f"trained {config.num_topics} topics on {len(prepared.bows)} documents; "
        f"log-likelihood {final_ll:.1f} -> {args.out}"
    )
    return 0


def _cmd_topics(args: argparse.Namespace) -> int:
    prepared = read_prepared_corpus(args.corpus)
    model = load_model(args.model, vocab=prepared.vocab)
    topic_ids = [args.topic] if args.topic is not None else list(range(model.num_topics))
    payload = {
        "version": "1",
        "topics": [
            {"topic": t, "words": [[term, p] for term, p in top_words(model, t, args.top)]}
            for t in topic_ids
        ],
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_screen(args: argparse.Namespace) -> int:
    docs = load_corpus(args.manifest)
    flags = [screen_document(doc) for doc in docs]
    write_flags_csv(args.out, flags)
    summary = combine_flags(
        {f.doc_id for f in flags if f.gray},
        {f.doc_id for f in flags if f.ethics_mention},
        docs,
    )
    print(json.dumps(summary.to_dict(), indent=2))
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    prepared = read_prepared_corpus(args.corpus)
    model = load_model(args.model, vocab=prepared.vocab)
    if model.theta.shape[0] != len(prepared.bows):
        raise ValidationError(
            f"model holds {model.theta.shape[0]} document rows but corpus has "
            f"{len(prepared.bows)}; was it trained on this corpus?"
        )
    category_map = CategoryMap.load(args.categories)
    apply_category_map(model, category_map)  # validates topic ids up front
    rules = AssignRules(second_topic_threshold=args.threshold)

    if args.flags:
        screened = read_flags_csv(args.flags)
        keep = {f.doc_id for f in screened if f.gray or f.ethics_mention}
    else:
        keep = {bow.doc_id for bow in prepared.bows}
    assignments = [
        assign_document(bow.doc_id, model.theta[i], category_map, rules)
        for i, bow in enumerate(prepared.bows)
        if bow.doc_id in keep
    ]
    write_assignments_csv(args.out, assignments)
    print(f"classified {len(assignments)} of {len(prepared.bows)} documents -> {args.out}")
    return 0


def _cmd_counts(args: argparse.Namespace) -> int:
    assignments = read_assignments_csv(args.assignments)
    counts = dict(sorted(category_counts(assignments).items()))
    payload = json.dumps({"version": "1", "counts": counts}, indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return 0


def _cmd_lint(args: argparse.Namespace) -> int:
    trees = load_guideline_file(args.path)
    findings = validate(trees, max_depth=args.max_depth)
    for finding in findings:
        print(f"{finding.severity}: {finding.location}: {finding.message}")
    print(f"{len(findings)} findings")
    return 1 if any(f.severity == "error" for f in findings) else 0


class _LocalWalk:
    """Drive a session directly through the guideline engine."""

    def __init__(self, tree: GuidelineTree):
        self._session = start_session(tree)

    @property
    def is_terminal(self) -> bool:
        return self._session.is_terminal

    @property
    def prompt(self) -> str:
        return self._session.current.prompt

    @property
    def labels(self) -> list[str]:
        return list(self._session.current.labels)

    @property
    def is_xor(self) -> bool:
        return isinstance(self._session.current, Xor)

    def answer(self, label: str) -> None:
        self._session = answer(self._session, label)

    def undo(self) -> None:
        self._session = undo(self._session)

    def result(self) -> dict:
        return {"version": "1", **self._session.to_dict()}


def _remote_guideline_names(base_url: str) -> list[str]:
    import httpx

    response = httpx.get(base_url.rstrip("/") + "/guidelines", timeout=30.0)
    if response.status_code >= 400:
        raise ValidationError(f"service returned {response.status_code} for /guidelines")
    return [g["name"] for g in response.json()["guidelines"]]


class _RemoteWalk:
    """Drive a session through a running service; the CLI holds no tree state."""

    def __init__(self, base_url: str, tree_name: str):
        import httpx

        self._client = httpx.Client(base_url=base_url.rstrip("/"), timeout=30.0)
        self._state = self._unwrap(self._client.post("/sessions", json={"tree": tree_name}))

    @staticmethod
    def _unwrap(response) -> dict:
        if response.status_code >= 400:
            detail = response.json().get("detail")
            raise ValidationError(f"service returned {response.status_code}: {detail}")
        return response.json()

    @property
    def is_terminal(self) -> bool:
        return "verdict" in self._state

    @property
    def prompt(self) -> str:
        return self._state["node"]["prompt"]

    @property
    def labels(self) -> list[str]:
        return list(self._state["node"]["labels"])

    @property
    def is_xor(self) -> bool:
        return self._state["node"]["kind"] == "xor"

    def answer(self, label: str) -> None:
        self._state = self._unwrap(
            self._client.post(f"/sessions/{self._state['id']}/answer", json={"label": label})
        )

    def undo(self) -> None:
        self._state = self._unwrap(self._client.post(f"/sessions/{self._state['id']}/undo"))

    def result(self) -> dict:
        payload = {
            "version": "1",
            "tree": self._state["tree"],
            "path": self._state["path"],
            "provisional": self._state["provisional"],
        }
        if "verdict" in self._state:
            payload["verdict"] = self._state["verdict"]
        return payload


def _pick_tree_name(names: list[str], name: str | None, interactive: bool) -> str:
    if name is not None:
        if name in names:
            return name
        raise ValidationError(f"unknown guideline {name!r}; available: {names}")
    if len(names) == 1:
        return names[0]
    if not interactive:
        raise ValidationError(f"several guidelines available; pass --tree, one of {names}")
    print("Guidelines:")
    for i, candidate in enumerate(names, 1):
        print(f"  {i}. {candidate}")
    while True:
        raw = input(f"pick one [1-{len(names)}]: ").strip()
        if raw.isdigit() and 1 <= int(raw) <= len(names):
            return names[int(raw) - 1]
        print("not a valid choice")


def _interactive_loop(driver) -> None:
    while not driver.is_terminal:
        print(f"\n{driver.prompt}")
        labels = driver.labels
        for i, label in enumerate(labels, 1):
            print(f"  {i}. {label}")
        hint = "exactly one applies; " if driver.is_xor else ""
        raw = input(f"answer ({hint}number or label, 'undo', 'quit'): ").strip()
        if raw == "quit":
            return
        try:
            if raw == "undo":
                driver.undo()
            elif raw.isdigit() and 1 <= int(raw) <= len(labels):
                driver.answer(labels[int(raw) - 1])
            else:
                driver.answer(raw)
        except EthicsTriageError as exc:
            print(f"  {exc}")


def _cmd_walk(args: argparse.Namespace) -> int:
    scripted = bool(args.answer)
    if args.server:
        names = _remote_guideline_names(args.server)
        tree_name = _pick_tree_name(names, args.tree, interactive=not scripted)
        driver = _RemoteWalk(args.server, tree_name)
    else:
        trees = load_guideline_file(args.guideline)
        tree_name = _pick_tree_name(
            [t.name for t in trees], args.tree, interactive=not scripted
        )
        driver = _LocalWalk(next(t for t in trees if t.name == tree_name))

    if scripted:
        for label in args.answer:
            driver.answer(label)
    else:
        _interactive_loop(driver)
    result = driver.result()
    if not scripted and "verdict" in result:
        verdict = result["verdict"]
        print(f"\nverdict: {verdict['kind']}" + (f" - {verdict['rationale']}" if verdict["rationale"] else ""))
        if result["provisional"]:
            print("provisional: a condition on the path is not decidable yet (treat as TBD)")
    print(json.dumps(result, indent=2))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    trees = load_guideline_file(args.guideline)
    app = create_app(trees, ttl_seconds=args.ttl)
    addr = args.addr or os.environ.get("ETHICS_TRIAGE_ADDR", DEFAULT_ADDR)
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValidationError(f"address must look like host:port, got {addr!r}")
    uvicorn.run(app, host=host, port=int(port))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ethics-triage",
        description="Corpus screening pipeline and decision-tree ethics-guideline tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("ingest", help="tokenize a manifest corpus into bag-of-words form")
    p.add_argument("--manifest", required=True, help="JSON manifest of documents")
    p.add_argument("--out", required=True, help="prepared corpus JSON to write")
    p.add_argument("--stopwords", default=None, help="stopword file (default: shipped list)")
    p.add_argument("--max-ngram", type=int, default=5)
    p.add_argument("--min-token-length", type=int, default=1)
    p.add_argument("--min-doc-freq", type=int, default=2)
    p.add_argument("--body-only", action="store_true", help="exclude title/abstract from the text")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("train", help="train the topic model on a prepared corpus")
    p.add_argument("--corpus", required=True, help="prepared corpus JSON from ingest")
    p.add_argument("--out", required=True, help="model JSON to write")
    p.add_argument("--topics", type=int, default=50)
    p.add_argument("--alpha", type=float, default=None, help="default: 1/topics")
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("topics", help="print the top words of each topic")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True, help="prepared corpus JSON (for the vocabulary)")
    p.add_argument("--top", type=int, default=30)
    p.add_argument("--topic", type=int, default=None, help="single topic id (default: all)")
    p.set_defaults(handler=_cmd_topics)

    p = sub.add_parser("screen", help="flag gray-area and ethics-mentioning documents")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="flags CSV to write")
    p.set_defaults(handler=_cmd_screen)

    p = sub.add_parser("classify", help="assign screened documents to topics and categories")
    p.add_argument("--corpus", required=True, help="prepared corpus JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--categories", required=True, help="category map JSON")
    p.add_argument("--flags", default=None, help="flags CSV; restricts to gray/ethics union")
    p.add_argument("--threshold", type=float, default=0.1, help="secondary topic threshold")
    p.add_argument("--out", required=True, help="assignments CSV to write")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("counts", help="tabulate documents per category")
    p.add_argument("--assignments", required=True, help="assignments CSV from classify")
    p.add_argument("--out", default=None, help="also write the JSON table here")
    p.set_defaults(handler=_cmd_counts)

    p = sub.add_parser("lint", help="check a guideline file")
    p.add_argument("path", nargs="?", default=None, help="guideline file (default: shipped)")
    p.add_argument("--max-depth", type=int, default=50)
    p.set_defaults(handler=_cmd_lint)

    p = sub.add_parser("walk", help="walk a guideline tree interactively or by script")
    p.add_argument("--guideline", default=None, help="guideline file (default: shipped)")
    p.add_argument("--tree", default=None, help="guideline name inside the file")
    p.add_argument(
        "--answer",
        action="append",
        default=None,
        metavar="LABEL",
        help="scripted answer; repeat per step (disables the interactive prompt)",
    )
    p.add_argument("--server", default=None, help="walk against a running service URL")
    p.set_defaults(handler=_cmd_walk)

    p = sub.add_parser("serve", help="run the guideline walkthrough HTTP service")
    p.add_argument("--guideline", default=None, help="guideline file (default: shipped)")
    p.add_argument(
        "--addr",
        default=None,
        help=f"host:port (default: $ETHICS_TRIAGE_ADDR or {DEFAULT_ADDR})",
    )
    p.add_argument("--ttl", type=float, default=24 * 60 * 60, help="session TTL in seconds")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (EthicsTriageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
