import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from ethics_triage.errors import ValidationError
from ethics_triage.guideline import (
    Condition,
    GuidelineTree,
    Leaf,
    Question,
    Verdict,
    VerdictKind,
    answer,
    load_guideline_file,
    report,
    start_session,
)
from ethics_triage.service import create_app

from conftest import enumerate_scripts


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def create(client, tree):
    response = client.post("/sessions", json={"tree": tree})
    assert response.status_code == 200, response.text
    return response.json()


class TestGuidelinesEndpoint:
    def test_lists_names_and_subclasses(self, client):
        payload = client.get("/guidelines").json()
        assert payload["version"] == "1"
        names = [g["name"] for g in payload["guidelines"]]
        assert names == [
            "Software Examination",
            "Privacy",
            "Autonomy",
            "Human and Animal Subjects Testing",
            "General Rules",
        ]
        assert payload["guidelines"][2]["subclasses"] == [
            "Web scraping",
            "Accessing others' systems",
        ]


class TestSessionLifecycle:
    def test_create_exposes_root_question(self, client):
        state = create(client, "Privacy")
        assert state["version"] == "1"
        assert state["tree"] == "Privacy"
        assert state["path"] == []
        assert state["provisional"] is False
        assert state["node"]["kind"] == "question"
        assert "verdict" not in state

    def test_create_unknown_tree_404(self, client):
        response = client.post("/sessions", json={"tree": "Nope"})
        assert response.status_code == 404
        assert "Nope" in str(response.json()["detail"])

    def test_single_leaf_tree_terminal_immediately(self):
        tree = GuidelineTree(
            name="One", root=Leaf(verdict=Verdict(kind=VerdictKind.PERMITS, rationale="ok"))
        )
        local_client = TestClient(create_app(trees=[tree]))
        state = create(local_client, "One")
        assert state["verdict"] == {"kind": "PERMITS", "rationale": "ok", "citations": []}
        assert "node" not in state

    def test_answer_and_state(self, client):
        state = create(client, "Software Examination")
        sid = state["id"]
        response = client.post(f"/sessions/{sid}/answer", json={"label": "Disclosure"})
        assert response.status_code == 200
        state = response.json()
        assert state["path"] == [
            {"prompt": "Which activity is under consideration?", "answer": "Disclosure"}
        ]
        assert client.get(f"/sessions/{sid}").json() == state

    def test_invalid_label_422_lists_valid(self, client):
        sid = create(client, "Privacy")["id"]
        response = client.post(f"/sessions/{sid}/answer", json={"label": "nonsense"})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["valid_labels"] == [
            "Collecting Data",
            "Handling Data",
            "Publishing Data",
            "Transferring Data To Third Parties",
        ]

    def test_malformed_body_400(self, client):
        sid = create(client, "Privacy")["id"]
        assert client.post(f"/sessions/{sid}/answer", json={"wrong": "x"}).status_code == 400
        assert client.post("/sessions", json={}).status_code == 400

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/deadbeef").status_code == 404
        assert client.post("/sessions/deadbeef/answer", json={"label": "x"}).status_code == 404
        assert client.post("/sessions/deadbeef/undo").status_code == 404
        assert client.get("/sessions/deadbeef/report").status_code == 404

    def test_undo_steps_back(self, client):
        initial = create(client, "Privacy")
        sid = initial["id"]
        client.post(f"/sessions/{sid}/answer", json={"label": "Collecting Data"})
        state = client.post(f"/sessions/{sid}/undo").json()
        assert state["path"] == []
        assert state["node"] == initial["node"]

    def test_undo_fresh_session_409(self, client):
        sid = create(client, "Privacy")["id"]
        assert client.post(f"/sessions/{sid}/undo").status_code == 409

    def test_answer_terminal_session_409(self, client):
        sid = create(client, "Privacy")["id"]
        client.post(f"/sessions/{sid}/answer", json={"label": "Collecting Data"})
        client.post(f"/sessions/{sid}/answer", json={"label": "yes"})
        response = client.post(f"/sessions/{sid}/answer", json={"label": "yes"})
        assert response.status_code == 409


class TestReports:
    def test_single_session_report(self, client):
        sid = create(client, "Privacy")["id"]
        client.post(f"/sessions/{sid}/answer", json={"label": "Collecting Data"})
        client.post(f"/sessions/{sid}/answer", json={"label": "no"})
        payload = client.get(f"/sessions/{sid}/report").json()
        assert payload["overall"] == "PROHIBITS"
        assert payload["outcomes"][0]["tree"] == "Privacy"
        assert len(payload["outcomes"][0]["transcript"]) == 2

    def test_report_on_non_terminal_409(self, client):
        sid = create(client, "Privacy")["id"]
        assert client.get(f"/sessions/{sid}/report").status_code == 409

    def test_aggregated_report(self, client):
        first = create(client, "Privacy")["id"]
        client.post(f"/sessions/{first}/answer", json={"label": "Collecting Data"})
        client.post(f"/sessions/{first}/answer", json={"label": "yes"})  # DEMANDS
        second = create(client, "Software Examination")["id"]
        client.post(f"/sessions/{second}/answer", json={"label": "Vulnerability Research"})
        client.post(f"/sessions/{second}/answer", json={"label": "yes"})  # PERMITS
        payload = client.post("/reports", json={"ids": [first, second]}).json()
        assert payload["overall"] == "DEMANDS"
        assert len(payload["obligations"]) == 1
        assert [o["tree"] for o in payload["outcomes"]] == ["Privacy", "Software Examination"]


class TestDualPathEquivalence:
    def test_http_walk_equals_library_walk_on_every_script(self, client):
        # Every enumerable script over every shipped tree: verdicts,
        # transcripts, and provisional flags must match the direct engine.
        for tree in load_guideline_file():
            for script, _ in enumerate_scripts(tree):
                session = start_session(tree)
                sid = create(client, tree.name)["id"]
                state = None
                for label in script:
                    session = answer(session, label)
                    response = client.post(f"/sessions/{sid}/answer", json={"label": label})
                    assert response.status_code == 200
                    state = response.json()
                expected = session.to_dict()
                assert state["verdict"] == expected["verdict"]
                assert state["path"] == expected["path"]
                assert state["provisional"] == expected["provisional"]
                http_report = client.get(f"/sessions/{sid}/report").json()
                lib_report = report([session]).to_dict()
                assert http_report["overall"] == lib_report["overall"]
                assert http_report["outcomes"][0]["transcript"] == lib_report["outcomes"][0]["transcript"]


class TestStoreBehavior:
    def test_sessions_expire(self):
        local_client = TestClient(create_app(ttl_seconds=0.05))
        sid = create(local_client, "Privacy")["id"]
        time.sleep(0.2)
        assert local_client.get(f"/sessions/{sid}").status_code == 404

    def test_lint_errors_refuse_startup(self):
        tree = GuidelineTree(
            name="Bad",
            root=Question(
                prompt="p",
                branches=(
                    ("dup", Leaf(verdict=Verdict(kind=VerdictKind.TBD))),
                    ("dup", Leaf(verdict=Verdict(kind=VerdictKind.TBD))),
                ),
            ),
        )
        with pytest.raises(ValidationError, match="lint"):
            create_app(trees=[tree])

    def test_duplicate_tree_names_refused(self):
        tree = GuidelineTree(name="Same", root=Leaf(verdict=Verdict(kind=VerdictKind.TBD)))
        with pytest.raises(ValidationError, match="duplicate"):
            create_app(trees=[tree, tree])

    def test_concurrent_answers_one_session_never_tear(self):
        # A deep chain lets many answers land on one session concurrently.
        node = Leaf(verdict=Verdict(kind=VerdictKind.PERMITS))
        for i in range(40):
            node = Question(prompt=f"level {i}", branches=(("next", node),))
        local_client = TestClient(create_app(trees=[GuidelineTree(name="Chain", root=node)]))
        sid = create(local_client, "Chain")["id"]

        def hit(_):
            response = local_client.post(f"/sessions/{sid}/answer", json={"label": "next"})
            assert response.status_code in (200, 409, 422)
            return response.status_code

        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(hit, range(30)))
        state = local_client.get(f"/sessions/{sid}").json()
        # state is replayable: path length equals answered steps, all "next"
        assert len(state["path"]) <= 40
        assert all(step["answer"] == "next" for step in state["path"])
        assert state["path"] == [
            {"prompt": f"level {39 - i}", "answer": "next"} for i in range(len(state["path"]))
        ]

    def test_distinct_sessions_do_not_interfere(self, client):
        first = create(client, "Privacy")["id"]
        second = create(client, "Privacy")["id"]

        def drive(sid_label):
            sid, label = sid_label
            return client.post(f"/sessions/{sid}/answer", json={"label": label}).status_code

        jobs = [(first, "Collecting Data"), (second, "Handling Data")] * 1
        with ThreadPoolExecutor(max_workers=2) as pool:
            assert list(pool.map(drive, jobs)) == [200, 200]
        assert client.get(f"/sessions/{first}").json()["path"][0]["answer"] == "Collecting Data"
        assert client.get(f"/sessions/{second}").json()["path"][0]["answer"] == "Handling Data"

    def test_provisional_condition_over_http(self, client):
        tree = GuidelineTree(
            name="Prov", root=Condition(note="n", child=Leaf(verdict=Verdict(kind=VerdictKind.PERMITS)))
        )
        local_client = TestClient(create_app(trees=[tree]))
        state = create(local_client, "Prov")
        assert state["provisional"] is True
        payload = local_client.get(f"/sessions/{state['id']}/report").json()
        assert payload["overall"] == "TBD"
