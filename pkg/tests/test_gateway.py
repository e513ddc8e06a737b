"""HTTP gateway and CLI surfaces over a shared fixture store."""

import json
import threading

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from vocpersona.cli import main as cli_main
from vocpersona.config import ServiceConfig, load_config
from vocpersona.corpus import export_jsonl
from vocpersona.engine import Engine
from vocpersona.errors import (
    BadConfig,
    Busy,
    UnknownCorpus,
    UnknownPersona,
    UnknownSession,
)
from vocpersona.fixtures import fixture_corpus
from vocpersona.service import create_app


@pytest.fixture(scope="module")
def store(tmp_path_factory):
    """Engine with the fixture corpus ingested and derived."""
    data_dir = tmp_path_factory.mktemp("gateway-data")
    engine = Engine(ServiceConfig(data_dir=data_dir))
    engine.ingest(export_jsonl(fixture_corpus()), "fixture")
    personas = engine.derive("fixture")
    return engine, personas


@pytest.fixture()
def client(store):
    engine, _ = store
    return TestClient(create_app(engine))


class TestCorpora:
    def test_ingest_raw_jsonl_body(self, client):
        lines = "\n".join(list(export_jsonl(fixture_corpus()))[:10])
        reply = client.post("/v1/corpora?corpus_id=raw10", content=lines,
                            headers={"Content-Type": "application/x-ndjson"})
        assert reply.status_code == 200
        body = reply.json()
        assert body["corpus_id"] == "raw10"
        assert body["message_count"] == 10

    def test_ingest_path_reference(self, client, tmp_path):
        feed = tmp_path / "feed.jsonl"
        feed.write_text("\n".join(list(export_jsonl(fixture_corpus()))[:5]) + "\n")
        reply = client.post("/v1/corpora", json={
            "path": str(feed), "corpus_id": "path5",
            "collection_methods": ["api export"],
        })
        assert reply.status_code == 200
        assert reply.json()["message_count"] == 5

    def test_derive_endpoint(self, client):
        reply = client.post("/v1/corpora/fixture/personas:derive")
        assert reply.status_code == 200
        personas = reply.json()["personas"]
        assert len(personas) == 3
        for persona in personas:
            assert set(persona) == {
                "persona_id", "name", "cluster_ids", "summary_terms",
                "user_count", "message_count", "coverage", "gaps",
            }

    def test_derive_unknown_corpus(self, client):
        reply = client.post("/v1/corpora/nope/personas:derive")
        assert reply.status_code == 404
        assert reply.json()["code"] == "unknown_corpus"


class TestPersonas:
    def test_list_and_get(self, client, store):
        _, personas = store
        listed = client.get("/v1/personas").json()["personas"]
        assert {p["persona_id"] for p in listed} >= \
            {p.persona_id for p in personas}
        one = client.get(f"/v1/personas/{personas[0].persona_id}")
        assert one.status_code == 200
        assert one.json()["persona_id"] == personas[0].persona_id

    def test_unknown_persona_code(self, client):
        reply = client.get("/v1/personas/ghost")
        assert reply.status_code == 404
        assert reply.json()["code"] == "unknown_persona"

    def test_provenance_json_and_markdown(self, client, store):
        _, personas = store
        pid = personas[0].persona_id
        as_json = client.get(f"/v1/personas/{pid}/provenance?format=json")
        assert as_json.status_code == 200
        card = as_json.json()
        assert set(card) == {"persona_id", "data_provenance",
                             "model_specifications", "segment_metrics",
                             "topic_coverage", "generated_at"}
        as_md = client.get(f"/v1/personas/{pid}/provenance?format=markdown")
        assert as_md.status_code == 200
        assert as_md.text.count("\n## ") == 4


class TestSessions:
    def open_session(self, client, store):
        _, personas = store
        reply = client.post("/v1/sessions", json={
            "persona_id": personas[0].persona_id, "mode": "interview",
        })
        assert reply.status_code == 200
        return reply.json()["session_id"]

    def test_message_round_trip(self, client, store):
        session_id = self.open_session(client, store)
        reply = client.post(f"/v1/sessions/{session_id}/messages",
                            json={"text": "Does the battery drain fast?"})
        assert reply.status_code == 200
        turn = reply.json()
        assert turn["response"]["kind"] == "answered"
        assert turn["bundle"]["ids_scores"]
        for claim in turn["response"]["claims"]:
            assert claim["citations"]

    def test_malformed_body(self, client, store):
        session_id = self.open_session(client, store)
        reply = client.post(f"/v1/sessions/{session_id}/messages",
                            json={"wrong_field": 1})
        assert reply.status_code == 400
        body = reply.json()
        assert body["code"] == "bad_request"
        assert any(f["field"].endswith("text") for f in body["fields"])

    def test_unknown_session(self, client):
        reply = client.post("/v1/sessions/snope/messages", json={"text": "hey"})
        assert reply.status_code == 404
        assert reply.json()["code"] == "unknown_session"

    def test_busy_conflict(self, client, store):
        engine, _ = store
        session_id = self.open_session(client, store)
        lock = engine._turn_lock(session_id)
        assert lock.acquire()
        try:
            reply = client.post(f"/v1/sessions/{session_id}/messages",
                                json={"text": "Does the battery drain fast?"})
            assert reply.status_code == 409
            assert reply.json()["code"] == "busy"
        finally:
            lock.release()

    def test_reaction_endpoint(self, client, store):
        session_id = self.open_session(client, store)
        reply = client.post(f"/v1/sessions/{session_id}/reactions", json={
            "stimulus": {
                "kind": "feature_idea",
                "title": "bigger battery",
                "content": "We ship a bigger battery. Was your warranty claim denied?",
            },
        })
        assert reply.status_code == 200
        report = reply.json()
        assert len(report["facets"]) == 2
        assert report["facets"][1]["stance"] == "no_evidence"

    def test_invalid_stimulus_kind(self, client, store):
        session_id = self.open_session(client, store)
        reply = client.post(f"/v1/sessions/{session_id}/reactions", json={
            "stimulus": {"kind": "sonnet", "title": "", "content": "some text"},
        })
        assert reply.status_code == 400

    def test_summary_endpoint(self, client, store):
        session_id = self.open_session(client, store)
        client.post(f"/v1/sessions/{session_id}/messages",
                    json={"text": "Does the battery drain fast?"})
        reply = client.get(f"/v1/sessions/{session_id}/summary")
        assert reply.status_code == 200
        summary = reply.json()
        assert summary["session_id"] == session_id
        assert summary["turns"][0]["kind"] == "answered"
        assert summary["sources"]

    def test_artifact_lookup(self, client):
        reply = client.get("/v1/artifacts/fx0000")
        assert reply.status_code == 200
        assert reply.json()["id"] == "fx0000"
        missing = client.get("/v1/artifacts/zz404")
        assert missing.status_code == 404
        assert missing.json()["code"] == "unknown_artifact"


class TestEngineGuards:
    def test_busy_from_engine(self, store):
        engine, personas = store
        session = engine.open_session(personas[0].persona_id)
        lock = engine._turn_lock(session.session_id)
        results = []

        def blocked():
            try:
                engine.message(session.session_id, "Does the battery drain fast?")
            except Busy:
                results.append("busy")

        with lock:
            thread = threading.Thread(target=blocked)
            thread.start()
            thread.join()
        assert results == ["busy"]

    def test_unknown_lookups(self, store):
        engine, _ = store
        with pytest.raises(UnknownCorpus):
            engine.corpus("missing")
        with pytest.raises(UnknownSession):
            engine.session("missing")

    def test_content_hash_corpus_id(self, store, tmp_path):
        engine = Engine(ServiceConfig(data_dir=tmp_path / "hash-data"))
        lines = list(export_jsonl(fixture_corpus()))[:3]
        first, _ = engine.ingest(lines)
        second_engine = Engine(ServiceConfig(data_dir=tmp_path / "hash-data2"))
        second, _ = second_engine.ingest(lines)
        assert first.corpus_id == second.corpus_id
        assert first.corpus_id.startswith("c")

    def test_open_session_examples(self, store):
        engine, personas = store
        session = engine.open_session(personas[0].persona_id)
        assert session.turns == []
        another = engine.open_session(personas[0].persona_id)
        assert another.session_id != session.session_id
        with pytest.raises(UnknownPersona):
            engine.open_session("ghost")

    def test_restart_restores_catalog_and_sessions(self, tmp_path):
        data_dir = tmp_path / "restart-data"
        engine = Engine(ServiceConfig(data_dir=data_dir))
        engine.ingest(export_jsonl(fixture_corpus()), "fixture")
        personas = engine.derive("fixture")
        session = engine.open_session(personas[0].persona_id)
        turn = engine.message(session.session_id, "Does the battery drain fast?")
        summary_before = engine.summary(session.session_id).to_record()

        reborn = Engine(ServiceConfig(data_dir=data_dir))
        assert reborn.corpus("fixture").message_count == 298
        assert [p.persona_id for p in reborn.personas()] == \
            [p.persona_id for p in personas]
        restored = reborn.session(session.session_id)
        assert len(restored.turns) == 1
        assert restored.turns[0].response.kind == turn.response.kind
        assert reborn.summary(session.session_id).to_record() == summary_before
        # New turns continue the index sequence.
        follow_up = reborn.message(session.session_id,
                                   "Is the battery draining overnight?")
        assert follow_up.turn_index == 1

    def test_index_sealed_after_build(self, store):
        engine, _ = store
        index = engine.ensure_index("fixture")
        with pytest.raises((ValueError, RuntimeError)):
            index._matrix[0, 0] = 99.0


class TestConfig:
    def test_defaults_valid(self):
        config = ServiceConfig()
        assert config.validate() is config

    def test_bad_thresholds(self, tmp_path):
        with pytest.raises(BadConfig):
            ServiceConfig(data_dir=tmp_path, tau_cluster=1.5).validate()
        with pytest.raises(BadConfig):
            ServiceConfig(data_dir=tmp_path, n_min=0).validate()
        with pytest.raises(BadConfig):
            ServiceConfig(data_dir=tmp_path, backend="external").validate()

    def test_precedence_flags_env_file(self, tmp_path):
        config_file = tmp_path / "vocp.json"
        config_file.write_text(json.dumps({"k": 4, "n_min": 2, "tau_ground": 0.6}))
        env = {"VOCP_K": "6", "VOCP_N_MIN": "5"}
        config = load_config({"n_min": 7}, env=env, config_file=config_file)
        assert config.tau_ground == 0.6   # file layer
        assert config.k == 6              # env beats file
        assert config.n_min == 7          # flag beats env

    def test_unknown_file_key_rejected(self, tmp_path):
        config_file = tmp_path / "vocp.json"
        config_file.write_text(json.dumps({"mystery": 1}))
        with pytest.raises(BadConfig):
            load_config(config_file=config_file)


class TestCli:
    def run(self, tmp_path, *args, stdin=None):
        runner = CliRunner()
        return runner.invoke(
            cli_main, ["--data-dir", str(tmp_path / "cli-data"), *args],
            input=stdin, catch_exceptions=False,
        )

    @pytest.fixture()
    def feed(self, tmp_path):
        path = tmp_path / "feed.jsonl"
        path.write_text("\n".join(export_jsonl(fixture_corpus())) + "\n")
        return path

    def test_ingest_missing_file(self, tmp_path):
        result = self.run(tmp_path, "ingest", str(tmp_path / "missing.jsonl"))
        assert result.exit_code != 0
        assert "file not found" in result.output

    def test_ingest_derive_card(self, tmp_path, feed):
        result = self.run(tmp_path, "ingest", str(feed), "--corpus-id", "fx")
        assert result.exit_code == 0, result.output
        assert "fx" in result.output
        derived = self.run(tmp_path, "derive", "fx")
        assert derived.exit_code == 0
        persona_id = derived.output.split()[0]
        card = self.run(tmp_path, "card", persona_id, "--format", "md")
        assert card.exit_code == 0
        assert card.output.count("## ") == 4

    def test_card_figures(self, tmp_path, feed):
        self.run(tmp_path, "ingest", str(feed), "--corpus-id", "fx")
        derived = self.run(tmp_path, "derive", "fx")
        persona_id = derived.output.split()[0]
        figures_dir = tmp_path / "figs"
        result = self.run(tmp_path, "card", persona_id,
                          "--figures-dir", str(figures_dir))
        assert result.exit_code == 0
        names = {p.name for p in figures_dir.iterdir()}
        assert f"{persona_id}-coverage.csv" in names
        assert f"{persona_id}-coverage.png" in names
        assert f"{persona_id}-volume.png" in names
        csv_text = (figures_dir / f"{persona_id}-coverage.csv").read_text()
        assert csv_text.splitlines()[0] == "label,count,is_gap"

    def test_interview_scripted(self, tmp_path, feed):
        self.run(tmp_path, "ingest", str(feed), "--corpus-id", "fx")
        derived = self.run(tmp_path, "derive", "fx")
        persona_id = derived.output.split()[0]
        script = "Does the battery drain fast?\nWas your warranty claim denied?\n"
        result = self.run(tmp_path, "interview", persona_id, stdin=script)
        assert result.exit_code == 0, result.output
        assert "From my experience:" in result.output
        assert "[abstained]" in result.output
        transcripts = list((tmp_path / "cli-data" / "sessions").glob("*.jsonl"))
        assert len(transcripts) == 1
        records = [json.loads(line)
                   for line in transcripts[0].read_text().splitlines()]
        assert [r["turn_index"] for r in records] == [0, 1]

    def test_react_command(self, tmp_path, feed):
        self.run(tmp_path, "ingest", str(feed), "--corpus-id", "fx")
        derived = self.run(tmp_path, "derive", "fx")
        persona_id = derived.output.split()[0]
        stimulus = tmp_path / "stimulus.json"
        stimulus.write_text(json.dumps({
            "kind": "feature_idea", "title": "power pack",
            "content": "The battery drains fast. Was your warranty claim denied?",
        }))
        result = self.run(tmp_path, "react", persona_id, str(stimulus))
        assert result.exit_code == 0, result.output
        assert "no_evidence" in result.output

    def test_audit_clean_and_mutated(self, tmp_path, feed):
        self.run(tmp_path, "ingest", str(feed), "--corpus-id", "fx")
        derived = self.run(tmp_path, "derive", "fx")
        persona_id = derived.output.split()[0]
        script = "Does the battery drain fast?\n"
        self.run(tmp_path, "interview", persona_id, stdin=script)
        transcript = next((tmp_path / "cli-data" / "sessions").glob("*.jsonl"))

        clean = self.run(tmp_path, "audit", str(transcript))
        assert clean.exit_code == 0
        assert "pass" in clean.output

        # Inject one ungrounded claim citing a real bundle id, with its
        # near-zero overlap pre-verified against that exact artifact.
        import random

        from conftest import make_ungrounded_claim

        records = [json.loads(line)
                   for line in transcript.read_text().splitlines()]
        engine = Engine(ServiceConfig(data_dir=tmp_path / "cli-data"))
        corpus = engine.corpus("fx")
        cited = records[0]["bundle"]["ids_scores"][0][0]
        nonsense = make_ungrounded_claim(corpus.artifact_by_id(cited),
                                         random.Random(31))
        records[0]["response"]["claims"].append({
            "text": nonsense, "citations": [cited], "support_score": 0.9,
        })
        mutated = tmp_path / "mutated.jsonl"
        mutated.write_text("\n".join(json.dumps(r) for r in records) + "\n")
        result = self.run(tmp_path, "audit", str(mutated), "--corpus-id", "fx")
        assert result.exit_code != 0
        assert "ungrounded" in result.output

    def test_export_round_trip(self, tmp_path, feed):
        self.run(tmp_path, "ingest", str(feed), "--corpus-id", "fx")
        result = self.run(tmp_path, "export", "fx")
        assert result.exit_code == 0
        assert result.output.strip() == feed.read_text().strip()

    def test_unknown_corpus_diagnostic(self, tmp_path):
        result = self.run(tmp_path, "derive", "ghost")
        assert result.exit_code != 0
        assert "unknown_corpus" in result.output


class TestServe:
    def test_real_socket_round_trip(self, store):
        import urllib.request

        import uvicorn

        engine, personas = store
        config = uvicorn.Config(create_app(engine), host="127.0.0.1", port=0,
                                log_level="error")
        server = uvicorn.Server(config)
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        for _ in range(200):
            if server.started:
                break
            threading.Event().wait(0.05)
        assert server.started
        port = server.servers[0].sockets[0].getsockname()[1]
        try:
            with urllib.request.urlopen(
                    f"http://127.0.0.1:{port}/v1/personas", timeout=5) as reply:
                payload = json.loads(reply.read())
            assert {p["persona_id"] for p in payload["personas"]} >= \
                {p.persona_id for p in personas}
        finally:
            server.should_exit = True
            thread.join(timeout=5)
