import json

import pytest
from fastapi.testclient import TestClient

from fesras.service import create_app
from fesras.storage import Session, SessionStore, atomic_write_json
from tests.conftest import walkthrough_form


@pytest.fixture()
def data_dir(tmp_path, us1_technique, us2_technique, answer_key):
    techniques = tmp_path / "techniques"
    techniques.mkdir()
    us1_technique.save(techniques / "US1.technique.json")
    us2_technique.save(techniques / "US2.technique.json")
    answer_key.save(tmp_path / "key.json")
    return tmp_path


@pytest.fixture()
def client(data_dir):
    app = create_app(data_dir)
    with TestClient(app) as test_client:
        yield test_client


def create_session(client, technique_id="US1") -> str:
    response = client.post("/api/sessions", json={"technique_id": technique_id})
    assert response.status_code == 201
    return response.json()["session_id"]


def submit_form(client, session_id, form_dict, version, draft=False):
    return client.post(
        f"/api/sessions/{session_id}/report",
        json={"form": form_dict, "version": version, "draft": draft},
    )


class TestSessionLifecycle:
    def test_technique_listing(self, client):
        entries = client.get("/api/techniques").json()
        assert [e["technique_id"] for e in entries] == ["US1", "US2"]
        assert entries[0]["properties"] == ["C"]

    def test_create_returns_created_state(self, client):
        session_id = create_session(client)
        view = client.get(f"/api/sessions/{session_id}").json()
        assert view["state"] == "Created"
        assert view["started_at"] is None
        assert view["technique"]["story"]["id"] == "US1"

    def test_unknown_technique_404(self, client):
        response = client.post("/api/sessions", json={"technique_id": "US9"})
        assert response.status_code == 404
        assert response.json()["code"] == "not-found"

    def test_unknown_session_404(self, client):
        assert client.get("/api/sessions/nope").status_code == 404

    def test_start_sets_timestamp_and_empty_form(self, client):
        session_id = create_session(client)
        view = client.post(f"/api/sessions/{session_id}/start").json()
        assert view["state"] == "InProgress"
        assert view["started_at"] is not None
        assert len(view["form"]["rows"]) == 5

    def test_double_start_is_invalid_state(self, client):
        session_id = create_session(client)
        client.post(f"/api/sessions/{session_id}/start")
        response = client.post(f"/api/sessions/{session_id}/start")
        assert response.status_code == 409
        assert response.json()["code"] == "invalid-state"

    def test_submit_before_start_is_invalid_state(self, client):
        session_id = create_session(client)
        response = submit_form(client, session_id, walkthrough_form().to_dict(), 0)
        assert response.status_code == 409
        assert response.json()["code"] == "invalid-state"

    def test_full_review_flow_scores_six(self, client):
        session_id = create_session(client)
        started = client.post(f"/api/sessions/{session_id}/start").json()
        response = submit_form(
            client, session_id, walkthrough_form().to_dict(), started["version"]
        )
        assert response.status_code == 200
        assert response.json()["state"] == "Submitted"

        scored = client.get(
            f"/api/sessions/{session_id}/score", params={"key": "key.json"}
        )
        assert scored.status_code == 200
        body = scored.json()
        assert body["true_positives"] == 6
        assert body["total_seeded"] == 13

    def test_draft_saves_do_not_submit(self, client):
        session_id = create_session(client)
        started = client.post(f"/api/sessions/{session_id}/start").json()
        draft = walkthrough_form().to_dict()
        response = submit_form(client, session_id, draft, started["version"], draft=True)
        assert response.status_code == 200
        body = response.json()
        assert body["state"] == "InProgress"
        assert body["form"]["rows"][1]["om"] is True

    def test_version_conflict(self, client):
        session_id = create_session(client)
        client.post(f"/api/sessions/{session_id}/start")
        response = submit_form(client, session_id, walkthrough_form().to_dict(), 99)
        assert response.status_code == 409
        assert response.json()["code"] == "version-conflict"

    def test_validation_failure_carries_findings(self, client):
        session_id = create_session(client)
        started = client.post(f"/api/sessions/{session_id}/start").json()
        bad = walkthrough_form().to_dict()
        bad["rows"][0]["am"] = ["SS9"]
        response = submit_form(client, session_id, bad, started["version"])
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "validation-failed"
        assert body["findings"][0]["code"] == "DanglingSpecId"
        # session is still in progress with its previous form intact
        view = client.get(f"/api/sessions/{session_id}").json()
        assert view["state"] == "InProgress"

    def test_submitted_session_is_immutable(self, client):
        session_id = create_session(client)
        started = client.post(f"/api/sessions/{session_id}/start").json()
        submit_form(client, session_id, walkthrough_form().to_dict(), started["version"])
        view = client.get(f"/api/sessions/{session_id}").json()
        response = submit_form(
            client, session_id, walkthrough_form().to_dict(), view["version"]
        )
        assert response.status_code == 409

    def test_score_requires_submission(self, client):
        session_id = create_session(client)
        response = client.get(
            f"/api/sessions/{session_id}/score", params={"key": "key.json"}
        )
        assert response.status_code == 409

    def test_score_missing_key_404(self, client):
        session_id = create_session(client)
        started = client.post(f"/api/sessions/{session_id}/start").json()
        submit_form(client, session_id, walkthrough_form().to_dict(), started["version"])
        response = client.get(
            f"/api/sessions/{session_id}/score", params={"key": "missing.json"}
        )
        assert response.status_code == 404


class TestPersistence:
    def test_sessions_survive_restart(self, data_dir, us1_technique):
        app = create_app(data_dir)
        with TestClient(app) as client:
            session_id = create_session(client)
            started = client.post(f"/api/sessions/{session_id}/start").json()
            submit_form(
                client, session_id, walkthrough_form().to_dict(), started["version"]
            )

        restarted = create_app(data_dir)
        with TestClient(restarted) as client:
            view = client.get(f"/api/sessions/{session_id}")
            assert view.status_code == 200
            assert view.json()["state"] == "Submitted"
            assert view.json()["form"]["rows"][1]["om"] is True

    def test_atomic_write_keeps_old_content_until_rename(self, tmp_path):
        target = tmp_path / "session.json"
        atomic_write_json(target, {"state": "old"})
        # a crash before rename leaves only a temp file; the target is intact
        leftover = target.parent / (target.name + ".crashed.tmp")
        leftover.write_text(json.dumps({"state": "new"}))
        assert json.loads(target.read_text()) == {"state": "old"}
        atomic_write_json(target, {"state": "new"})
        assert json.loads(target.read_text()) == {"state": "new"}

    def test_store_roundtrip(self, tmp_path, us1_technique):
        store = SessionStore(tmp_path)
        session = Session.create(us1_technique)
        session.start()
        store.save(session)
        loaded = store.load(session.session_id)
        assert loaded.session_id == session.session_id
        assert loaded.state == "InProgress"
        assert loaded.technique == us1_technique
        assert store.list_ids() == [session.session_id]

    def test_no_partial_writes_on_disk(self, tmp_path, us1_technique):
        store = SessionStore(tmp_path)
        session = Session.create(us1_technique)
        store.save(session)
        files = list(store.sessions_dir.iterdir())
        assert [f.name for f in files] == [f"{session.session_id}.json"]
