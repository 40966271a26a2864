from __future__ import annotations

import http.client
import json
import threading
import time

import pytest

from perihack.server import make_server


class Client:
    """Thin HTTP client that records every payload it receives."""

    def __init__(self, server):
        host, port = server.server_address
        self.addr = (host, port)
        self.received: list = []

    def request(self, method, path, body=None, token=None):
        conn = http.client.HTTPConnection(*self.addr, timeout=30)
        headers = {"Content-Type": "application/json"}
        if token:
            headers["X-Seat-Token"] = token
        conn.request(method, path, json.dumps(body) if body is not None else None, headers)
        resp = conn.getresponse()
        payload = json.loads(resp.read())
        conn.close()
        self.received.append(payload)
        return resp.status, payload

    def get(self, path, token=None):
        return self.request("GET", path, token=token)

    def post(self, path, body, token=None):
        return self.request("POST", path, body, token=token)


@pytest.fixture
def server(stock):
    srv = make_server(stock, port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def _walk_strings(node, out):
    if isinstance(node, str):
        out.add(node)
    elif isinstance(node, list):
        for item in node:
            _walk_strings(item, out)
    elif isinstance(node, dict):
        for key, value in node.items():
            out.add(key)
            _walk_strings(value, out)


def strings_in(payloads) -> set:
    out: set = set()
    _walk_strings(payloads, out)
    return out


def create(client, seats, seed=42, config=None):
    body = {"seats": seats, "seed": seed}
    if config:
        body["config"] = config
    status, payload = client.post("/sessions", body)
    assert status == 200, payload
    return payload


def test_create_human_vs_ai_progresses_to_red(server):
    client = Client(server)
    created = create(client, {"red": "human", "blue": "budget-blue"})
    assert set(created["seats"]) == {"red_token"}
    token = created["seats"]["red_token"]
    status, view = client.get(f"/sessions/{created['session_id']}/view", token=token)
    assert status == 200
    # blue AI finished setup; the deal ran; red holds the choose step
    assert view["phase"] == "choose-win-condition"
    assert view["to_move"] == "red"
    assert len(view["red_hand"]) == 5
    assert len(view["legal_actions"]) == 7


def test_ai_vs_ai_runs_to_completion_at_creation(server):
    client = Client(server)
    created = create(client, {"red": "greedy-red", "blue": "budget-blue"})
    assert created["seats"] == {}
    # no token grants a view; the catalog endpoint still works
    status, _ = client.get(f"/sessions/{created['session_id']}/view")
    assert status == 403
    status, payload = client.get(f"/sessions/{created['session_id']}/catalog")
    assert status == 200 and payload["schema_version"] == 1


def test_ai_vs_ai_transcripts_are_deterministic(server, stock):
    client = Client(server)
    a = create(client, {"red": "greedy-red", "blue": "budget-blue"}, seed=77)
    b = create(client, {"red": "greedy-red", "blue": "budget-blue"}, seed=77)
    sa = server.store.session(a["session_id"]).state
    sb = server.store.session(b["session_id"]).state
    assert sa.events == sb.events
    assert sa.winner == sb.winner


def test_unknown_policy_rejected(server):
    client = Client(server)
    status, payload = client.post("/sessions", {"seats": {"red": "skynet"}})
    assert status == 400
    assert payload["error"]["code"] == "unknown-policy"


def test_unknown_session_and_bad_token(server):
    client = Client(server)
    status, payload = client.get("/sessions/nope/view", token="x")
    assert status == 404 and payload["error"]["code"] == "unknown-session"
    created = create(client, {"red": "human", "blue": "budget-blue"})
    status, payload = client.get(f"/sessions/{created['session_id']}/view", token="wrong")
    assert status == 403 and payload["error"]["code"] == "bad-token"


def test_wrong_seat_action_rejected_without_mutation(server):
    client = Client(server)
    created = create(client, {"red": "greedy-red", "blue": "human"}, config={"rounds": 2})
    token = created["seats"]["blue_token"]
    sid = created["session_id"]
    status, view = client.get(f"/sessions/{sid}/view", token=token)
    assert view["phase"] == "blue-setup" and view["to_move"] == "blue"
    status, payload = client.post(
        f"/sessions/{sid}/actions", {"type": "pass"}, token=token
    )
    assert status == 409 and payload["error"]["code"] == "wrong-turn"
    status, view2 = client.get(f"/sessions/{sid}/view", token=token)
    assert view2["phase"] == "blue-setup"


def test_illegal_action_relayed_with_engine_message(server):
    client = Client(server)
    created = create(client, {"red": "greedy-red", "blue": "human"})
    token = created["seats"]["blue_token"]
    sid = created["session_id"]
    status, payload = client.post(
        f"/sessions/{sid}/actions",
        {"type": "blue-setup", "purchases": [{"card": "ic-icmp-rules", "location": "database"}]},
        token=token,
    )
    assert status == 422
    assert payload["error"]["code"] == "illegal-action"
    assert "ic-icmp-rules" in payload["error"]["message"]


def test_malformed_action_rejected(server):
    client = Client(server)
    created = create(client, {"red": "human", "blue": "budget-blue"})
    token = created["seats"]["red_token"]
    sid = created["session_id"]
    status, payload = client.post(f"/sessions/{sid}/actions", {"type": "quack"}, token=token)
    assert status == 400 and payload["error"]["code"] == "bad-action"


def test_event_sequences_strictly_increase(server):
    client = Client(server)
    created = create(client, {"red": "human", "blue": "budget-blue"})
    token = created["seats"]["red_token"]
    sid = created["session_id"]
    _, payload = client.get(f"/sessions/{sid}/events?since=0", token=token)
    seqs = [e["seq"] for e in payload["events"]]
    assert seqs == sorted(seqs) and len(set(seqs)) == len(seqs)
    _, tail = client.get(f"/sessions/{sid}/events?since={seqs[2]}", token=token)
    assert [e["seq"] for e in tail["events"]] == seqs[3:]


def test_long_poll_wakes_on_new_events(server):
    client = Client(server)
    created = create(client, {"red": "human", "blue": "budget-blue"})
    token = created["seats"]["red_token"]
    sid = created["session_id"]
    _, payload = client.get(f"/sessions/{sid}/events?since=0", token=token)
    cursor = payload["events"][-1]["seq"]

    result = {}

    def poll():
        poller = Client(server)
        t0 = time.monotonic()
        _, got = poller.get(f"/sessions/{sid}/events?since={cursor}&wait=10", token=token)
        result["events"] = got["events"]
        result["elapsed"] = time.monotonic() - t0

    thread = threading.Thread(target=poll)
    thread.start()
    time.sleep(0.3)
    client.post(
        f"/sessions/{sid}/actions",
        {"type": "choose-win-condition", "condition": "wc-ddos"},
        token=token,
    )
    thread.join(timeout=10)
    assert result["events"], "long poll returned nothing"
    assert result["elapsed"] < 5.0
    assert result["events"][0]["type"] == "win_condition_chosen"


def play_red_to_the_end(client, sid, token, max_steps=60):
    for _ in range(max_steps):
        _, view = client.get(f"/sessions/{sid}/view", token=token)
        if view["phase"] == "finished":
            return view
        acts = view["legal_actions"]
        assert acts, view["phase"]
        declare = [a for a in acts if a["type"] == "declare-win"]
        plays = [a for a in acts if a["type"] == "play-attack"]
        action = declare[0] if declare else (plays[0] if plays else {"type": "pass"})
        status, payload = client.post(f"/sessions/{sid}/actions", action, token=token)
        assert status == 200, payload
    raise AssertionError("game did not finish")


def test_full_human_red_game_and_wire_redaction(server, stock):
    client = Client(server)
    created = create(client, {"red": "human", "blue": "budget-blue"}, seed=11)
    token = created["seats"]["red_token"]
    sid = created["session_id"]

    # choose a condition, then play every round through the wire
    _, view = client.get(f"/sessions/{sid}/view", token=token)
    client.post(f"/sessions/{sid}/actions", view["legal_actions"][0], token=token)
    final_view = play_red_to_the_end(client, sid, token)
    assert final_view["winner"] in ("red", "blue")

    # wire redaction: across everything red ever received, no IC identity
    # that was never revealed may appear
    state = server.store.session(sid).state
    from perihack.views import hidden_ic_ids

    hidden = hidden_ic_ids(state)
    assert hidden, "fixture should leave some defenses unrevealed"
    seen = strings_in(client.received)
    assert not (hidden & seen), hidden & seen


def test_blue_wire_never_sees_hand_or_condition(server, stock):
    client = Client(server)
    created = create(
        client, {"red": "greedy-red", "blue": "human"}, seed=13, config={"rounds": 3}
    )
    token = created["seats"]["blue_token"]
    sid = created["session_id"]
    # watch the whole game from the blue seat
    _, view = client.get(f"/sessions/{sid}/view", token=token)
    client.post(
        f"/sessions/{sid}/actions",
        {"type": "blue-setup", "purchases": [{"card": "gc-awareness", "location": None}]},
        token=token,
    )
    cursor = 0
    for _ in range(50):
        _, view = client.get(f"/sessions/{sid}/view", token=token)
        _, evs = client.get(f"/sessions/{sid}/events?since={cursor}", token=token)
        if evs["events"]:
            cursor = evs["events"][-1]["seq"]
        if view["phase"] == "finished":
            break

    state = server.store.session(sid).state
    assert state.phase == "finished"
    # strip payloads from after the reveal (the condition is public at the end)
    cleaned = []
    for payload in client.received:
        if isinstance(payload, dict) and payload.get("phase") == "finished":
            continue
        if isinstance(payload, dict) and "events" in payload:
            payload = dict(payload)
            payload["events"] = [
                e
                for e in payload["events"]
                if e.get("type") not in ("win_declared", "game_finished")
            ]
        cleaned.append(payload)
    seen = strings_in(cleaned)
    assert state.chosen_win_condition not in seen
    for payload in cleaned:
        if isinstance(payload, dict) and payload.get("team") == "blue":
            assert payload["red_hand"] is None
            assert payload["chosen_win_condition"] is None


def test_snapshot_written_on_finish(stock, tmp_path):
    srv = make_server(stock, port=0, snapshot_dir=str(tmp_path))
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        client = Client(srv)
        created = create(client, {"red": "greedy-red", "blue": "budget-blue"}, seed=5)
        path = tmp_path / f"{created['session_id']}.json"
        assert path.exists()
        transcript = json.loads(path.read_text())
        assert transcript["events"][0]["type"] == "game_created"
        assert transcript["events"][-1]["type"] == "game_finished"
        # the snapshot replays cleanly
        from perihack.engine import replay_events

        final = replay_events(stock, transcript["events"])
        assert final.phase == "finished"
    finally:
        srv.shutdown()
        srv.server_close()


def test_inline_catalog_session(server, mini):
    client = Client(server)
    body = {
        "seats": {"red": "human", "blue": "random"},
        "seed": 3,
        "catalog": mini.to_document(),
    }
    status, created = client.post("/sessions", body)
    assert status == 200
    sid = created["session_id"]
    status, payload = client.get(f"/sessions/{sid}/catalog")
    assert {c["id"] for c in payload["attack_cards"]} == {
        "smash", "fizzle", "sneak", "follow-up", "swap"
    }
    token = created["seats"]["red_token"]
    _, view = client.get(f"/sessions/{sid}/view", token=token)
    assert view["phase"] == "choose-win-condition"
