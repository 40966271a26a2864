"""HTTP session service for live games.

Hosts any number of concurrent matches; each seat is a human (addressed by an
unguessable token) or a named AI policy that moves automatically whenever the
phase hands it the turn. All mutations go through the engine; the server never
edits game state directly, and every payload that leaves the process is
redacted for the receiving seat, so hidden information stays server-side.

Endpoints (JSON bodies, UTF-8):

    POST /sessions                      create a game, returns seat tokens
    GET  /catalog                       the server's default catalog
    GET  /sessions/{id}/catalog         the catalog a session actually uses
    GET  /sessions/{id}/view            PlayerView for the X-Seat-Token seat
    POST /sessions/{id}/actions         submit an action for that seat
    GET  /sessions/{id}/events?since=K  redacted events with seq > K;
                                        long-polls up to `wait` seconds

Errors are {"error": {"code", "message"}}. Event sequence numbers are
strictly increasing per session.
"""

from __future__ import annotations

import json
import mimetypes
import re
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import agents, engine
from .actions import ActionDecodeError, BlueSetup, BuyDefense, action_from_wire
from .agents import BLUE_POLICY_IDS, RED_POLICY_IDS, PolicyDescriptor
from .catalog import CatalogError, ScenarioCatalog, load_catalog
from .engine import BLUE, FINISHED, RED, RED_SETUP, GameConfig, GameState
from .rng import GameRng
from .views import player_view, redact_events

MAX_LONG_POLL_SECONDS = 25.0

_RED_SALT = 0x52454400
_BLUE_SALT = 0x424C5545


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


@dataclass
class Seat:
    team: str
    kind: str  # "human" | "policy"
    token: str | None = None
    policy: PolicyDescriptor | None = None
    rng: GameRng | None = None


@dataclass
class Session:
    session_id: str
    catalog: ScenarioCatalog
    state: GameState
    seats: dict  # team -> Seat
    lock: threading.RLock = field(default_factory=threading.RLock)
    new_events: threading.Condition = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.new_events = threading.Condition(self.lock)


class SessionStore:
    """All live sessions plus the server's default catalog."""

    def __init__(self, catalog: ScenarioCatalog, snapshot_dir: str | None = None) -> None:
        self.catalog = catalog
        self.snapshot_dir = snapshot_dir
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- creation ---------------------------------------------------------

    def create_session(self, payload: dict) -> dict:
        if not isinstance(payload, dict):
            raise ApiError(400, "bad-request", "request body must be a JSON object")
        unknown = set(payload) - {"seats", "config", "seed", "catalog"}
        if unknown:
            raise ApiError(400, "bad-request", f"unknown field(s): {sorted(unknown)}")

        catalog = self.catalog
        if "catalog" in payload:
            try:
                catalog = load_catalog(payload["catalog"])
            except CatalogError as exc:
                raise ApiError(400, "invalid-catalog", str(exc))

        config_obj = payload.get("config", {})
        if not isinstance(config_obj, dict):
            raise ApiError(400, "bad-request", "config must be an object")
        base = GameConfig().to_dict()
        unknown = set(config_obj) - set(base)
        if unknown:
            raise ApiError(400, "bad-request", f"unknown config field(s): {sorted(unknown)}")
        base.update(config_obj)
        seed = payload.get("seed")
        if seed is None:
            seed = secrets.randbits(63)
        if not isinstance(seed, int):
            raise ApiError(400, "bad-request", "seed must be an integer")
        base["seed"] = seed
        try:
            config = GameConfig.from_dict(base)
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "invalid-config", str(exc))

        seats_obj = payload.get("seats", {})
        if not isinstance(seats_obj, dict) or set(seats_obj) - {RED, BLUE}:
            raise ApiError(400, "bad-request", "seats must map red/blue to an occupant")
        seats = {
            RED: self._make_seat(RED, seats_obj.get(RED, "human"), seed),
            BLUE: self._make_seat(BLUE, seats_obj.get(BLUE, "human"), seed),
        }

        session_id = secrets.token_urlsafe(12)
        state = engine.new_game(catalog, config)
        session = Session(session_id, catalog, state, seats)
        with session.lock:
            self._advance(session)
        with self._lock:
            self._sessions[session_id] = session

        seat_info: dict = {}
        for team, seat in seats.items():
            if seat.kind == "human":
                seat_info[f"{team}_token"] = seat.token
        return {"session_id": session_id, "seats": seat_info}

    def _make_seat(self, team: str, occupant, seed: int) -> Seat:
        if occupant == "human":
            return Seat(team, "human", token=secrets.token_urlsafe(16))
        allowed = RED_POLICY_IDS if team == RED else BLUE_POLICY_IDS
        if not isinstance(occupant, str) or occupant not in allowed:
            raise ApiError(
                400,
                "unknown-policy",
                f"{team} seat must be 'human' or one of {', '.join(allowed)}",
            )
        salt = _RED_SALT if team == RED else _BLUE_SALT
        return Seat(
            team,
            "policy",
            policy=agents.descriptor(occupant),
            rng=GameRng(seed ^ salt),
        )

    # -- lookup -----------------------------------------------------------

    def session(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session {session_id!r}")
        return session

    @staticmethod
    def seat_for_token(session: Session, token: str | None) -> Seat:
        if token:
            for seat in session.seats.values():
                if seat.kind == "human" and seat.token == token:
                    return seat
        raise ApiError(403, "bad-token", "missing or unrecognized X-Seat-Token")

    # -- game progression ---------------------------------------------------

    def _advance(self, session: Session) -> None:
        """Run automatic steps: the red deal and any AI seats holding the move."""
        state = session.state
        for _ in range(state.config.rounds * 4 + 16):
            if state.phase == RED_SETUP:
                state = engine.red_setup(state)
                continue
            team = engine.to_move(state)
            if team is None:
                break
            seat = session.seats[team]
            if seat.kind != "policy":
                break
            view = player_view(state, team)
            if state.phase == engine.BLUE_SETUP:
                action = agents.decide_blue_setup(view, seat.policy, seat.rng)
            else:
                action = agents.decide_red(view, seat.policy, seat.rng)
            state, _ = engine.apply_action(state, action)
        session.state = state
        if state.phase == FINISHED:
            self._snapshot(session)

    def _snapshot(self, session: Session) -> None:
        if not self.snapshot_dir:
            return
        path = Path(self.snapshot_dir)
        path.mkdir(parents=True, exist_ok=True)
        transcript = {
            "session_id": session.session_id,
            "catalog_digest": session.catalog.digest(),
            "events": list(session.state.events),
        }
        (path / f"{session.session_id}.json").write_text(
            json.dumps(transcript, indent=2), "utf-8"
        )

    # -- request handlers -----------------------------------------------------

    def view(self, session_id: str, token: str | None) -> dict:
        session = self.session(session_id)
        with session.lock:
            seat = self.seat_for_token(session, token)
            return player_view(session.state, seat.team).to_wire()

    def submit_action(self, session_id: str, token: str | None, body) -> dict:
        session = self.session(session_id)
        with session.lock:
            seat = self.seat_for_token(session, token)
            try:
                action = action_from_wire(body)
            except ActionDecodeError as exc:
                raise ApiError(400, "bad-action", str(exc))
            actor = BLUE if isinstance(action, (BlueSetup, BuyDefense)) else RED
            if actor != seat.team:
                raise ApiError(409, "wrong-turn", f"that action belongs to the {actor} seat")
            if seat.team == RED and engine.to_move(session.state) != RED:
                raise ApiError(409, "wrong-turn", "red does not hold the move")
            since = len(session.state.events)
            try:
                state, _ = engine.apply_action(session.state, action)
            except engine.IllegalActionError as exc:
                raise ApiError(422, "illegal-action", exc.message)
            session.state = state
            self._advance(session)
            events = redact_events(session.state.events, seat.team, since)
            session.new_events.notify_all()
            return {"accepted": True, "events": events}

    def events(
        self, session_id: str, token: str | None, since: int, wait: float
    ) -> dict:
        session = self.session(session_id)
        deadline = time.monotonic() + wait
        with session.new_events:
            seat = self.seat_for_token(session, token)
            events = redact_events(session.state.events, seat.team, since)
            while not events:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                session.new_events.wait(timeout=min(remaining, 0.5))
                events = redact_events(session.state.events, seat.team, since)
        return {"events": events}


# --- HTTP layer ---------------------------------------------------------------


_ROUTES = [
    ("POST", re.compile(r"^/sessions$"), "create"),
    ("GET", re.compile(r"^/catalog$"), "catalog"),
    ("GET", re.compile(r"^/sessions/([^/]+)/catalog$"), "session_catalog"),
    ("GET", re.compile(r"^/sessions/([^/]+)/view$"), "view"),
    ("POST", re.compile(r"^/sessions/([^/]+)/actions$"), "actions"),
    ("GET", re.compile(r"^/sessions/([^/]+)/events$"), "events"),
]


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    store: SessionStore = None  # type: ignore[assignment]
    static_dir: str | None = None

    # quiet: the test suite runs hundreds of requests
    def log_message(self, fmt, *args):
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self._cors()
        self.end_headers()
        self.wfile.write(data)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type, X-Seat-Token")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")

    def _send_error(self, exc: ApiError) -> None:
        self._send_json(exc.status, {"error": {"code": exc.code, "message": exc.message}})

    def _body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            raise ApiError(400, "bad-request", "body is not valid JSON")

    def do_OPTIONS(self):  # CORS preflight
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def _dispatch(self, method: str) -> None:
        url = urlparse(self.path)
        try:
            for verb, pattern, name in _ROUTES:
                if verb != method:
                    continue
                match = pattern.match(url.path)
                if not match:
                    continue
                self._handle(name, match, url)
                return
            if method == "GET" and self.static_dir and self._serve_static(url.path):
                return
            raise ApiError(404, "not-found", f"no route for {method} {url.path}")
        except ApiError as exc:
            self._send_error(exc)
        except BrokenPipeError:
            pass

    def _handle(self, name: str, match, url) -> None:
        store = self.store
        token = self.headers.get("X-Seat-Token")
        if name == "create":
            self._send_json(200, store.create_session(self._body()))
        elif name == "catalog":
            self._send_json(200, store.catalog.to_document())
        elif name == "session_catalog":
            session = store.session(match.group(1))
            self._send_json(200, session.catalog.to_document())
        elif name == "view":
            self._send_json(200, store.view(match.group(1), token))
        elif name == "actions":
            self._send_json(200, store.submit_action(match.group(1), token, self._body()))
        elif name == "events":
            query = parse_qs(url.query)
            try:
                since = int(query.get("since", ["0"])[0])
                wait = min(float(query.get("wait", ["0"])[0]), MAX_LONG_POLL_SECONDS)
            except ValueError:
                raise ApiError(400, "bad-request", "since/wait must be numeric")
            self._send_json(200, store.events(match.group(1), token, since, wait))

    def _serve_static(self, path: str) -> bool:
        root = Path(self.static_dir).resolve()
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            return False
        data = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self._cors()
        self.end_headers()
        self.wfile.write(data)
        return True


def make_server(
    catalog: ScenarioCatalog,
    host: str = "127.0.0.1",
    port: int = 0,
    snapshot_dir: str | None = None,
    static_dir: str | None = None,
) -> ThreadingHTTPServer:
    """Build the HTTP server; `server.store` exposes the session store."""
    store = SessionStore(catalog, snapshot_dir)
    handler = type("Handler", (_Handler,), {"store": store, "static_dir": static_dir})
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    server.store = store  # type: ignore[attr-defined]
    return server


def serve(
    catalog: ScenarioCatalog,
    host: str,
    port: int,
    snapshot_dir: str | None = None,
    static_dir: str | None = None,
) -> None:
    server = make_server(catalog, host, port, snapshot_dir, static_dir)
    address = f"http://{server.server_address[0]}:{server.server_address[1]}"
    print(f"perihack session server listening on {address}", flush=True)
    if static_dir:
        print(f"serving client files from {static_dir}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
