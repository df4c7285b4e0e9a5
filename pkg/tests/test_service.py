import json
import threading
import time

import pytest
import requests

from visagent.config import AgentConfig
from visagent.memory import Session, SessionStore
from visagent.service import serve_app
from visagent.toolproto import MockDrTool, serve_tool


def tf_config_dict(**kw):
    d = dict(
        scenario="volume rendering assistance",
        task="opacity transfer function design",
        goal_template="render the target structure",
        approach="shifting a fixed-width opacity window",
        planner_kind="heuristic_tf",
        perception_kind="oracle",
        max_iterations=12,
        perception_params={"target": "target"},
    )
    d.update(kw)
    return d


def llm_config_dict(**kw):
    d = dict(
        scenario="dimensionality reduction tuning",
        task="embedding hyperparameter tuning",
        goal_template="separate the clusters",
        approach="proposing new hyperparameters",
        planner_kind="llm_centric",
        perception_kind="llm",
        max_iterations=400,
    )
    d.update(kw)
    return d


class SlowDrTool:
    """Mock DR tool with a render delay and a render log."""

    def __init__(self, delay=0.05):
        self.inner = MockDrTool()
        self.delay = delay
        self.renders = []

    def describe(self):
        return self.inner.describe()

    def render(self, params):
        time.sleep(self.delay)
        self.renders.append(dict(params))
        return self.inner.render(params)


class SSEReader:
    """Background reader collecting parsed SSE events."""

    def __init__(self, url):
        self.events = []
        self.closed = threading.Event()
        self._resp = requests.get(url, stream=True, timeout=30)
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def _run(self):
        event = {}
        try:
            # chunk_size=1 so small live events are not stuck in a buffer
            for raw in self._resp.iter_lines(chunk_size=1, decode_unicode=True):
                if raw is None:
                    continue
                if raw == "":
                    if event:
                        self.events.append(event)
                        event = {}
                    continue
                if raw.startswith("id:"):
                    event["seq"] = int(raw[3:].strip())
                elif raw.startswith("event:"):
                    event["event"] = raw[6:].strip()
                elif raw.startswith("data:"):
                    event["data"] = json.loads(raw[5:].strip())
        except requests.RequestException:
            pass
        finally:
            self.closed.set()

    def wait_for(self, predicate, timeout=20.0):
        deadline = time.time() + timeout
        while time.time() < deadline:
            if predicate(list(self.events)):
                return list(self.events)
            time.sleep(0.02)
        raise AssertionError(f"timed out; events so far: {self.events}")

    def close(self):
        self._resp.close()


@pytest.fixture()
def service(tmp_path):
    with serve_app(tmp_path / "data") as handle:
        yield handle


def create(handle, body):
    return requests.post(handle.url + "/sessions", json=body, timeout=30)


def control(handle, sid, command):
    return requests.post(handle.url + f"/sessions/{sid}/control", json=command, timeout=30)


class TestCreate:
    def test_volume_tf_session_end_to_end(self, service):
        resp = create(service, {
            "config": tf_config_dict(),
            "goal": "render the target structure",
            "tool": {"builtin": "phantom", "band": [100.0, 125.0], "dims": [24, 24, 24], "image_size": [48, 48]},
        })
        assert resp.status_code == 201
        sid = resp.json()["id"]
        reader = SSEReader(service.url + f"/sessions/{sid}/events")
        events = reader.wait_for(lambda ev: any(e["event"] == "record" for e in ev))
        first_record = next(e for e in events if e["event"] == "record")
        assert first_record["data"]["step"] == 0
        reader.wait_for(lambda ev: any(e["event"] == "status" and e["data"]["status"] == "done_success" for e in ev))
        assert reader.closed.wait(timeout=10)
        # session persisted with ordered steps and the image is fetchable
        session = requests.get(service.url + f"/sessions/{sid}", timeout=10).json()
        steps = [r["step"] for r in session["records"]]
        assert steps == list(range(len(steps)))
        image = requests.get(service.url + "/images/" + session["records"][0]["image_ref"], timeout=10)
        assert image.status_code == 200 and image.content.startswith(b"\x89PNG")

    def test_invalid_config_422(self, service):
        resp = create(service, {
            "config": tf_config_dict(max_iterations=0),
            "goal": "g",
            "tool": {"builtin": "phantom"},
        })
        assert resp.status_code == 422

    def test_dead_tool_502_and_nothing_stored(self, service):
        resp = create(service, {
            "config": tf_config_dict(),
            "goal": "g",
            "tool": {"endpoint": "http://127.0.0.1:9"},
        })
        assert resp.status_code == 502
        assert requests.get(service.url + "/sessions", timeout=10).json()["sessions"] == []

    def test_unknown_session_404(self, service):
        assert requests.get(service.url + "/sessions/deadbeef/events", timeout=10).status_code == 404
        assert control(service, "deadbeef", {"kind": "pause"}).status_code == 404


class TestEvents:
    def test_late_subscriber_replays_then_lives(self, service):
        tool = SlowDrTool(delay=0.12)
        with serve_tool(tool) as tool_handle:
            resp = create(service, {
                "config": llm_config_dict(),
                "goal": "g",
                "tool": {"endpoint": tool_handle.url},
                "perception": "stub:bounce",
            })
            sid = resp.json()["id"]
            early = SSEReader(service.url + f"/sessions/{sid}/events")
            early.wait_for(lambda ev: sum(1 for e in ev if e["event"] == "record") >= 3)

            late = SSEReader(service.url + f"/sessions/{sid}/events")
            late.wait_for(lambda ev: sum(1 for e in ev if e["event"] == "record") >= 3)
            # replayed records are the same ordered prefix both readers saw
            early_records = [e["data"]["step"] for e in early.events if e["event"] == "record"]
            late_records = [e["data"]["step"] for e in late.events if e["event"] == "record"]
            shared = min(len(early_records), len(late_records), 3)
            assert late_records[:shared] == early_records[:shared] == list(range(shared))

            control(service, sid, {"kind": "abort"})
            early.wait_for(lambda ev: any(e["event"] == "status" and e["data"]["status"] == "failed" for e in ev))
            assert early.closed.wait(timeout=10)
            assert late.closed.wait(timeout=10)
            # no duplicate sequence numbers on a single subscription
            seqs = [e["seq"] for e in late.events]
            assert len(seqs) == len(set(seqs))
            assert seqs == sorted(seqs)

    def test_completed_session_full_replay_then_close(self, service):
        resp = create(service, {
            "config": tf_config_dict(),
            "goal": "g",
            "tool": {"builtin": "phantom", "dims": [20, 20, 20], "image_size": [32, 32]},
        })
        sid = resp.json()["id"]
        service.manager.wait(sid, timeout=60)
        reader = SSEReader(service.url + f"/sessions/{sid}/events")
        assert reader.closed.wait(timeout=10)
        kinds = [e["event"] for e in reader.events]
        assert kinds.count("record") >= 1
        assert reader.events[-1]["event"] == "status"
        assert reader.events[-1]["data"]["status"] == "done_success"


class TestControl:
    def start_slow_session(self, service, tool):
        with serve_tool(tool) as tool_handle:
            resp = create(service, {
                "config": llm_config_dict(),
                "goal": "g",
                "tool": {"endpoint": tool_handle.url},
                "perception": "stub:bounce",
            })
            sid = resp.json()["id"]
            yield sid

    def test_pause_resume_zero_renders_between_acks(self, service):
        tool = SlowDrTool(delay=0.03)
        with serve_tool(tool) as tool_handle:
            resp = create(service, {
                "config": llm_config_dict(),
                "goal": "g",
                "tool": {"endpoint": tool_handle.url},
                "perception": "stub:bounce",
            })
            sid = resp.json()["id"]
            reader = SSEReader(service.url + f"/sessions/{sid}/events")
            reader.wait_for(lambda ev: sum(1 for e in ev if e["event"] == "record") >= 2)

            pause_ack = control(service, sid, {"kind": "pause"})
            assert pause_ack.status_code == 200 and pause_ack.json()["status"] == "paused"
            count_at_pause = len(tool.renders)
            time.sleep(0.4)  # worker must stay parked
            count_before_resume = len(tool.renders)
            assert count_before_resume == count_at_pause

            resume_ack = control(service, sid, {"kind": "resume"})
            assert resume_ack.status_code == 200 and resume_ack.json()["status"] == "running"
            reader.wait_for(lambda ev: sum(1 for e in ev if e["event"] == "record") > count_at_pause)
            control(service, sid, {"kind": "abort"})
            assert reader.closed.wait(timeout=10)

    def test_override_only_while_paused(self, service):
        tool = SlowDrTool(delay=0.03)
        with serve_tool(tool) as tool_handle:
            resp = create(service, {
                "config": llm_config_dict(),
                "goal": "g",
                "tool": {"endpoint": tool_handle.url},
                "perception": "stub:bounce",
            })
            sid = resp.json()["id"]
            reader = SSEReader(service.url + f"/sessions/{sid}/events")
            reader.wait_for(lambda ev: any(e["event"] == "record" for e in ev))

            denied = control(service, sid, {"kind": "override_params", "params": {"perplexity": 77.0}})
            assert denied.status_code == 409

            assert control(service, sid, {"kind": "pause"}).status_code == 200
            granted = control(service, sid, {"kind": "override_params", "params": {"perplexity": 77.0}})
            assert granted.status_code == 200
            baseline = len(tool.renders)
            assert control(service, sid, {"kind": "resume"}).status_code == 200

            deadline = time.time() + 10
            while len(tool.renders) <= baseline and time.time() < deadline:
                time.sleep(0.02)
            assert tool.renders[baseline]["perplexity"] == 77.0
            # the override applies exactly once: the bouncing stub resumes control
            control(service, sid, {"kind": "abort"})
            assert reader.closed.wait(timeout=10)
            overridden = [r for r in tool.renders[baseline:] if r.get("perplexity") == 77.0]
            assert len(overridden) == 1

    def test_amend_goal_visible_in_session(self, service):
        tool = SlowDrTool(delay=0.03)
        with serve_tool(tool) as tool_handle:
            resp = create(service, {
                "config": llm_config_dict(),
                "goal": "original goal",
                "tool": {"endpoint": tool_handle.url},
                "perception": "stub:bounce",
            })
            sid = resp.json()["id"]
            reader = SSEReader(service.url + f"/sessions/{sid}/events")
            reader.wait_for(lambda ev: any(e["event"] == "record" for e in ev))
            assert control(service, sid, {"kind": "amend_goal", "goal": "sharper clusters"}).status_code == 200
            reader.wait_for(lambda ev: sum(1 for e in ev if e["event"] == "record") >= 3)
            control(service, sid, {"kind": "abort"})
            assert reader.closed.wait(timeout=10)
        session = requests.get(service.url + f"/sessions/{sid}", timeout=10).json()
        assert session["goal"] == "sharper clusters"

    def test_abort_terminal_and_stream_closes(self, service):
        tool = SlowDrTool(delay=0.03)
        with serve_tool(tool) as tool_handle:
            resp = create(service, {
                "config": llm_config_dict(),
                "goal": "g",
                "tool": {"endpoint": tool_handle.url},
                "perception": "stub:bounce",
            })
            sid = resp.json()["id"]
            reader = SSEReader(service.url + f"/sessions/{sid}/events")
            reader.wait_for(lambda ev: any(e["event"] == "record" for e in ev))
            ack = control(service, sid, {"kind": "abort"})
            assert ack.status_code == 200 and ack.json()["status"] == "failed"
            assert reader.closed.wait(timeout=10)
            assert reader.events[-1]["data"]["status"] == "failed"
        session = requests.get(service.url + f"/sessions/{sid}", timeout=10).json()
        assert session["status"] == "failed"
        assert session["failure_reason"] == "aborted"
        # further control is rejected
        assert control(service, sid, {"kind": "pause"}).status_code == 409


class TestRestartRecovery:
    def test_interrupted_running_session_marked_failed(self, tmp_path):
        data = tmp_path / "data"
        store = SessionStore(data)
        stale = Session(id="aabbccddeeff", goal="g", config=AgentConfig.from_dict(tf_config_dict()))
        store.save(stale)
        with serve_app(data) as handle:
            session = requests.get(handle.url + "/sessions/aabbccddeeff", timeout=10).json()
            assert session["status"] == "failed"
            assert session["failure_reason"] == "interrupted"
            # recovered sessions are replayable read-only
            reader = SSEReader(handle.url + "/sessions/aabbccddeeff/events")
            assert reader.closed.wait(timeout=10)
            assert reader.events[-1]["data"]["status"] == "failed"
