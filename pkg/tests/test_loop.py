import pytest

from visagent.charts.scatter import PointSet
from visagent.config import AgentConfig
from visagent.errors import PerceptionError, ToolUnreachable
from visagent.loop import InMemoryStore, PerceptionOutput, run_loop
from visagent.memory import STATUS_DONE_BUDGET, STATUS_DONE_SUCCESS, STATUS_FAILED
from visagent.params import ParamVector
from visagent.perception.adapters import OverplotComparisonPerception, VolumeOraclePerception
from visagent.perception.assessment import Assessment
from visagent.perception.oracle import oracle_assess_volume
from visagent.perception.stubs import ScriptedPerception
from visagent.planners import HalvingPlanner, HalvingState, TfSearchPlanner, TfSearchState, build_planner
from visagent.planners.steps import PlannerStep
from visagent.toolproto import RemoteTool, ScatterTool, VolumeTool


def tf_config(**kw):
    defaults = dict(
        scenario="volume rendering assistance",
        task="opacity transfer function design",
        goal_template="render the target structure",
        approach="shifting a fixed-width opacity window",
        planner_kind="heuristic_tf",
        perception_kind="oracle",
        max_iterations=12,
    )
    defaults.update(kw)
    return AgentConfig(**defaults)


class CountingTool:
    def __init__(self, inner):
        self.inner = inner
        self.renders = 0

    def describe(self):
        return self.inner.describe()

    def render(self, params):
        self.renders += 1
        return self.inner.render(params)


def fixed_clock():
    ticks = iter(range(0, 10_000, 7))
    return lambda: next(ticks)


class TestTfLoop:
    def hand_simulated_trajectory(self, tool, target="target"):
        """Independent Algorithm-1 walk: drive render+oracle directly."""
        from visagent.perception.adapters import structure_stats_from

        descriptor = tool.describe()
        lo, hi = descriptor.metadata["value_range"]
        width = (hi - lo) / 10.0
        start = lo
        fine = False
        trajectory = []
        for _ in range(12):
            params = ParamVector({"start": start, "end": start + width})
            _, stats = tool.render(params)
            verdict = oracle_assess_volume(structure_stats_from(stats), target)
            trajectory.append((params, verdict.kind))
            if verdict.kind == "clear":
                return trajectory, "done"
            shift = width if verdict.kind == "not_recognizable" else width * 0.5
            start = start + shift
            if start > hi - width + 1e-9:
                return trajectory, "failed"
        return trajectory, "budget"

    def test_loop_matches_hand_simulation(self, phantom_100_125):
        from visagent.volren.camera import default_camera

        tool = VolumeTool(volume=phantom_100_125, camera=default_camera(phantom_100_125.extent, (64, 64)))
        expected, outcome = self.hand_simulated_trajectory(tool)
        assert outcome == "done"

        planner = build_planner(tf_config(), tool.describe())
        session = run_loop(tf_config(), "render the target structure", tool,
                           VolumeOraclePerception(target="target"), planner)
        assert session.status == STATUS_DONE_SUCCESS
        got = [(r.params, r.assessment.kind) for r in session.records]
        assert got == expected
        # final window equals the clear window and overlaps the band
        final = session.final_params
        assert final == expected[-1][0]
        assert float(final["start"]) < 125.0 and float(final["end"]) > 100.0

    def test_final_params_equal_last_rendered(self, phantom_100_125):
        from visagent.volren.camera import default_camera

        tool = VolumeTool(volume=phantom_100_125, camera=default_camera(phantom_100_125.extent, (64, 64)))
        planner = build_planner(tf_config(), tool.describe())
        session = run_loop(tf_config(), "g", tool, VolumeOraclePerception(target="target"), planner)
        assert session.final_params == session.records[-1].params

    def test_budget_exhaustion_single_record(self, phantom_100_125):
        tool = VolumeTool(volume=phantom_100_125)

        class NeverDone:
            def initial_params(self):
                return ParamVector({"start": 0.0, "end": 25.5})

            def observe(self, output, ctx):
                return PlannerStep.next(ParamVector({"start": 0.0, "end": 25.5}))

        session = run_loop(tf_config(max_iterations=1), "g", tool,
                           VolumeOraclePerception(target="target"), NeverDone())
        assert session.status == STATUS_DONE_BUDGET
        assert len(session.records) == 1

    def test_unreachable_tool(self):
        tool = RemoteTool("http://127.0.0.1:9")  # discard port, nothing listens
        planner = TfSearchPlanner(TfSearchState(min_val=0.0, max_val=255.0))
        with pytest.raises(ToolUnreachable):
            run_loop(tf_config(), "g", tool, VolumeOraclePerception(target="target"), planner)

    def test_render_calls_equal_record_count(self, phantom_100_125):
        tool = CountingTool(VolumeTool(volume=phantom_100_125))
        planner = build_planner(tf_config(), tool.describe())
        session = run_loop(tf_config(), "g", tool, VolumeOraclePerception(target="target"), planner)
        assert tool.renders == len(session.records)

    def test_deterministic_sessions_byte_identical(self, phantom_100_125):
        from visagent.volren.camera import default_camera

        def run_once():
            store = InMemoryStore()
            tool = VolumeTool(volume=phantom_100_125, camera=default_camera(phantom_100_125.extent, (48, 48)))
            planner = build_planner(tf_config(), tool.describe())
            session = run_loop(tf_config(), "g", tool, VolumeOraclePerception(target="target"), planner,
                               store=store, session_id="fixed", clock=fixed_clock())
            return session, store

        s1, store1 = run_once()
        s2, store2 = run_once()
        assert s1.to_json() == s2.to_json()
        assert sorted(store1.images) == sorted(store2.images)
        for ref in store1.images:
            assert store1.images[ref] == store2.images[ref]

    def test_swept_range_fails(self, phantom_100_125):
        # target band far above every window the oracle will accept
        tool = VolumeTool(volume=phantom_100_125)

        class AlwaysNot:
            def assess(self, view, ctx):
                return PerceptionOutput(assessment=Assessment.not_recognizable())

        planner = build_planner(tf_config(max_iterations=20), tool.describe())
        session = run_loop(tf_config(max_iterations=20), "g", tool, AlwaysNot(), planner)
        assert session.status == STATUS_FAILED
        assert "swept" in session.failure_reason
        assert len(session.records) == 10  # one verdict per bin


class TestHalvingLoop:
    def fixture_tool(self, k=8):
        pts = tuple([(0.5, 0.5)] * k + [(0.1, 0.9)])
        return ScatterTool(points=PointSet(pts))

    def halving_config(self, **kw):
        defaults = dict(
            scenario="scatterplot opacity tuning",
            task="scatterplot opacity selection",
            goal_template="mitigate overplotting",
            approach="comparing candidate opacities pairwise",
            planner_kind="halving_opacity",
            perception_kind="oracle",
            max_iterations=10,
            stop_threshold=0.05,
        )
        defaults.update(kw)
        return AgentConfig(**defaults)

    def test_halving_trajectory_hand_computed(self):
        # k=8 stack + isolated point: candidates 0.5, 0.25, 0.125 win, then
        # 0.0625 and 0.09375 are too low; Done at opacity 0.125 (worked out
        # from the over-operator closed form and the oracle thresholds)
        tool = self.fixture_tool(k=8)
        config = self.halving_config()
        planner = build_planner(config, tool.describe())
        session = run_loop(config, "g", tool, OverplotComparisonPerception(), planner)
        assert session.status == STATUS_DONE_SUCCESS
        rendered = [round(float(r.params["opacity"]), 6) for r in session.records]
        assert rendered == [1.0, 0.5, 0.25, 0.125, 0.0625, 0.09375]
        assert float(session.final_params["opacity"]) == pytest.approx(0.125)

    def test_final_coverage_in_band(self):
        k = 8
        tool = self.fixture_tool(k=k)
        config = self.halving_config()
        planner = build_planner(config, tool.describe())
        session = run_loop(config, "g", tool, OverplotComparisonPerception(), planner)
        o = float(session.final_params["opacity"])
        stack_coverage = 1.0 - (1.0 - o) ** k
        assert 1.0 - (1.0 - 0.1) ** k - 1e-9 <= stack_coverage <= 0.98 + 1e-9

    def test_bracket_halves_exactly(self):
        tool = self.fixture_tool()
        config = self.halving_config()
        state = HalvingState(opacity=1.0, floor=0.0, threshold=0.05)
        planner = HalvingPlanner(state)
        run_loop(config, "g", tool, OverplotComparisonPerception(), planner)
        # five comparisons: bracket sequence is dyadic down to 1/32
        assert planner.state.bracket == 0.03125


class TestScriptedLoop:
    def test_perception_error_after_retries(self, phantom_100_125):
        tool = VolumeTool(volume=phantom_100_125)

        class Broken:
            calls = 0

            def assess(self, view, ctx):
                Broken.calls += 1
                raise PerceptionError("flaky")

        config = tf_config(perception_params={"retries": 2})
        planner = build_planner(config, tool.describe())
        with pytest.raises(PerceptionError):
            run_loop(config, "g", tool, Broken(), planner)
        assert Broken.calls == 3

    def test_llm_perception_full_path_and_token_accounting(self, phantom_100_125):
        from chat_stub import ChatStub
        from visagent.perception.adapters import LlmPerception
        from visagent.perception.llm import ChatClient

        tool = VolumeTool(volume=phantom_100_125)
        config = tf_config(planner_kind="llm_centric", perception_kind="llm", max_iterations=4)
        script = [
            (200, 'REASONING: first peak is background\nPLAN: probe above\nASSESSMENT: not recognizable\nPARAMS: {"start": 80, "end": 105}'),
            (200, 'REASONING: shell appears\nPLAN: nudge\nASSESSMENT: recognizable\nPARAMS: {"start": 100, "end": 125}'),
            (200, "REASONING: isolated\nPLAN: stop\nASSESSMENT: clear"),
        ]
        with ChatStub(script) as stub:
            client = ChatClient(base_url=stub.url, api_key="k", model="m", sleep=lambda s: None)
            perception = LlmPerception(client=client, context_window=2)
            planner = build_planner(config, tool.describe())
            session = run_loop(config, "render the target structure", tool, perception, planner)
            # role prompt and context crossed the wire on every call
            assert len(stub.requests) == 3
            system_text = stub.requests[0]["body"]["messages"][0]["content"]
            assert "You are an autonomous visualization agent" in system_text
            user_content = stub.requests[-1]["body"]["messages"][1]["content"]
            assert any(part["type"] == "image_url" for part in user_content)
            assert "Step 0" in user_content[0]["text"]
        assert session.status == STATUS_DONE_SUCCESS
        # token usage from the chat client is persisted on the session
        assert session.token_usage["requests"] == 3
        assert session.token_usage["prompt_tokens"] == 42 * 3
        assert "token_usage" in session.to_dict()

    def test_scripted_llm_centric_session(self, phantom_100_125):
        tool = VolumeTool(volume=phantom_100_125)
        config = tf_config(planner_kind="llm_centric", perception_kind="llm", max_iterations=5)
        perception = ScriptedPerception(
            responses=[
                'REASONING: first peak is background\nPLAN: probe above it\nASSESSMENT: not recognizable\nPARAMS: {"start": 80, "end": 105}',
                'REASONING: shell visible\nPLAN: go higher\nASSESSMENT: recognizable\nPARAMS: {"start": 100, "end": 125}',
                "REASONING: structure isolated\nPLAN: stop\nASSESSMENT: clear",
            ]
        )
        planner = build_planner(config, tool.describe())
        session = run_loop(config, "g", tool, perception, planner)
        assert session.status == STATUS_DONE_SUCCESS
        assert [r.assessment.kind for r in session.records] == ["not_recognizable", "recognizable", "clear"]
        assert dict(session.final_params) == {"start": 100.0, "end": 125.0}
        assert session.final_params == session.records[-1].params
