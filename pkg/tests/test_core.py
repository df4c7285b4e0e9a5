import pytest
from hypothesis import given
from hypothesis import strategies as st

from visagent.config import AgentConfig
from visagent.errors import ConfigError, MissingAssessment, MissingField
from visagent.memory import IterationRecord, Session, select_context
from visagent.params import ParamVector
from visagent.perception.assessment import Assessment
from visagent.prompts import render_role_prompt
from visagent.responses import ParsedResponse, format_agent_response, parse_agent_response


def config(**kw):
    defaults = dict(
        scenario="assist the user in volume rendering",
        task="opacity transfer function design",
        goal_template="render the circle of willis",
        approach="adjusting the opacity transfer function window",
        constraints=("keep the triangle shape", "change only start and end"),
    )
    defaults.update(kw)
    return AgentConfig(**defaults)


class TestConfig:
    def test_rejects_zero_iterations(self):
        with pytest.raises(ConfigError):
            config(max_iterations=0)

    def test_rejects_empty_constraint(self):
        with pytest.raises(ConfigError):
            config(constraints=("ok", "  "))

    def test_rejects_unknown_planner_params(self):
        with pytest.raises(ConfigError):
            config(planner_kind="heuristic_tf", planner_params={"bogus": 1})

    def test_planner_params_subset_ok(self):
        c = config(planner_kind="heuristic_tf", planner_params={"bins": 10, "speed_reduction": 0.5})
        assert c.planner_params["bins"] == 10

    def test_round_trip(self):
        c = config()
        assert AgentConfig.from_dict(c.to_dict()) == c


class TestRolePrompt:
    def test_contains_all_pieces_and_no_braces(self):
        prompt = render_role_prompt(config())
        assert "You are an autonomous visualization agent" in prompt
        assert "opacity transfer function design" in prompt
        assert "render the circle of willis" in prompt
        assert "keep the triangle shape" in prompt
        assert "change only start and end" in prompt
        assert "{" not in prompt and "}" not in prompt

    def test_each_constraint_appears_exactly_once(self):
        prompt = render_role_prompt(config())
        assert prompt.count("keep the triangle shape") == 1
        assert prompt.count("change only start and end") == 1

    def test_empty_constraints_omits_clause(self):
        prompt = render_role_prompt(config(constraints=()))
        assert "constraint" not in prompt.lower()

    def test_goal_placeholder_binding(self):
        c = config(goal_template="render the {structure}")
        prompt = render_role_prompt(c, {"structure": "inner sphere"})
        assert "render the inner sphere" in prompt

    def test_unbound_placeholder_raises(self):
        c = config(goal_template="render the {undefined_key}")
        with pytest.raises(MissingField) as err:
            render_role_prompt(c)
        assert err.value.name == "undefined_key"

    def test_deterministic(self):
        assert render_role_prompt(config()) == render_role_prompt(config())


class TestParseResponse:
    def test_full_response(self):
        text = (
            "REASONING: background peak\n"
            "PLAN: try higher range\n"
            "ASSESSMENT: not recognizable\n"
            'PARAMS: {"start": 80, "end": 105}'
        )
        parsed = parse_agent_response(text)
        assert parsed.reasoning == "background peak"
        assert parsed.plan == "try higher range"
        assert parsed.assessment_label == "not recognizable"
        assert parsed.proposed_params == {"start": 80, "end": 105}

    def test_minimal_response(self):
        parsed = parse_agent_response("ASSESSMENT: clear")
        assert parsed.reasoning == "" and parsed.plan == ""
        assert parsed.proposed_params is None

    def test_missing_assessment(self):
        with pytest.raises(MissingAssessment):
            parse_agent_response("PLAN: keep going")

    def test_case_insensitive_any_order(self):
        text = "params: start=80, end=105\nassessment: Recognizable\nreasoning: later section"
        parsed = parse_agent_response(text)
        assert parsed.assessment_label == "Recognizable"
        assert parsed.proposed_params == {"start": 80, "end": 105}
        assert parsed.reasoning == "later section"

    def test_multiline_sections(self):
        text = "REASONING: line one\nline two\nASSESSMENT: clear"
        parsed = parse_agent_response(text)
        assert parsed.reasoning == "line one\nline two"

    def test_formatter_round_trip_fixture(self):
        parsed = ParsedResponse(
            reasoning="saw the shell", plan="shift right", assessment_label="recognizable",
            proposed_params={"start": 25.5, "end": 51.0},
        )
        assert parse_agent_response(format_agent_response(parsed)) == parsed

    @given(
        reasoning=st.text(alphabet=st.characters(blacklist_characters="\n{}", blacklist_categories=("Cs",)), max_size=60),
        plan=st.text(alphabet=st.characters(blacklist_characters="\n{}", blacklist_categories=("Cs",)), max_size=60),
        label=st.text(alphabet="abcdefghijklmnopqrstuvwxyz ", min_size=1, max_size=20),
        value=st.floats(allow_nan=False, allow_infinity=False, width=32),
    )
    def test_formatter_round_trip_property(self, reasoning, plan, label, value):
        label = label.strip() or "clear"
        parsed = ParsedResponse(
            reasoning=reasoning.strip(), plan=plan.strip(), assessment_label=label,
            proposed_params={"x": value},
        )
        assert parse_agent_response(format_agent_response(parsed)) == parsed


def record(step, assessment):
    return IterationRecord(
        step=step,
        params=ParamVector({"start": float(step)}),
        image_ref=f"ref{step}",
        reasoning="",
        plan="",
        assessment=assessment,
    )


class TestSelectContext:
    def session(self, assessments):
        s = Session(id="s", goal="g", config=config())
        s.records = [record(i, a) for i, a in enumerate(assessments)]
        return s

    def test_three_record_hand_enumerated_case(self):
        # by hand: last 2 of [not, rec, not] are records 1 and 2; best is the
        # recognizable one at step 1, already included; ascending order
        s = self.session([Assessment.not_recognizable(), Assessment.recognizable(), Assessment.not_recognizable()])
        bundle = select_context(s, 2)
        assert [r.step for r in bundle] == [1, 2]

    def test_best_outside_window_is_added(self):
        s = self.session(
            [Assessment.clear(), Assessment.not_recognizable(), Assessment.not_recognizable(),
             Assessment.not_recognizable()]
        )
        bundle = select_context(s, 2)
        assert [r.step for r in bundle] == [0, 2, 3]

    def test_empty_session(self):
        assert select_context(self.session([]), 5) == []

    def test_k_larger_than_session_no_duplicates(self):
        s = self.session([Assessment.recognizable(), Assessment.clear()])
        bundle = select_context(s, 10)
        assert [r.step for r in bundle] == [0, 1]

    def test_tie_breaks_to_lowest_step(self):
        s = self.session([Assessment.recognizable(), Assessment.recognizable(), Assessment.not_recognizable()])
        bundle = select_context(s, 1)
        assert [r.step for r in bundle] == [0, 2]


class TestSessionPersistence:
    def test_round_trip(self, tmp_path):
        from visagent.memory import SessionStore

        store = SessionStore(tmp_path)
        s = Session(id="abc", goal="g", config=config())
        s.records = [record(0, Assessment.clear())]
        s.status = "done_success"
        s.final_params = ParamVector({"start": 0.0})
        store.save(s)
        loaded = store.load("abc")
        assert loaded.to_dict() == s.to_dict()

    def test_image_store_content_addressed(self, tmp_path):
        from visagent.memory import SessionStore

        store = SessionStore(tmp_path)
        ref1 = store.store_image(b"\x89PNG fake")
        ref2 = store.store_image(b"\x89PNG fake")
        assert ref1 == ref2
        assert store.load_image(ref1) == b"\x89PNG fake"

    def test_recover_interrupted(self, tmp_path):
        from visagent.memory import SessionStore

        store = SessionStore(tmp_path)
        s = Session(id="run1", goal="g", config=config())
        store.save(s)
        repaired = store.recover_interrupted()
        assert repaired == ["run1"]
        assert store.load("run1").status == "failed"
        assert store.load("run1").failure_reason == "interrupted"

    def test_validate_rejects_gap_in_steps(self):
        s = Session(id="s", goal="g", config=config())
        s.records = [record(0, Assessment.clear()), record(2, Assessment.clear())]
        with pytest.raises(ConfigError):
            s.validate()
