import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheshire_mzi.dsl import (
    CircuitProgram,
    Element,
    Expr,
    Measure,
    Preselect,
    compile_and_run,
    parse,
    parse_angle,
    pretty_print,
    run_source,
)
from cheshire_mzi.errors import (
    CircuitRuntimeError,
    CircuitSyntaxError,
    DuplicatePostselect,
    DuplicatePreselect,
    MissingPostselect,
    MissingPreselect,
    UnknownObservable,
)

SNARL = "tuner theta=pi\nphase phi=0\npreselect delayed\npostselect delayed\nmeasure zR method=analytic"


class TestExpressions:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("pi", math.pi),
            ("pi/2", math.pi / 2),
            ("3*pi/4", 3 * math.pi / 4),
            ("0.25", 0.25),
            ("1e-3", 1e-3),
            ("2pi", 2 * math.pi),
            ("-pi", -math.pi),
            ("2*(pi-1)", 2 * (math.pi - 1)),
            (" 3 * pi / 4 ", 3 * math.pi / 4),
        ],
    )
    def test_exact_doubles(self, text, value):
        assert parse_angle(text) == value

    @pytest.mark.parametrize("text", ["", "pi pi", "2*", "(pi", "e", "pi/0", "1e999"])
    def test_rejects(self, text):
        with pytest.raises(CircuitSyntaxError):
            parse_angle(text)


class TestParse:
    def test_snarl_program(self):
        prog = parse(SNARL)
        assert prog.settings() == (math.pi, 0.0)
        assert prog.preselect == Preselect("delayed")
        (m,) = prog.measures
        assert (m.observable, m.method, m.line) == ("zR", "analytic", 5)

    def test_comments_blank_lines_and_crlf(self):
        src = "# header\r\n\r\nbs1   # splitter\r\n" + SNARL.replace("\n", "\r\n")
        assert parse(src) == parse("bs1\n" + SNARL)

    def test_whitespace_insensitive(self):
        a = parse("tuner   theta = pi / 2\npreselect delayed\npostselect delayed")
        b = parse("tuner theta=pi/2\npreselect delayed\npostselect delayed")
        assert a == b

    def test_measure_options(self):
        prog = parse("preselect delayed\npostselect delayed\nmeasure xL method=sample seed=4 shots=100 g=1e-2")
        (m,) = prog.measures
        assert (m.shots, m.seed, m.g.value) == (100, 4, 1e-2)

    def test_empty_source(self):
        with pytest.raises(MissingPreselect):
            parse("")

    def test_missing_postselect(self):
        with pytest.raises(MissingPostselect):
            parse("preselect delayed")

    def test_duplicate_preselect(self):
        with pytest.raises(DuplicatePreselect) as err:
            parse("preselect delayed\npreselect original\npostselect delayed")
        assert err.value.line == 2

    def test_duplicate_postselect(self):
        with pytest.raises(DuplicatePostselect):
            parse("preselect delayed\npostselect delayed\npostselect delayed")

    def test_unknown_observable(self):
        with pytest.raises(UnknownObservable) as err:
            parse("preselect delayed\npostselect delayed\nmeasure yL method=analytic")
        assert err.value.line == 3

    def test_typo_names_line(self):
        src = "bs1\ntuner theta=pi\nphase phi=0\npreselect delayed\nmeassure zR method=analytic\npostselect delayed"
        with pytest.raises(CircuitSyntaxError) as err:
            parse(src)
        assert (err.value.line, err.value.column) == (5, 1)
        assert "line 5" in str(err.value)

    @pytest.mark.parametrize(
        "line,column,expected",
        [
            ("tuner phi=1", 7, "'theta'"),
            ("tuner theta 1", 13, "'='"),
            ("measure zR", 11, "method="),
            ("measure zR method=fast", 19, "method ("),
            ("measure zR method=meter shots=1.5", 31, "integer"),
            ("measure zR method=meter method=meter", 25, "at most one"),
            ("preselect sideways", 11, "delayed|original"),
            ("bs1 extra", 5, "end of line"),
            ("tuner theta=pi $", 16, "token"),
        ],
    )
    def test_error_location(self, line, column, expected):
        with pytest.raises(CircuitSyntaxError) as err:
            parse("preselect delayed\npostselect delayed\n" + line)
        assert err.value.line == 3
        assert err.value.column == column
        assert expected in err.value.expected

    def test_first_offending_line_reported(self):
        with pytest.raises(CircuitSyntaxError) as err:
            parse("bs1\nbogus\nalso bogus\npreselect delayed")
        assert err.value.line == 2


def test_round_trip_simple():
    prog = parse("tuner theta=pi/2\npreselect delayed\npostselect delayed")
    assert pretty_print(prog).splitlines()[0] == "tuner theta=pi/2"
    assert parse(pretty_print(prog)) == prog


atom = st.one_of(
    st.just("pi"),
    st.integers(0, 12).map(str),
    st.floats(0.01, 10, allow_nan=False).map(lambda x: f"{x:.4g}"),
)


@st.composite
def expressions(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(atom)
    op = draw(st.sampled_from(["+", "-", "*", "/"]))
    left, right = draw(expressions(depth - 1)), draw(expressions(depth - 1))
    if op == "/":
        right = f"({right})" if parse_angle(right) != 0 else "pi"
    out = f"{left}{op}{right}"
    return f"({out})" if draw(st.booleans()) else out


@st.composite
def programs(draw):
    lines = []
    for _ in range(draw(st.integers(0, 4))):
        kind = draw(st.sampled_from(["bs1", "tuner", "phase"]))
        if kind == "bs1":
            lines.append("bs1")
        else:
            key = "theta" if kind == "tuner" else "phi"
            lines.append(f"{kind} {key}={draw(expressions())}")
    lines.append("preselect " + draw(st.sampled_from(["delayed", "original"])))
    lines.append("postselect " + draw(st.sampled_from(["delayed", "original"])))
    for _ in range(draw(st.integers(0, 3))):
        parts = [
            "measure " + draw(st.sampled_from(["xL", "xR", "zL", "zR", "piL", "piR"])),
            "method=" + draw(st.sampled_from(["analytic", "meter", "sample"])),
        ]
        if draw(st.booleans()):
            parts.append(f"g={draw(st.sampled_from(['1e-3', '0.01', 'pi/100']))}")
        if draw(st.booleans()):
            parts.append(f"shots={draw(st.integers(1, 10**6))}")
        if draw(st.booleans()):
            parts.append(f"seed={draw(st.integers(0, 2**64 - 1))}")
        lines.append(" ".join(parts))
    draw(st.randoms()).shuffle(lines)
    return "\n".join(lines)


@settings(max_examples=100)
@given(programs())
def test_round_trip_property(src):
    prog = parse(src)
    again = parse(pretty_print(prog))
    assert again == prog
    assert pretty_print(again) == pretty_print(prog)


class TestRun:
    def test_snarl_analytic(self):
        (res,) = run_source(SNARL)
        assert res.value == pytest.approx(-1, abs=1e-15)
        assert res.line == 5

    def test_meter(self):
        (res,) = run_source(SNARL.replace("method=analytic", "method=meter g=1e-3"))
        assert abs(res.value + 1) < 5e-3

    def test_pole_flagged(self):
        src = "tuner theta=pi/2\nphase phi=pi\npreselect delayed\npostselect delayed\nmeasure xL method=analytic"
        (res,) = run_source(src)
        assert res.diverged and res.value is None

    def test_tuners_accumulate(self):
        src = "tuner theta=pi/2\ntuner theta=pi/2\npreselect delayed\npostselect delayed\nmeasure zR method=analytic"
        (res,) = run_source(src)
        assert res.value == pytest.approx(-1, abs=1e-15)

    def test_original_pair(self):
        src = "preselect original\npostselect original\nmeasure piL method=analytic\nmeasure xR method=analytic"
        assert [r.value for r in run_source(src)] == pytest.approx([1, 1])

    def test_runtime_error_carries_line(self):
        src = "preselect delayed\npostselect delayed\n\nmeasure zR method=meter g=0.5"
        with pytest.raises(CircuitRuntimeError) as err:
            run_source(src)
        assert err.value.line == 4

    def test_sampled_is_deterministic(self):
        src = SNARL.replace("method=analytic", "method=sample g=1e-2 shots=20000 seed=5")
        assert run_source(src) == run_source(src)

    def test_compile_direct_program(self):
        prog = CircuitProgram(
            (
                Element("tuner", (("theta", Expr("pi", math.pi)),)),
                Preselect("delayed"),
                parse("preselect delayed\npostselect delayed").postselect,
                Measure("xL", "analytic"),
            )
        )
        (res,) = compile_and_run(prog)
        assert res.value == pytest.approx(1)
