import io
import json
import math

import pytest

from oscquad.engine import EvalResult
from oscquad.errors import InvalidArgumentError
from oscquad.sweep import (
    HEADER,
    SweepRow,
    SweepSpec,
    emit_report,
    make_row,
    parse_report,
    parse_spec_text,
    render_report,
    run_sweep,
)


def row(**kw):
    base = dict(pipeline="dirichlet", u_max=10.0, order=10, form=None, inner_mode=None)
    base.update(kw)
    return make_row(base["pipeline"], base["u_max"], base["order"], base["form"], base["inner_mode"],
                    EvalResult(kw.get("value", 1.2345678901234567), 1e-12, 100, 0.25))


def test_row_invariants():
    r = row(value=1.6)
    assert abs(r.ratio * r.reference - r.value) <= 1e-15 * abs(r.value)
    assert r.abs_error == abs(r.value - r.reference)
    assert r.elapsed_ms == 250.0


def test_csv_header_and_line_count():
    text = render_report([row()], "csv")
    lines = text.splitlines()
    assert lines[0] == "pipeline,u_max,order,form,inner_mode,value,reference,ratio,abs_error,evaluations,elapsed_ms"
    assert len(lines) == 2
    assert lines[1].split(",")[3:5] == ["", ""]


def test_i1_ratio_is_one():
    r = run_sweep(SweepSpec("i1", (10.0,), (10,)))[0]
    text = render_report([r], "csv")
    assert text.splitlines()[1].split(",")[HEADER.index("ratio")] == "1"
    assert parse_report(text, "csv")[0].ratio == 1.0


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(fmt):
    rows = [row(), row(pipeline="identity_form_b", form="B", inner_mode="exact-prefix", value=0.1 + 0.2)]
    back = parse_report(render_report(rows, fmt), fmt)
    assert back == rows


def test_json_field_names():
    data = json.loads(render_report([row()], "json"))
    assert list(data[0]) == list(HEADER)


def test_emit_destinations(tmp_path, capsys):
    rows = [row()]
    emit_report(rows, "csv", "-")
    assert capsys.readouterr().out == render_report(rows, "csv")
    buf = io.StringIO()
    emit_report(rows, "json", buf)
    assert json.loads(buf.getvalue())[0]["pipeline"] == "dirichlet"
    p = tmp_path / "r.csv"
    emit_report(rows, "csv", p)
    assert p.read_text() == render_report(rows, "csv")
    with pytest.raises(OSError):
        emit_report(rows, "csv", tmp_path / "missing" / "r.csv")
    with pytest.raises(InvalidArgumentError):
        emit_report([], "csv", buf)


def test_empty_grids_rejected():
    with pytest.raises(InvalidArgumentError):
        SweepSpec("dirichlet", (10.0,), ())
    with pytest.raises(InvalidArgumentError):
        SweepSpec("dirichlet", (), (10,))
    with pytest.raises(InvalidArgumentError):
        SweepSpec("dirichlet", (10.0,), (65,))
    with pytest.raises(InvalidArgumentError):
        SweepSpec("nope", (10.0,), (10,))


def test_resource_guard_refuses_before_running():
    spec = SweepSpec("dirichlet", (10.0, 5e8), (10,))
    with pytest.raises(InvalidArgumentError, match="limit"):
        run_sweep(spec)


def test_dirichlet_sweep_two_orders():
    rows = run_sweep(SweepSpec("dirichlet", (2e6,), (10, 8)))
    assert [r.order for r in rows] == [8, 10]
    for r in rows:
        assert abs(r.ratio - 1) <= 1e-5


def test_row_order_and_optional_columns():
    spec = SweepSpec(
        "identity",
        (300.0, 100.0),
        (10, 6),
        forms=("B", "A"),
        inner_modes=("slot-boundary-emulation", "exact-prefix"),
    )
    rows = run_sweep(spec)
    keys = [(r.u_max, r.order, r.form, r.inner_mode) for r in rows]
    assert keys == sorted(keys)
    assert len(rows) == 2 * 2 * 2 * 2
    assert {r.pipeline for r in rows} == {"identity_form_a", "identity_form_b"}
    assert all(r.elapsed_ms == 0.0 for r in rows)
    again = run_sweep(spec)
    assert render_report(rows) == render_report(again)


def test_non_triangular_rows_have_no_inner_mode():
    rows = run_sweep(SweepSpec("fresnel_quarter", (100.0,), (10,), inner_modes=("exact-prefix", "slot-boundary-emulation")))
    assert len(rows) == 1 and rows[0].inner_mode is None and rows[0].form is None


def test_closed_inner_source_rows():
    rows = run_sweep(SweepSpec("i3", (200.0,), (10,), inner_source="closed-form"))
    assert len(rows) == 1 and rows[0].inner_mode is None


def test_parse_spec_text():
    spec = parse_spec_text(
        """
        # identity convergence
        pipeline = identity
        u_max = 1e3, 1e4 ,1e5
        order = 10
        forms = A, b
        inner_modes = exact, emulate
        inner_source = prefix
        output = json
        output_path = out.json
        panel_width = 0.5
        summation = pairwise
        tail = zero-pair-average
        timing = yes
        """
    )
    assert spec.u_max_grid == (1e3, 1e4, 1e5)
    assert spec.order_grid == (10,)
    assert spec.forms == ("A", "B")
    assert spec.inner_modes == ("exact-prefix", "slot-boundary-emulation")
    assert (spec.output, spec.output_path, spec.panel_width) == ("json", "out.json", 0.5)
    assert (spec.summation, spec.tail, spec.timing) == ("pairwise", "zero-pair-average", True)


@pytest.mark.parametrize(
    "text",
    [
        "u_max = 10\norder = 10",
        "pipeline = dirichlet\nu_max = ten\norder = 10",
        "pipeline = dirichlet\nu_max = 10\norder =",
        "pipeline = dirichlet\ncolour = blue",
        "pipeline dirichlet",
    ],
)
def test_parse_spec_errors(text):
    with pytest.raises(InvalidArgumentError):
        parse_spec_text(text)


def test_timing_recorded_when_requested():
    rows = run_sweep(SweepSpec("dirichlet", (100.0,), (10,), timing=True))
    assert rows[0].elapsed_ms > 0
    assert math.isfinite(rows[0].elapsed_ms)
