"""Convergence sweeps and their CSV/JSON reports."""

from __future__ import annotations

import csv
import io
import itertools
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .engine import INNER_MODES, SUMMATIONS, TAILS, PanelScheme
from .errors import InvalidArgumentError
from .pipelines import INNER_SOURCES, PIPELINES, REFERENCES, PipelineConfig, run
from .rules import MAX_ORDER

HEADER = (
    "pipeline",
    "u_max",
    "order",
    "form",
    "inner_mode",
    "value",
    "reference",
    "ratio",
    "abs_error",
    "evaluations",
    "elapsed_ms",
)
FORMATS = ("csv", "json")
STDOUT = "-"

# pipelines whose rows carry an inner_mode
_TRIANGULAR = {"identity_form_a", "identity_form_b", "i3"}
SWEEP_PIPELINES = PIPELINES + ("identity",)


@dataclass(frozen=True)
class SweepRow:
    pipeline: str
    u_max: float
    order: int
    form: str | None
    inner_mode: str | None
    value: float
    reference: float
    ratio: float
    abs_error: float
    evaluations: int
    elapsed_ms: float


@dataclass(frozen=True)
class SweepSpec:
    pipeline: str
    u_max_grid: tuple[float, ...]
    order_grid: tuple[int, ...]
    forms: tuple[str, ...] = ("A",)
    inner_modes: tuple[str, ...] = ("exact-prefix",)
    output: str = "csv"
    output_path: str = STDOUT
    panel_width: float = 1.0
    summation: str = "compensated"
    tail: str = "truncate"
    inner_source: str = "quadrature-prefix"
    timing: bool = False
    workers: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "u_max_grid", tuple(float(u) for u in self.u_max_grid))
        object.__setattr__(self, "order_grid", tuple(self.order_grid))
        object.__setattr__(self, "forms", tuple(str(f).upper() for f in self.forms))
        object.__setattr__(self, "inner_modes", tuple(self.inner_modes))
        if self.pipeline not in SWEEP_PIPELINES:
            raise InvalidArgumentError(f"unknown pipeline {self.pipeline!r}; expected one of {SWEEP_PIPELINES}")
        if not self.u_max_grid:
            raise InvalidArgumentError("u_max grid is empty")
        if not self.order_grid:
            raise InvalidArgumentError("order grid is empty")
        if not self.forms:
            raise InvalidArgumentError("forms is empty")
        if not self.inner_modes:
            raise InvalidArgumentError("inner_modes is empty")
        for k in self.order_grid:
            if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= MAX_ORDER:
                raise InvalidArgumentError(f"orders must be integers in [1, {MAX_ORDER}], got {k!r}")
        for f in self.forms:
            if f not in ("A", "B"):
                raise InvalidArgumentError(f"forms must be A or B, got {f!r}")
        for m in self.inner_modes:
            if m not in INNER_MODES:
                raise InvalidArgumentError(f"inner mode must be one of {INNER_MODES}, got {m!r}")
        if self.output not in FORMATS:
            raise InvalidArgumentError(f"output must be one of {FORMATS}, got {self.output!r}")
        if self.inner_source not in INNER_SOURCES:
            raise InvalidArgumentError(f"inner_source must be one of {INNER_SOURCES}, got {self.inner_source!r}")


def make_row(pipeline, u_max, order, form, inner_mode, result, timing=True) -> SweepRow:
    reference = REFERENCES[pipeline]
    value = result.value
    return SweepRow(
        pipeline=pipeline,
        u_max=float(u_max),
        order=int(order),
        form=form,
        inner_mode=inner_mode,
        value=value,
        reference=reference,
        ratio=value / reference,
        abs_error=abs(value - reference),
        evaluations=int(result.evaluations),
        elapsed_ms=result.elapsed * 1e3 if timing else 0.0,
    )


def _grid_points(spec: SweepSpec):
    if spec.pipeline == "identity":
        pipelines = [("identity_form_" + f.lower(), f) for f in sorted(set(spec.forms))]
    elif spec.pipeline in ("identity_form_a", "identity_form_b"):
        pipelines = [(spec.pipeline, spec.pipeline[-1].upper())]
    else:
        pipelines = [(spec.pipeline, None)]
    modes = sorted(set(spec.inner_modes))
    points = []
    for u_max, order, (pipeline, form) in itertools.product(sorted(set(spec.u_max_grid)), sorted(set(spec.order_grid)), pipelines):
        if pipeline in _TRIANGULAR and spec.inner_source == "quadrature-prefix":
            points.extend((u_max, order, pipeline, form, m) for m in modes)
        else:
            points.append((u_max, order, pipeline, form, None))
    points.sort(key=lambda p: (p[0], p[1], p[3] or "", p[4] or ""))
    return points


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every grid point; rows come back sorted by
    (u_max, order, form, inner_mode)."""
    points = _grid_points(spec)
    # validate every scheme before spending any time on evaluation
    schemes = {
        (u, k): PanelScheme(u_max=u, panel_width=spec.panel_width, rule_order=k, summation=spec.summation, tail=spec.tail)
        for u, k, *_ in points
    }
    rows = []
    for u_max, order, pipeline, form, mode in points:
        cfg = PipelineConfig(
            scheme=schemes[(u_max, order)],
            inner_source=spec.inner_source,
            inner_mode=mode or "exact-prefix",
            workers=spec.workers,
        )
        result = run(pipeline, cfg)
        rows.append(make_row(pipeline, u_max, order, form, mode, result, spec.timing))
    return rows


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render_report(rows: list[SweepRow], fmt: str = "csv") -> str:
    if not rows:
        raise InvalidArgumentError("no rows to report")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        for row in rows:
            writer.writerow([_fmt(getattr(row, name)) for name in HEADER])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    raise InvalidArgumentError(f"format must be one of {FORMATS}, got {fmt!r}")


def emit_report(rows: list[SweepRow], fmt: str = "csv", destination=STDOUT) -> None:
    """Write rows as CSV or JSON to a path, an open text stream, or stdout ("-")."""
    text = render_report(rows, fmt)
    if destination is None or destination == STDOUT:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)


_INT_FIELDS = {"order", "evaluations"}
_OPTIONAL_FIELDS = {"form", "inner_mode"}
_STR_FIELDS = {"pipeline"} | _OPTIONAL_FIELDS


def _coerce(name: str, raw):
    if name in _OPTIONAL_FIELDS and raw in ("", None):
        return None
    if name in _STR_FIELDS:
        return str(raw)
    if name in _INT_FIELDS:
        return int(raw)
    return float(raw)


def parse_report(text: str, fmt: str = "csv") -> list[SweepRow]:
    """Inverse of :func:`render_report`."""
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != HEADER:
            raise InvalidArgumentError(f"unexpected CSV header {reader.fieldnames!r}")
        records = list(reader)
    elif fmt == "json":
        records = json.loads(text)
    else:
        raise InvalidArgumentError(f"format must be one of {FORMATS}, got {fmt!r}")
    names = [f.name for f in fields(SweepRow)]
    return [SweepRow(**{n: _coerce(n, rec[n]) for n in names}) for rec in records]


# ---------------------------------------------------------------------------
# sweep spec files
# ---------------------------------------------------------------------------

_MODE_ALIASES = {"exact": "exact-prefix", "emulate": "slot-boundary-emulation"}
_SOURCE_ALIASES = {"prefix": "quadrature-prefix", "closed": "closed-form"}
_KEYS = {
    "pipeline",
    "u_max",
    "order",
    "forms",
    "inner_modes",
    "output",
    "output_path",
    "panel_width",
    "summation",
    "tail",
    "inner_source",
    "timing",
}


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_spec_text(text: str) -> SweepSpec:
    """Parse the flat ``key = value`` sweep format.

    Grids are comma separated; ``#`` starts a comment.  Example::

        pipeline = identity
        u_max = 1e3, 1e4, 1e5
        order = 10
        forms = A, B
    """
    kv = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise InvalidArgumentError(f"line {lineno}: unknown key {key!r}")
        kv[key] = value
    if "pipeline" not in kv:
        raise InvalidArgumentError("sweep spec needs a 'pipeline' key")
    try:
        args = dict(
            pipeline=kv["pipeline"],
            u_max_grid=tuple(float(v) for v in _split(kv.get("u_max", ""))),
            order_grid=tuple(int(v) for v in _split(kv.get("order", ""))),
        )
        if "panel_width" in kv:
            args["panel_width"] = float(kv["panel_width"])
    except ValueError as exc:
        raise InvalidArgumentError(f"bad number in sweep spec: {exc}") from None
    if "forms" in kv:
        args["forms"] = tuple(_split(kv["forms"]))
    if "inner_modes" in kv:
        args["inner_modes"] = tuple(_MODE_ALIASES.get(m, m) for m in _split(kv["inner_modes"]))
    if "inner_source" in kv:
        args["inner_source"] = _SOURCE_ALIASES.get(kv["inner_source"], kv["inner_source"])
    for key in ("output", "output_path", "summation", "tail"):
        if key in kv:
            args[key] = kv[key]
    if "timing" in kv:
        args["timing"] = kv["timing"].lower() in ("1", "true", "yes", "on")
    return SweepSpec(**args)


def load_spec(path) -> SweepSpec:
    return parse_spec_text(Path(path).read_text())


__all__ = [
    "HEADER",
    "SUMMATIONS",
    "TAILS",
    "SweepRow",
    "SweepSpec",
    "run_sweep",
    "make_row",
    "render_report",
    "emit_report",
    "parse_report",
    "parse_spec_text",
    "load_spec",
]
