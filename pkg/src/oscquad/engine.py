"""Composite Gauss-Legendre quadrature over long intervals.

The interval [0, u_max] is cut into panels of fixed width (the last one may
be shorter).  Panels are evaluated in fixed-size chunks, optionally on a
thread pool, and the per-panel integrals are reduced in panel order, so the
result never depends on the number of workers.
"""

from __future__ import annotations

import math
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidArgumentError
from .rules import MAX_ORDER, QuadratureRule, check_finite, evaluate, gauss_legendre, integrate_panel

SUMMATIONS = ("naive", "compensated", "pairwise")
TAILS = ("truncate", "zero-pair-average")
INNER_MODES = ("exact-prefix", "slot-boundary-emulation")

MAX_PANELS = 10**8
CHUNK_PANELS = 8192
THREADS_ENV = "OSCQUAD_THREADS"

_SAMPLE_STRIDE = 100
_TAIL_START = 0.9
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PanelScheme:
    """Configuration of one composite quadrature run."""

    u_max: float
    panel_width: float = 1.0
    rule_order: int = 10
    summation: str = "compensated"
    tail: str = "truncate"

    def __post_init__(self):
        w, u = self.panel_width, self.u_max
        if not (isinstance(w, (int, float)) and math.isfinite(w) and w > 0):
            raise InvalidArgumentError(f"panel_width must be a positive real, got {w!r}")
        if not (isinstance(u, (int, float)) and math.isfinite(u) and u > 0):
            raise InvalidArgumentError(f"u_max must be a positive real, got {u!r}")
        if u < w:
            raise InvalidArgumentError(f"u_max ({u}) must be at least panel_width ({w})")
        if u / w > MAX_PANELS:
            raise InvalidArgumentError(
                f"u_max/panel_width = {u / w:.3g} exceeds the limit of {MAX_PANELS:.0e} panels"
            )
        order = self.rule_order
        if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
            raise InvalidArgumentError(f"rule_order must be an integer in [1, {MAX_ORDER}], got {order!r}")
        if self.summation not in SUMMATIONS:
            raise InvalidArgumentError(f"summation must be one of {SUMMATIONS}, got {self.summation!r}")
        if self.tail not in TAILS:
            raise InvalidArgumentError(f"tail must be one of {TAILS}, got {self.tail!r}")

    @property
    def rule(self) -> QuadratureRule:
        return gauss_legendre(self.rule_order)

    def boundaries(self) -> np.ndarray:
        """Panel edges 0 = u_0 < ... < u_N = u_max."""
        w, u = float(self.panel_width), float(self.u_max)
        full = math.floor(u / w)
        # absorb representation noise such as 0.3/0.1 -> 2.9999999999999996
        if abs(u / w - round(u / w)) <= 1e-12 * (u / w):
            full = round(u / w)
        edges = np.arange(full + 1, dtype=float) * w
        if u - edges[-1] > 1e-12 * u:
            edges = np.append(edges, u)
        else:
            edges[-1] = u
        return edges


@dataclass(frozen=True)
class EvalResult:
    value: float
    error_estimate: float
    evaluations: int
    elapsed: float


@dataclass(frozen=True, eq=False)
class PrefixTable:
    """Cumulative integrals of ``g`` at the panel edges of a scheme."""

    boundaries: np.ndarray
    cumulative: np.ndarray
    rule: QuadratureRule = field(repr=False)

    def panel_of(self, u) -> np.ndarray:
        k = np.searchsorted(self.boundaries, u, side="right") - 1
        return np.clip(k, 0, len(self.boundaries) - 2)


# ---------------------------------------------------------------------------
# summation
# ---------------------------------------------------------------------------


def pairwise_sum(values: np.ndarray) -> float:
    """Sum by a binary tree whose shape depends only on ``len(values)``."""
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return 0.0
    while a.size > 1:
        if a.size % 2:
            a = np.append(a[:-1:2] + a[1::2], a[-1])
        else:
            a = a[0::2] + a[1::2]
    return float(a[0])


def naive_sum(values: np.ndarray) -> float:
    a = np.asarray(values, dtype=float)
    if a.size == 0:
        return 0.0
    # cumsum accumulates strictly left to right
    return float(np.cumsum(a)[-1])


def compensated_sum(values: np.ndarray) -> float:
    return math.fsum(np.asarray(values, dtype=float).tolist())


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Running sums with Neumaier compensation; output[0] == 0."""
    out = [0.0] * (len(values) + 1)
    s = 0.0
    c = 0.0
    for i, x in enumerate(np.asarray(values, dtype=float).tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[i + 1] = s + c
    return np.array(out)


_REDUCERS = {"naive": naive_sum, "compensated": compensated_sum, "pairwise": pairwise_sum}


def reduce_values(values: np.ndarray, summation: str) -> float:
    return _REDUCERS[summation](values)


# ---------------------------------------------------------------------------
# panel evaluation
# ---------------------------------------------------------------------------


class _Counter:
    def __init__(self):
        self.n = 0
        self._lock = threading.Lock()

    def add(self, k: int) -> None:
        with self._lock:
            self.n += int(k)


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, int(workers))


class _Pointwise:
    """Outer integrand sampled panel by panel."""

    def __init__(self, f, counter: _Counter):
        self.f = f
        self.counter = counter

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = evaluate(self.f, x)
        self.counter.add(x.size)
        check_finite(y, x)
        return y

    def nodes_values(self, left, half, k, rule):
        x = left[:, None] + half[:, None] * (rule.nodes + 1.0)
        return self(x)


def _panel_values(integrand, edges: np.ndarray, rule: QuadratureRule, workers: int | None, idx=None) -> np.ndarray:
    n = len(edges) - 1
    if idx is None:
        idx = np.arange(n)
    chunks = [idx[i : i + CHUNK_PANELS] for i in range(0, len(idx), CHUNK_PANELS)]

    def run(chunk):
        left = edges[chunk]
        half = 0.5 * (edges[chunk + 1] - left)
        y = integrand.nodes_values(left, half, chunk, rule)
        return half * (y * rule.weights).sum(axis=1)

    nw = _workers(workers)
    if nw == 1 or len(chunks) == 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            parts = list(pool.map(run, chunks))
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def _sample_indices(n: int) -> np.ndarray:
    if n <= 10 * _SAMPLE_STRIDE:
        return np.arange(n)
    # one panel from the middle of every block of _SAMPLE_STRIDE
    return np.arange(_SAMPLE_STRIDE // 2, n, _SAMPLE_STRIDE)


def _error_estimate(integrand, edges, rule, values, workers) -> float:
    n = len(values)
    idx = _sample_indices(n)
    lower = gauss_legendre(max(1, rule.order - 2))
    coarse = _panel_values(integrand, edges, lower, workers, idx=idx)
    scale = n / len(idx)
    disc = abs(math.fsum((values[idx] - coarse).tolist())) * scale
    rounding = 16 * _EPS * math.fsum(np.abs(values).tolist())
    return float(disc + rounding)


def _zero_pair_average(integrand, edges, rule, values, summation) -> float | None:
    """Mean of the running integral at the last two sign changes of the integrand."""
    n = len(values)
    u_max = edges[-1]
    k0 = int(np.searchsorted(edges, _TAIL_START * u_max, side="left"))
    k0 = min(k0, n - 1)
    tail = np.arange(k0, n)
    left = edges[tail]
    half = 0.5 * (edges[tail + 1] - left)
    x = (left[:, None] + half[:, None] * (rule.nodes + 1.0)).ravel()
    y = integrand.nodes_values(left, half, tail, rule).ravel()
    change = np.flatnonzero(np.signbit(y[:-1]) != np.signbit(y[1:]))
    if len(change) < 2:
        return None
    scalar = lambda t: float(integrand(np.array([t]))[0])  # noqa: E731
    partials = []
    for j in change[-2:]:
        a, b = x[j], x[j + 1]
        ya, yb = y[j], y[j + 1]
        if ya == 0.0:
            root = a
        elif yb == 0.0:
            root = b
        else:
            root = brentq(scalar, a, b, xtol=1e-15, rtol=4 * _EPS)
        k = int(np.clip(np.searchsorted(edges, root, side="right") - 1, 0, n - 1))
        base = reduce_values(values[:k], summation)
        if root > edges[k]:
            base += integrate_panel(integrand, edges[k], root, rule)
        partials.append(base)
    return 0.5 * (partials[0] + partials[1])


def _run(integrand, scheme: PanelScheme, counter: _Counter, workers, start: float) -> EvalResult:
    edges = scheme.boundaries()
    rule = scheme.rule
    values = _panel_values(integrand, edges, rule, workers)
    value = reduce_values(values, scheme.summation)
    if scheme.tail == "zero-pair-average":
        averaged = _zero_pair_average(integrand, edges, rule, values, scheme.summation)
        if averaged is not None:
            value = averaged
    err = _error_estimate(integrand, edges, rule, values, workers)
    return EvalResult(float(value), err, counter.n, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def integrate_composite(f, scheme: PanelScheme, workers: int | None = None) -> EvalResult:
    """Integrate ``f`` over [0, scheme.u_max] panel by panel.

    ``f`` should accept numpy arrays; scalar callables work but are slow.
    ``workers`` defaults to the ``OSCQUAD_THREADS`` environment variable
    (or 1) and never changes the result.
    """
    start = time.perf_counter()
    counter = _Counter()
    return _run(_Pointwise(f, counter), scheme, counter, workers, start)


def build_prefix(g, scheme: PanelScheme, workers: int | None = None) -> PrefixTable:
    """Tabulate the running integral of ``g`` at every panel edge.

    Always uses compensated accumulation, whatever ``scheme.summation`` says.
    """
    counter = _Counter()
    edges = scheme.boundaries()
    rule = scheme.rule
    values = _panel_values(_Pointwise(g, counter), edges, rule, workers)
    cumulative = compensated_cumsum(values)
    edges.flags.writeable = False
    cumulative.flags.writeable = False
    return PrefixTable(edges, cumulative, rule)


def _partial_from_edge(g, table: PrefixTable, k: np.ndarray, u: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    """Integral of g over [boundaries[k], u], elementwise (zero where u is an edge)."""
    lo = table.boundaries[k]
    half = 0.5 * (u - lo)
    v = lo[..., None] + half[..., None] * (rule.nodes + 1.0)
    gv = evaluate(g, v)
    check_finite(gv, v)
    return half * (gv * rule.weights).sum(axis=-1)


def prefix_at(table: PrefixTable, g, u, rule: QuadratureRule | None = None):
    """Running integral of ``g`` at ``u``: the stored edge value plus the
    partial panel up to ``u`` integrated with ``rule``."""
    rule = table.rule if rule is None else rule
    arr = np.asarray(u, dtype=float)
    if np.any(arr < 0) or np.any(arr > table.boundaries[-1]) or np.any(np.isnan(arr)):
        raise InvalidArgumentError(f"u must lie in [0, {table.boundaries[-1]}]")
    k = table.panel_of(arr)
    out = table.cumulative[k] + _partial_from_edge(g, table, k, arr, rule)
    if arr.ndim == 0:
        return float(out)
    return out


class _Triangular(_Pointwise):
    """f(u) times the running integral of g, in one of the inner modes."""

    def __init__(self, f, g, table: PrefixTable, inner_mode: str, counter: _Counter):
        super().__init__(f, counter)
        self.g = g
        self.table = table
        self.inner_mode = inner_mode

    def inner(self, x: np.ndarray, k: np.ndarray) -> np.ndarray:
        table = self.table
        rule = table.rule
        if self.inner_mode == "exact-prefix":
            self.counter.add(x.size * rule.order)
            return table.cumulative[k] + _partial_from_edge(self.g, table, k, x, rule)
        # emulation: only lattice nodes at or below x contribute
        lo = table.boundaries[k]
        half = 0.5 * (table.boundaries[k + 1] - lo)
        v = lo[..., None] + half[..., None] * (rule.nodes + 1.0)
        gv = evaluate(self.g, v)
        check_finite(gv, v)
        self.counter.add(v.size)
        mask = v <= x[..., None]
        return table.cumulative[k] + half * (np.where(mask, gv, 0.0) * rule.weights).sum(axis=-1)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return super().__call__(x) * self.inner(x, self.table.panel_of(x))

    def nodes_values(self, left, half, k, rule):
        x = left[:, None] + half[:, None] * (rule.nodes + 1.0)
        if self.inner_mode == "slot-boundary-emulation" and rule == self.table.rule:
            # outer nodes coincide with the inner lattice: a running sum suffices
            gv = evaluate(self.g, x)
            check_finite(gv, x)
            self.counter.add(x.size)
            inner = self.table.cumulative[k][:, None] + half[:, None] * np.cumsum(gv * rule.weights, axis=1)
            return super().__call__(x) * inner
        kk = np.broadcast_to(np.asarray(k)[:, None], x.shape)
        return super().__call__(x) * self.inner(x, kk)


def integrate_triangular(
    f, g, scheme: PanelScheme, inner_mode: str = "exact-prefix", workers: int | None = None
) -> EvalResult:
    """Integrate f(u) * (integral of g over [0, u]) for u in [0, u_max].

    In ``exact-prefix`` mode the inner integral at each outer node is the
    tabulated edge value plus the partial panel up to the node.  In
    ``slot-boundary-emulation`` mode the partial panel only counts inner
    lattice nodes lying at or below the outer node, the rest padded with
    zeros, which biases the inner integral toward the lower end of each slot.
    """
    if inner_mode not in INNER_MODES:
        raise InvalidArgumentError(f"inner_mode must be one of {INNER_MODES}, got {inner_mode!r}")
    start = time.perf_counter()
    counter = _Counter()
    table = build_prefix(_Pointwise(g, counter), scheme, workers)
    integrand = _Triangular(f, g, table, inner_mode, counter)
    return _run(integrand, scheme, counter, workers, start)
