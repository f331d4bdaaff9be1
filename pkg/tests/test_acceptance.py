"""Exit criteria.  Each criterion prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (lines are repeated in the
terminal summary) or ``python tests/test_acceptance.py`` for just the lines.
"""

import contextlib
import functools
import io
import math
import time

import numpy as np
import pytest

from oscquad import cli, funcs
from oscquad.engine import PanelScheme, build_prefix, integrate_composite, integrate_triangular, prefix_at
from oscquad.pipelines import assembly_check
from oscquad.rules import gauss_legendre, integrate_panel
from oscquad.sweep import SweepSpec, parse_report, run_sweep

PI = math.pi
RESULTS = {}


@functools.lru_cache(maxsize=None)
def cli_row(*argv):
    buf = io.StringIO()
    start = time.perf_counter()
    with contextlib.redirect_stdout(buf):
        code = cli.main(list(argv))
    elapsed = time.perf_counter() - start
    assert code == 0, f"exit {code} for {argv}"
    return parse_report(buf.getvalue(), "csv")[0], elapsed


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    print(line)
    return ok, line


def criterion_1():
    worst = max(abs(funcs.closed_form(n) - 2 / math.factorial(n) * (PI / 4) ** n) / funcs.closed_form(n) for n in range(1, 7))
    named = (
        abs(funcs.closed_form(1) - PI / 2) <= 1e-14 * PI / 2
        and abs(funcs.closed_form(2) - PI**2 / 16) <= 1e-14 * PI**2 / 16
        and abs(funcs.closed_form(3) - PI**3 / 192) <= 1e-14 * PI**3 / 192
        and abs(funcs.closed_form(2) - 0.6168502751) <= 1e-10
    )
    return record(1, worst <= 1e-14 and named, f"closed_form n=1..6 max rel dev {worst:.1e}; I1,I2,I3 = pi/2, pi^2/16, pi^3/192")


def criterion_2():
    parts = []
    ok = True
    for order in ("10", "8"):
        r, t = cli_row("dirichlet", "--umax", "2000000", "--order", order)
        err = abs(r.value - PI / 2)
        ok &= err <= 2e-6 and t < 10
        parts.append(f"order {order}: |v-pi/2|={err:.2e} ratio={r.ratio:.10f} ({t:.1f}s)")
    return record(2, ok, "; ".join(parts))


def criterion_3():
    base = ("identity", "--form", "A", "--umax", "100000", "--order", "10", "--inner-mode", "exact")
    pre, _ = cli_row(*base, "--inner", "prefix")
    clo, _ = cli_row(*base, "--inner", "closed")
    formb, _ = cli_row("identity", "--form", "B", "--umax", "100000", "--order", "10")
    ref = PI**2 / 12
    rel_pre = abs(pre.value - ref) / ref
    rel_clo = abs(clo.value - ref) / ref
    agree = abs(pre.value - clo.value) / abs(clo.value)
    ab = abs(pre.value - formb.value) / abs(pre.value)
    ok = rel_pre <= 1e-3 and rel_clo <= 1e-3 and agree <= 1e-6 and ab <= 5e-4
    return record(
        3,
        ok,
        f"rel err vs pi^2/12: prefix {rel_pre:.3e}, closed {rel_clo:.3e} (need 1e-3; value {pre.value:.10f}); "
        f"prefix~closed {agree:.1e} (1e-6); A~B {ab:.1e} (5e-4)",
    )


def criterion_4():
    r, _ = cli_row("identity", "--inner-mode", "emulate", "--umax", "2000000", "--order", "10")
    ok = 0.97 <= r.ratio <= 1.03
    return record(4, ok, f"emulated ratio {r.ratio:.10f} in [0.97, 1.03]")


def criterion_5():
    r, _ = cli_row("in", "--n", "3")
    ref = PI**3 / 192
    rel = abs(r.value - ref) / ref
    asm = abs(assembly_check() - ref)
    ok = rel <= 2e-3 and asm <= 1e-15
    return record(5, ok, f"I3 {r.value:.10f} rel err {rel:.3e} (need 2e-3); assembly constant dev {asm:.1e} (1e-15)")


def criterion_6():
    r, _ = cli_row("in", "--n", "2", "--umax", "1000000")
    err = abs(r.value - PI**2 / 16)
    return record(6, err <= 1e-6, f"I2 |v-pi^2/16| = {err:.2e} (1e-6)")


def criterion_7():
    r, _ = cli_row("bracket", "--umax", "1000000")
    err = abs(r.value + PI**2 / 4)
    return record(7, err <= 1e-4, f"bracket |v+pi^2/4| = {err:.2e} (1e-4)")


def criterion_8():
    checks = {}
    worst = 0.0
    for k in range(1, 21):
        r = gauss_legendre(k)
        for p in range(2 * k):
            got = integrate_panel(lambda x: x**p, -1.0, 1.0, r)
            exact = 0.0 if p % 2 else 2.0 / (p + 1)
            worst = max(worst, abs(got) / 1e-13 if exact == 0 else abs(got - exact) / exact / 1e-12)
    checks["GL exactness"] = worst <= 1.0
    checks["weight sum"] = all(abs(gauss_legendre(k).weights.sum() - 2) <= 1e-13 for k in range(1, 65))

    u = np.linspace(0.01, 200, 200)
    dev = 0.0
    for which, g in (("F", funcs.sin2_over), ("G", funcs.sincos_over)):
        t = build_prefix(g, PanelScheme(u_max=200.0))
        dev = max(dev, float(np.max(np.abs(prefix_at(t, g, u) - funcs.inner_closed(which, u)))))
    checks["prefix vs closed F/G"] = dev <= 1e-9

    s = PanelScheme(u_max=2000.0)
    tri = integrate_triangular(funcs.cos_over, funcs.sinc, s).value
    closed = integrate_composite(lambda x: funcs.cos_over(x) * funcs.si(x), s).value
    checks["triangular vs closed (sinc)"] = abs(tri - closed) <= 1e-8

    f = lambda x: np.cos(x) / (1.0 + x)  # noqa: E731
    vals = {m: integrate_composite(f, PanelScheme(u_max=1e6, summation=m)).value for m in ("naive", "compensated", "pairwise")}
    ref = vals["compensated"]
    checks["summation modes"] = abs(vals["naive"] - ref) <= 1e-9 * abs(ref) and abs(vals["pairwise"] - ref) <= 1e-12 * abs(ref)

    ps = PanelScheme(u_max=2e5, summation="pairwise")
    checks["parallel determinism"] = all(
        integrate_composite(funcs.sinc, ps, workers=w).value.hex() == integrate_composite(funcs.sinc, ps, workers=1).value.hex()
        for w in (2, 4, 7)
    )
    ok = all(checks.values())
    return record(8, ok, ", ".join(f"{k} {'ok' if v else 'BAD'}" for k, v in checks.items()))


def criterion_9():
    rows = run_sweep(SweepSpec("identity", (1e3, 1e4, 1e5), (10,), forms=("A",)))
    errs = [r.abs_error for r in rows]
    ok = all(b <= a for a, b in zip(errs, errs[1:]))
    return record(9, ok, "abs_error vs pi^2/12 at u_max 1e3,1e4,1e5: " + ", ".join(f"{e:.6f}" for e in errs))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(criterion):
    ok, line = criterion()
    assert ok, line


if __name__ == "__main__":
    for c in CRITERIA:
        c()
