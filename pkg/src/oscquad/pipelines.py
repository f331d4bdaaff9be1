"""Evaluators for the reduced integrals: Dirichlet, Fresnel-type, the
two-term triangular identity, the bracket product and the tiers I1-I3.

Every integrand here is real and pointwise evaluable.  Principal-value and
delta-function parts were resolved analytically beforehand; they survive
only as the additive pi/2 constants in :func:`bracket_product` and tier 2.
Inner variables are the squared frequencies divided by 4 (or 2), where unit
panels are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


from . import funcs
from .engine import INNER_MODES, EvalResult, PanelScheme, integrate_composite, integrate_triangular
from .errors import InvalidArgumentError, UnsupportedTierError

PI = math.pi

REFERENCES = {
    "dirichlet": PI / 2,
    "fresnel_quarter": PI / 4,
    "identity_form_a": PI**2 / 12,
    "identity_form_b": PI**2 / 12,
    "bracket_product": -(PI**2) / 4,
    "i1": PI / 2,
    "i2": PI**2 / 16,
    "i3": PI**3 / 192,
}
PIPELINES = tuple(REFERENCES)
INNER_SOURCES = ("quadrature-prefix", "closed-form")


@dataclass(frozen=True)
class PipelineConfig:
    scheme: PanelScheme
    inner_source: str = "quadrature-prefix"
    inner_mode: str = "exact-prefix"
    workers: int | None = None

    def __post_init__(self):
        if self.inner_source not in INNER_SOURCES:
            raise InvalidArgumentError(f"inner_source must be one of {INNER_SOURCES}, got {self.inner_source!r}")
        if self.inner_mode not in INNER_MODES:
            raise InvalidArgumentError(f"inner_mode must be one of {INNER_MODES}, got {self.inner_mode!r}")


def _combine(*parts: EvalResult, value: float, error: float | None = None) -> EvalResult:
    return EvalResult(
        value=float(value),
        error_estimate=float(sum(p.error_estimate for p in parts) if error is None else error),
        evaluations=sum(p.evaluations for p in parts),
        elapsed=sum(p.elapsed for p in parts),
    )


def dirichlet(cfg: PipelineConfig) -> EvalResult:
    """Integral of sin(u)/u over [0, u_max]."""
    return integrate_composite(funcs.sinc, cfg.scheme, cfg.workers)


def _half_sinc(z):
    return 0.5 * funcs.sinc(z)


def fresnel_quarter(cfg: PipelineConfig) -> EvalResult:
    """Integral of sin(w**2/4)/w, computed after zeta = w**2/4.

    Since dw/w = dzeta/(2 zeta) the object integrated is sin(zeta)/(2 zeta)
    on [0, Z] with Z = scheme.u_max.
    """
    return integrate_composite(_half_sinc, cfg.scheme, cfg.workers)


def _triangular(f, g, closed_which: str, cfg: PipelineConfig) -> EvalResult:
    if cfg.inner_source == "closed-form":
        return integrate_composite(lambda u: f(u) * funcs.inner_closed(closed_which, u), cfg.scheme, cfg.workers)
    return integrate_triangular(f, g, cfg.scheme, cfg.inner_mode, cfg.workers)


def _complement_weighted(u):
    return funcs.sincos_over(u) * (0.5 * PI - funcs.si(u))


def identity_terms(cfg: PipelineConfig, form: str = "A") -> tuple[EvalResult, EvalResult]:
    """The two integrals on the left of the identity, separately."""
    form = str(form).upper()
    if form not in ("A", "B"):
        raise InvalidArgumentError(f"form must be 'A' or 'B', got {form!r}")
    first = _triangular(funcs.cos_over, funcs.sin2_over, "F", cfg)
    if form == "A":
        second = _triangular(funcs.sinc, funcs.sincos_over, "G", cfg)
    else:
        # complement of the Dirichlet integral via Si
        second = integrate_composite(_complement_weighted, cfg.scheme, cfg.workers)
    return first, second


def identity(cfg: PipelineConfig, form: str = "A") -> EvalResult:
    """Sum of the two triangular integrals whose stated value is pi**2/12.

    Form A pairs cos(u)/u with the running integral of sin(v)**2/v and
    sin(u)/u with the running integral of sin(v)cos(v)/v.  Form B replaces
    the second term by sin(u)cos(u)/u times (pi/2 - Si(u)).
    """
    first, second = identity_terms(cfg, form)
    return _combine(first, second, value=first.value + second.value)


def bracket_product(cfg: PipelineConfig) -> EvalResult:
    """Real product of the two curly brackets, stated value -pi**2/4.

    Each bracket is i*b with b = 2*(pi/2 - J), J the Fresnel-type integral
    with w**2/4 or w**2/2 in the sine.  Both substitutions give the same
    zeta integral, so J is evaluated once.
    """
    j = fresnel_quarter(cfg)
    b4 = 2.0 * (0.5 * PI - j.value)
    b2 = 2.0 * (0.5 * PI - j.value)
    err = 2.0 * j.error_estimate * (abs(b4) + abs(b2))
    return _combine(j, value=-b4 * b2, error=err)


def i_n(n: int, cfg: PipelineConfig) -> EvalResult:
    """Tier ``n`` of the multiple integral for n in {1, 2, 3}."""
    if n == 1:
        return EvalResult(PI / 2, 0.0, 0, 0.0)
    if n == 2:
        j = fresnel_quarter(cfg)
        return _combine(j, value=0.25 * PI * (0.5 * PI - j.value), error=0.25 * PI * j.error_estimate)
    if n == 3:
        br = bracket_product(cfg)
        ident = identity(cfg, "A")
        value = -(PI / 32) * (br.value + ident.value)
        err = (PI / 32) * (br.error_estimate + ident.error_estimate)
        return _combine(br, ident, value=value, error=err)
    raise UnsupportedTierError(f"tier n={n!r} is not supported; only n in {{1, 2, 3}} have evaluators")


def assembly_check() -> float:
    """Tier-3 assembly applied to the reference values of its two parts."""
    return -(PI / 32) * (REFERENCES["bracket_product"] + REFERENCES["identity_form_a"])


def run(pipeline: str, cfg: PipelineConfig) -> EvalResult:
    """Dispatch by pipeline id."""
    if pipeline == "dirichlet":
        return dirichlet(cfg)
    if pipeline == "fresnel_quarter":
        return fresnel_quarter(cfg)
    if pipeline == "identity_form_a":
        return identity(cfg, "A")
    if pipeline == "identity_form_b":
        return identity(cfg, "B")
    if pipeline == "bracket_product":
        return bracket_product(cfg)
    if pipeline in ("i1", "i2", "i3"):
        return i_n(int(pipeline[1]), cfg)
    raise InvalidArgumentError(f"unknown pipeline {pipeline!r}; expected one of {PIPELINES}")


__all__ = [
    "PIPELINES",
    "REFERENCES",
    "INNER_SOURCES",
    "PipelineConfig",
    "dirichlet",
    "fresnel_quarter",
    "identity",
    "identity_terms",
    "bracket_product",
    "i_n",
    "assembly_check",
    "run",
]
