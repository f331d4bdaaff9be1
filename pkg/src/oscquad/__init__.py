"""Composite Gauss-Legendre quadrature for slowly convergent oscillatory integrals."""

from .engine import (
    EvalResult,
    PanelScheme,
    PrefixTable,
    build_prefix,
    integrate_composite,
    integrate_triangular,
    prefix_at,
)
from .errors import InvalidArgumentError, NumericError, QuadratureError, UnsupportedTierError
from .funcs import ci, closed_form, inner_closed, kernel, si
from .pipelines import PipelineConfig, bracket_product, dirichlet, fresnel_quarter, i_n, identity
from .rules import QuadratureRule, gauss_legendre, integrate_panel
from .sweep import SweepRow, SweepSpec, emit_report, run_sweep

__version__ = "0.1.0"
