"""Decoherence of a charged oscillator in a magnetic field coupled to a bath."""
import json as _json

from ._core import (
    ConfigError,
    Cutoff,
    CurveMethod,
    DomainError,
    FormVariant,
    ModeConstants,
    NotAvailableError,
    NumericalError,
    Regime,
    SpectralDensity,
    SystemParams,
    ThermalRegime,
    curve,
    default_grid,
    dissipation_kernel,
    findings,
    hightemp_rate,
    lambdas,
    lambdas_closed,
    log_grid,
    lowtemp_powerlaw,
    mode_constants,
    noise_kernel,
    noise_kernel_closed,
)
from ._core import validation_report as _validation_report


def validate(level="fast"):
    """Run the oracle checks and acceptance criteria; returns the report as a dict."""
    return _json.loads(_validation_report(level))


__all__ = [name for name in dir() if not name.startswith("_")]
