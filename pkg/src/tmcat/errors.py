"""Exception hierarchy shared by every tmcat module.

Each error carries a short machine-parsable ``code`` so the CLI can emit
single-line diagnostics of the form ``E_VALIDATION: message``.
"""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all errors raised by the library."""

    code = "E_SIMULATION"


class ValidationError(SimulationError):
    """Invalid parameters, domains, or state preconditions."""

    code = "E_VALIDATION"


class NumericsError(SimulationError):
    """Quadrature non-convergence, undersampled windows, or overflow guards."""

    code = "E_NUMERIC"


class FitError(SimulationError):
    """Nonlinear least-squares failures and unidentifiable fits."""

    code = "E_FIT"
