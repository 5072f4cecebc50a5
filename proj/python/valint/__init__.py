"""Exact C(Gamma)-valued integration on valued fields."""

from ._valint import Diagnostic, GammaValue, RunResult, ValintError, format, run

__all__ = ["Diagnostic", "GammaValue", "RunResult", "ValintError", "format", "run"]
