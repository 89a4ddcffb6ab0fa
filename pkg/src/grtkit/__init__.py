"""Exact truncated computations with GRT1, Drinfeld associators, KV/KRV
symmetries and arrow-diagram vertex values over Q."""

from .freeseries import (AssocSeries, LieSeries, SeriesError, TruncationContext, bch,
                         lyndon_basis, series_from_json, series_to_json)
from .tder import TAutElement, TangentialDerivation, taut_exp, taut_log, tder_bracket
from .cyc import CyclicSeries, OneVarSeries, divergence, jacobian, solve_duflo
from .grtkrv import (check_grt, check_krv, psi3, psi5, rho, rho_ring, solve_associator,
                     solve_grt_degree, stripping_r)

__all__ = [
    "AssocSeries", "LieSeries", "SeriesError", "TruncationContext", "bch", "lyndon_basis",
    "series_from_json", "series_to_json", "TAutElement", "TangentialDerivation", "taut_exp",
    "taut_log", "tder_bracket", "CyclicSeries", "OneVarSeries", "divergence", "jacobian",
    "solve_duflo", "check_grt", "check_krv", "psi3", "psi5", "rho", "rho_ring",
    "solve_associator", "solve_grt_degree", "stripping_r",
]
