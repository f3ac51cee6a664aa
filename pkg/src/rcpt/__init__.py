"""Strong system-bath coupling via reaction coordinates and polaron dressing.

Build an open quantum system (`models`), move it to the reaction-coordinate
or effective representation (`transforms`), and solve the Redfield master
equation for steady states and currents (`redfield`).
"""

__version__ = "0.1.0"

from .errors import RcptError  # noqa: E402
from .operators import OperatorMatrix, kron, partial_trace, eigensystem  # noqa: E402
from .spectral import Bath, Brownian, OhmicExp, ScaledOhmic, Tabulated  # noqa: E402
from .transforms import (OpenSystemModel, build_effective_model, build_rc_extended,  # noqa: E402
                         choose_rc_levels)
from .redfield import build_liouvillian, solve, steady_state  # noqa: E402

__all__ = [
    "RcptError", "OperatorMatrix", "kron", "partial_trace", "eigensystem",
    "Bath", "Brownian", "OhmicExp", "ScaledOhmic", "Tabulated",
    "OpenSystemModel", "build_effective_model", "build_rc_extended", "choose_rc_levels",
    "build_liouvillian", "solve", "steady_state",
]
