"""Exact algebra for q-difference equations over Q(q)(x).

Submodules:

* :mod:`qdalg.qfield` arithmetic in Q(q)(x) with ``sigma_q``, ``delta_x``, ``delta_q``
* :mod:`qdalg.orbit` q-dispersion and orbit-disjoint normal forms
* :mod:`qdalg.rank1` differential algebraicity of ``y(qx) = a(x) y(x)``
* :mod:`qdalg.telescope` rational and elliptic q-telescoping
* :mod:`qdalg.ellring` the formal ring ``C_E(x, ell)`` with ``sigma`` and ``partial2``
* :mod:`qdalg.theta` truncated theta series and their identities
* :mod:`qdalg.integrability` integrability certificates for ``sigma(Y) = AY``
* :mod:`qdalg.prolong` jet variables and prolongation of ideals
* :mod:`qdalg.cli` the ``qdalg`` command
"""

__version__ = "0.1.0"

from .integrability import DiffSystem, check_triple, solve_single
from .orbit import UnsupportedOrbit, orbit_reduce, q_dispersion
from .qfield import ONE, ZERO, PolyX, Q, QRat, RatX, X, q_power, q_power_test
from .rank1 import Verdict, classify, theta_certificate, verify_solution_window
from .telescope import rational_telescope

__all__ = [
    "__version__",
    "ONE",
    "ZERO",
    "Q",
    "X",
    "RatX",
    "PolyX",
    "QRat",
    "q_power",
    "q_power_test",
    "UnsupportedOrbit",
    "orbit_reduce",
    "q_dispersion",
    "Verdict",
    "classify",
    "theta_certificate",
    "verify_solution_window",
    "rational_telescope",
    "DiffSystem",
    "check_triple",
    "solve_single",
]
