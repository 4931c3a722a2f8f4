"""Laguerre-type unitary ensembles with polynomial deformations, at high precision.

Equilibrium measures, finite-N partition functions, one-point functions,
edge parametrices and expansion fits for the weight ``x^alpha exp(-N V(x))``
on ``(0, inf)`` with ``V(x) = x + sum_k t_k x^k``.
"""

from .asymptotics import ExpansionFit, e0_energy, e0_path_oracle, fit_expansion, richardson
from .correlation import LinearStatistic, expect, gauss_size, rho_cd, rho_sum
from .equilibrium import (EquilibriumData, NotOneCutError, SymmetrizedData, equilibrium_moment,
                          solve_endpoint, solve_equilibrium, symmetrize_check)
from .kernels import EdgeMaps, F0_eval, F0_expansion, hard_edge_density, soft_edge_density
from .numerics import NumericalError, PrecisionContext, QuadratureError, quad_endpoint, quad_semiinfinite
from .orthopoly import RecurrenceTable, WeightSpec, moments, recurrence_table, stieltjes_recurrence
from .partition import (PartitionTable, PrecisionFailure, log_partition, log_partition_laguerre,
                        log_ratio_sweep)
from .potential import ConfigError, DomainParams, Potential, in_domain, parse_potential

__version__ = "0.1.0"
