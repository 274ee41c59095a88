"""Characterizing constants of reverse Hardy inequalities with supremal operators."""

from .characterize import (ConstantsReport, ProblemSpec, Regime, compute_constants, constant_A1,
                           constant_A2, constant_A3, constants_B, direct_B, discrete_A,
                           forward_phi, reduce_three_measure, reflect, regime, vanishing_condition)
from .discretize import (DiscretizingSequence, check_discretizing, covering_intervals,
                         discretized_rhs, discretizing_sequence)
from .errors import (ConventionViolation, DomainError, NonAdmissibleWeight, NotAbsolutelyContinuous,
                     NotAlmostGeometric, RevHardyError, ToleranceNotMet, TruncationOverflow)
from .measure import EndpointedInterval, Interval, Measure, mass
from .numerics import Enclosure
from .oracle import OracleResult, best_constant_estimate, extremal_candidates, ratio
from .sequences import (GeomDecay, detect_geom, embedding_norm, leindler_check, leindler_constant,
                        lq_norm, satisfies_geom)
from .stepfn import StepFunction, norm, pointwise, sup_envelope
from .stieltjes import MonotoneFunction, cumulative_norm, ls_integral

__version__ = "0.1.0"
