"""Exact A1 constants, sharp reverse Hoelder bounds and verification campaigns for step weights."""

from .a1 import A1Report, Theorem1Report, a1_constant, check_theorem1, hardy_constant
from .covering import CoverResult, IntervalSet, cover, interval_set, verify_cover
from .majorization import (FlattenSpec, HingeFunction, convex_dominates, hinge_integral,
                           majorizes, two_level_flatten)
from .sharp import (ExponentOutOfRange, SharpBound, check_reverse_holder, critical_exponent,
                    extremal_weight, h_p, omega_p, power_moment, sharp_bound, sharp_constant,
                    sharpness_gap)
from .weights import (Interval, PowerWeight, StepWeight, discretize_power, distribution, essinf,
                      integrate, make_step_weight, rearrange)

__version__ = "0.1.0"
