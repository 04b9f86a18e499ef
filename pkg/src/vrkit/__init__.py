"""Value regions of symmetric univalent self-maps of the upper half-plane
and the unit disc: closed-form boundaries, exact classifiers, a symmetric
Loewner integrator and representation samplers used as mutual oracles."""

from .errors import (BranchAmbiguity, BranchCut, DegenerateInput, MalformedBoundary, OutOfDomain,
                     OutOfRange, PoleAtOne, RejectionBudgetExceeded, ToleranceUnreachable, VrkitError)
from .regions import Region, Verdict, Where
from .halfplane import (classify_VI, classify_VIstar, hp_curve_point, region_VI, region_VIstar)
from .disc import (classify_VU, disc_curve_point, disc_region, extremal_map, region_VR, region_VR0,
                   region_VRgeq, region_VRgt, region_VT, region_VU, region_VUstar)
from .loewner import (DiscreteMeasure, Exponent, MeasurePath, MeasurePiece, Slit, SlitPiece,
                      Trajectory, exponent_driving, integrate, integrate_many, thunder_check)

__version__ = "0.1.0"
