"""Tyler's M-estimator, Tyler-weights scale/scatter, and t tail estimation."""

from .elliptical import DensityGenerator, nu_from_theta, theta_mvt, theta_numeric
from .errors import HeavyTailError, InputError, NumericalError
from .sampling import ExperimentDesign, ar1_scatter, sample_elliptical, sample_mvt
from .spd import SpdMatrix, make_spd, quad_form_inv, trace_mean
from .tail import (
    NuEstimate,
    estimate_nu,
    estimate_nu_kurtosis,
    estimate_nu_opp,
    estimate_nu_twe,
    mvt_mle_scatter,
    sample_cov,
)
from .twe import TweEstimate, shrink_scatter, twe_covariance, twe_scale, twe_scatter
from .tyler import TylerFit, fit_tyler, tyler_map

__version__ = "0.1.0"
