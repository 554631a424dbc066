"""Max-stable processes: spectral representations, exact simulation, classification.

The package is organized along the pipeline:

* :mod:`maxstable.frechet` -- scalar Frechet distribution arithmetic;
* :mod:`maxstable.representations` -- spectral families in atomic, grid and
  doubly stochastic encodings, with exact/quadrature/Monte-Carlo evaluation
  of finite-dimensional laws;
* :mod:`maxstable.simulate` -- path generators (exact atomic, exact
  max-increments, truncated Poisson series, fractional Brownian motion,
  Brown-Resnick);
* :mod:`maxstable.classify` -- conservative/dissipative and positive/null
  classification from co-spectral integrals, minimal reduction, orbit
  analysis, Brown-Resnick dissipativity;
* :mod:`maxstable.gallery` -- constructors for the named processes;
* :mod:`maxstable.cli` -- batch experiment runner.
"""

from .frechet import frechet_cdf, frechet_quantile, max_scale, sample_standard_frechet
from .representations import (AtomicRep, DoublyStochasticRep, ExponentEstimate,
                              GridRep, HybridRep, StationarityReport,
                              check_stationarity, fdd_exponent, fdd_probability,
                              independent_blocks, load_rep, rep_from_json_dict,
                              rep_to_json_dict, save_rep, scale_coefficient,
                              spectral_distance, trapezoid_weights)
from .simulate import (GaussianIncrementModel, NumericError, PathEnsemble,
                       PoissonSeriesState, SeriesTruncation, path_stream,
                       poisson_series_path, simulate_atomic, simulate_brown_resnick,
                       simulate_extremal_process, simulate_fbm, simulate_series)
from .classify import (ClassificationError, ClassificationReport, DEFAULT_WINDOWS,
                       BrownResnickDissipativity, OrbitDecomposition, QuadSpec,
                       ReductionResult, TrajectoryRules, WeightFunction,
                       brown_resnick_dissipativity_test, hopf_classify,
                       minimal_discrete_reduce, orbit_decompose,
                       positive_null_classify, time_integral_trajectory,
                       weight_battery)
from .gallery import (GALLERY, ExtremalProcessEncodings, KernelSpec,
                      MixedMovingMaximaRep, brown_resnick_rep, build_gallery_rep,
                      continuous_discrete_split, extremal_process_rep,
                      gaussian_moving_maxima_rep, mixed_moving_maxima_rep,
                      moving_maxima_rep)

__version__ = "0.1.0"
