"""Traveling fronts of the nonlocal bistable equation u_t = mu*u - u + f(u).

The heavy lifting lives in the C++ extension module; this package re-exports
its surface: measures (atoms + piecewise-linear densities), monotone profiles,
the RK4 semiflow, exponential-moment speed bounds, and the config-driven
front/simulation pipelines.
"""

from ._core import (  # noqa: F401
    GridSpec,
    Measure,
    Nonlinearity,
    Profile,
    Semiflow,
    SolverError,
    ValidationError,
    bound_curve,
    bounds_report,
    convolve,
    convolve_measures,
    exp_series,
    front_pipeline,
    hypotheses_report,
    hypothesis7_gap,
    leq,
    level_crossing,
    measure_speed,
    mgf_report,
    resample,
    simulate_report,
    speed_bound_infimum,
    subsuper_report,
    sup_dist,
    translate,
    verify_mgf_identity,
    __version__,
)
