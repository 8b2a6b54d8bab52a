"""Energy budget, trace and fitting analysis package."""

# Import key functions for easier access
from harvestr.analysis.scenario import simulate_pass, simulate_period
from harvestr.analysis.traces import detect_passes, integrate_energy, power_trace
from harvestr.analysis.optimize import (
    fit_loop_length,
    optimize_placement,
    predict_coefficient,
    sweep,
)
