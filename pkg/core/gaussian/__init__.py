from .model import INFINITE, GaussianMacChannel, NetworkGeometry, path_loss_gain, compile_geometry
from .bounds import (
    BoundReport,
    C12ZeroReport,
    CooperationReport,
    LowerBoundForm,
    LowerBoundParams,
    c12_zero_bound_value,
    c12_zero_bounds,
    c12_zero_condition,
    cooperation_coincidence,
    full_cooperation_capacity,
    lower_bound,
    lower_bound_value,
    upper_bound,
    upper_bound_value,
)
