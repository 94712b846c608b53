from .functions import cap, clamp_plus, binary_entropy
from .optimizer import GridSpec, Optimum, maximize

__all__ = ["cap", "clamp_plus", "binary_entropy", "GridSpec", "Optimum", "maximize"]
