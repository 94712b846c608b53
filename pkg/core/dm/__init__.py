from .channel import (
    DiscreteMemorylessChannel,
    binary_symmetric,
    cascade_crossover,
    degraded_binary_wiretap,
    eavesdropper_copy,
    from_components,
    noiseless_secure,
    random_channel,
)
from .distributions import AuxCardinalities, InnerAuxDistribution, OuterAuxDistribution, joint_law
from .information import JointLaw, conditional_mi, entropy
from .region import (
    InnerBoundForm,
    RateEquivocationPoint,
    inner_bound_point,
    outer_bound_point,
    wthi_objective,
)
from .frontier import (
    FrontierBound,
    FrontierReport,
    LatticeOptimum,
    WynerCheck,
    cooperative_mac_rate,
    enumerate_frontier,
    pareto,
    upper_concave_envelope,
    wthi_lower_bound,
    wthi_optimum,
    wyner_reduction_check,
)
