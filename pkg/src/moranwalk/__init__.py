"""Height statistics of Moran-type random walks with resets."""
from .asymptotics import (
    BootstrapEstimate,
    MellinParams,
    RegimeError,
    TailVariant,
    bootstrap,
    coeff_asymptotic_bounded,
    coeff_asymptotic_unbounded,
    den_root_numeric,
    epsilon_first,
    epsilon_refined,
    mean_height_sum,
    mellin_direct_sum,
    mellin_main_term,
    mellin_params,
    tail_approx,
    tail_exponential,
)
from .height_stats import (
    HeightDistribution,
    height_cdf,
    height_mean,
    height_pgf,
    height_pgf_polynomial,
    height_pmf,
    height_variance,
)
from .moran_gf import (
    BinetData,
    ModelParams,
    binet_coeff,
    binet_roots,
    bounded_gf,
    sojourn_gf,
    sojourn_sequence_gf,
    unbounded_gf,
)
from .oracle import (
    SimulationResult,
    WalkModel,
    dp_bounded_weight,
    dp_total_weight,
    enumerate_walks,
    simulate,
    standard_height_pmf,
)
from .rational_gf import (
    Polynomial,
    RationalGF,
    gf_coeff,
    gf_coeffs_upto,
    gf_from_fraction,
    poly_mul,
)

__version__ = "0.1.0"
