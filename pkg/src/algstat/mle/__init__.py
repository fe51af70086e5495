from algstat.mle.determinantal import det_critical_points
from algstat.mle.em import EMResult, em_low_rank, equal_up_to_simultaneous_permutation
from algstat.mle.likelihood import (
    DomainError,
    check_critical,
    hardy_weinberg_mle,
    independence_mle,
    log_likelihood,
    log_likelihood_grad,
)
from algstat.mle.plane import (
    CriticalSet,
    DegenerateInputError,
    hardy_weinberg_curve,
    ml_degree_plane,
    plane_critical_system,
    random_dense_curve,
    special_quadric,
)
