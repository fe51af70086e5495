from algstat.gaussian_ci.axioms import (
    Violation,
    enumerate_gaussoids,
    enumerate_gaussoids_naive,
    is_gaussoid,
    is_gaussoid_masks,
)
from algstat.gaussian_ci.certify import certify_witness
from algstat.gaussian_ci.covariance import (
    CovMatrix,
    NotPositiveDefinite,
    apm,
    apm_submatrix,
    gaussoid_of,
    random_pd,
    tight_faces,
)
from algstat.gaussian_ci.entropy import EntropyVector, SubmodularReport, entropy_vector, submodular_check
from algstat.gaussian_ci.fivecycle import five_cycle_experiment
from algstat.gaussian_ci.represent import RepresentationResult, find_representation
from algstat.gaussian_ci.statements import CIStatement, GaussoidCandidate, all_statements
