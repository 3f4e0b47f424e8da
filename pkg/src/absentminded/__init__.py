"""Exact, symbolic, asymptotic and simulated statistics of the absent-minded
passengers seating problem: ``n`` seats, the first ``k`` passengers sit
uniformly at random, everyone else takes their own seat if free and a uniform
free seat otherwise.  The random variable is the number of passengers who end
up in a seat that is not theirs.
"""

from .distribution import GeneratingPolynomial, enumerate_exact, generating_polynomial, probability
from .errors import CrossCheckError, DependencyError, DomainError, PrecisionError, SizeError
from .moments import MomentTable, big_n_moments, moment_pipeline

__all__ = [
    "GeneratingPolynomial",
    "generating_polynomial",
    "probability",
    "enumerate_exact",
    "MomentTable",
    "moment_pipeline",
    "big_n_moments",
    "DomainError",
    "SizeError",
    "PrecisionError",
    "CrossCheckError",
    "DependencyError",
]
