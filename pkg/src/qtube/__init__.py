"""Tube geometry and spectral-gap certificates for immersed manifolds.

Builds order-k tubular neighborhoods of manifolds immersed in Euclidean
space, verifies the underlying metric and curvature identities, evaluates
variational certificates for the existence of discrete Dirichlet spectrum,
and cross-checks every certified gap against a discretized eigensolver.
"""

__version__ = "0.1.0"
