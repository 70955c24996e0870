"""Greedy primal-dual online maximization of concave functions over cones,
with competitive-ratio certificates and an optimal-smoothing designer."""

__version__ = "0.1.0"

__all__ = ["__version__"]
