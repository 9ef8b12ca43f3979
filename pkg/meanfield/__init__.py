"""
Mean-field particle laboratory.

Simulates first-order N-particle systems with singular non-attractive
kernels, solves the mean-field limit with a mollified blob method and
checks the convergence statements numerically.
"""

__version__ = "0.4.0"
