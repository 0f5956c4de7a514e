"""Desk-scale algorithmic information experiments: truth tables, threshold
reductions, a toy prefix-free machine and Bernoulli distinguishability."""

__version__ = "0.1.0"
