"""Coupled simulated annealing toolkit: CSA, PO-CSA, benchmarks and the experiment harness."""

__version__ = "1.0.0"
