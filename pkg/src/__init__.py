"""
Tree Lab - Uniform random trees with fixed degrees and heights

This package samples uniform trees from a degree schedule, traces the
genealogies of uniform vertices, simulates their continuum growth-coalescent
limits and compares both sides with convergence diagnostics.

Modules:
    core: Shared models, exceptions, configuration and random streams
    schedule: Degree schedules, measures and tightness diagnostics
    tree: Tree sampler, queries, enumeration and export
    coalescent: Discrete and continuum coalescents
    trail: k-trails and leaf-tightness curves
    gwve: Galton-Watson processes in varying environment
    compare: Two-sample statistics and convergence reports
    cli: Command-line entry point
"""

__version__ = "0.1.0"
__author__ = "Tree Lab Team"
