"""
Test suite for Tree Lab.

This package contains:
- unit: Unit tests per package (schedule, tree, coalescent, trail, gwve, compare, cli, core)
- integration: Exact oracles, Monte Carlo convergence checks and CLI determinism
"""
