"""Exact cohomology of finite abelian groups.

Public entry points live in :mod:`cohomolab.engine` (computations),
:mod:`cohomolab.closed_forms` (rank formulas and comparison reports) and
:mod:`cohomolab.cli` (command line).
"""

__version__ = "0.1.0"
