"""Numerical toolkit for singular Lagrangian fibrations of disk cotangent bundles.

Subpackages: ``numerics`` (elliptic integrals, quadrature, roots, Monte
Carlo), ``diagram`` (data model, cut-transfer maps, file output) and
``embed`` (ball embeddings and simplex fitting). The modules
``revolution``, ``ellipsoid3`` and ``bidisk`` compute the base diagrams;
``verification`` holds the oracle checks and ``cli`` the ``atf`` command.
"""
from .exceptions import ConvergenceError, DomainError, FormulaDiscrepancy

__version__ = "0.1.0"

__all__ = ["ConvergenceError", "DomainError", "FormulaDiscrepancy", "__version__"]
