"""Numerical workbench for linear ill-posed inverse problems.

Subpackages:

- :mod:`illposed.regcore` -- SVD machinery: generalized inverse, Tikhonov,
  truncated SVD, spectral windows, regularization-parameter selection.
- :mod:`illposed.fredholm` -- second-kind integral-equation solvers.
- :mod:`illposed.specfun` -- Bessel functions, derivative zeros, disc rules.
- :mod:`illposed.eit` -- impedance tomography on the unit disc (FEM forward
  solver plus single-measurement and linearized reconstructions).
- :mod:`illposed.condensates` -- power-correction extraction from hadronic
  spectral data by the constrained functional method.
- :mod:`illposed.chisq` -- chi-square densities, p-values, confidence levels.
"""

__version__ = "0.1.0"
