"""Numerical and exact-arithmetic toolkit for free-fermion mutual information.

Subpackages:

  relent    finite-dimensional entropy engine (density matrices, relative
            entropy, conditional expectations, entropy/index gap)
  tau       pinching and the tau operator, spectral and resolvent-integral
            routes, trace bounds
  spectral  singular-value inequalities and smooth-kernel decay diagnostics
  fermion   discretized vacuum covariance and the mutual information pipeline
  lattice   exact rational embeddings of positive integral lattices
  audits    randomized inequality audits
  cli       command-line front end (`araki-mi`)
"""

__version__ = "0.1.0"
