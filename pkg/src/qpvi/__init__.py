"""Exact computer algebra for the quantized discrete Painleve VI system.

Subpackages cover the exact scalar field (scalars), quantum torus and Ore
fraction arithmetic (torus), q-Pochhammer / quantum dilogarithm calculus
(dilog), the extended affine Weyl group action (weyl), the time evolution
and its classical limit (dynamics), truncated lattice representations and
R-matrices (fock), local Lax matrices and the quantized discrete
Schlesinger equation (lax), probabilistic identity testing (oracle), and
the verification command line (cli).
"""

__version__ = "0.1.0"
