"""Exact lattice model of the rank-2 affine building over (Q, v_p).

Vertices are p-local lattice classes of Q^3, isometries are invertible
rational 3x3 matrices, and every geometric decision (segment types, germ
opposition, sector membership, eigenflags) is made in exact arithmetic.
On top of the geometry sit a seeded random-walk engine with Monte Carlo
statistics, ping-pong freeness certificates and a local-to-global
fixed-point search.
"""

__version__ = "0.1.0"

from .kernels import backend as kernel_backend  # noqa: F401
