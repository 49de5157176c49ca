"""Constant-mean-curvature surface machinery.

Modules: elliptic (Jacobi functions and Legendre/Carlson integrals),
lingeo (three-space vector algebra in both signatures), kenmotsu
(Gauss-map representation and reconstruction), helicoid (the
screw-invariant cmc family), delaunay_lorentz (rotational cmc surfaces
in Minkowski space), period (closing the companion into a cylinder),
mesh_io (sampling and export), cli (the cmcsurf command).
"""

__version__ = "0.1.0"

from . import delaunay_lorentz, elliptic, errors, helicoid, kenmotsu, \
    lingeo, mesh_io, period  # noqa: F401
