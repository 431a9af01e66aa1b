"""Finite-volume wave-propagation solver for shock waves crossing fixed
interfaces between gas and nearly incompressible materials.

Compressible Euler equations closed by the Tammann (stiffened gas) EOS,
solved in 1D and 2D-axisymmetric form on uniform and mapped quadrilateral
grids, with exact and HLLC Riemann solvers coupled through a Lagrangian
shift at material interfaces.
"""

__version__ = "0.1.0"
