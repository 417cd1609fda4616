"""spinorbit: validated numerics for the spin-orbit rotation model.

Rigorous interval arithmetic, a Taylor-Lohner validated ODE integrator, a
rigorous Poincare return map on the section {true anomaly = 0}, interval
Newton fixed-point proofs, and covering-relation certificates establishing
symbolic dynamics (topological horseshoes) for the rotation of an
ellipsoidal satellite on an eccentric Kepler orbit.
"""

__version__ = "0.1.0"

from .interval import Interval
from .model import ModelParams

__all__ = ["Interval", "ModelParams", "__version__"]
