"""qel: numerical workbench for the energetics of open quantum systems.

Four engines plus a scenario-driven CLI:

* :mod:`qel.decoherence` -- closed-form spatial decoherence rates and
  coherence decay for collisional and blackbody channels.
* :mod:`qel.bec` -- condensate atom-number loss (one-body + three-body)
  with analytic, numeric and inverse solvers.
* :mod:`qel.gaussian` -- conditional/unconditional Gaussian dynamics,
  Wigner entropy rates, entropy flux/production, measurement information.
* :mod:`qel.jc` -- Jaynes-Cummings measurement-based cooling, plus the
  sideband and feedback cooling closed forms.

The Gaussian integrators run on a compiled kernel when available and fall
back to numpy otherwise; ``qel.gaussian.BACKEND`` names the selection.
"""

__version__ = "0.1.0"

from . import bec, decoherence, gaussian, jc  # noqa: F401
from .errors import DomainError, IntegrationError, ScenarioError, TruncationError  # noqa: F401
