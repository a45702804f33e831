"""Invariants and covariants of cyclic p-groups in characteristic p.

Exact arithmetic over F_p for the polynomial action of G = Z/p on
V = direct sum of Jordan blocks: the sigma/Delta/transfer operators,
norms and norm division, covariants (equivariants into a second
representation W) with their chain representation, minimal generator
degrees by graded linear algebra, and the closed-form degree bounds the
computations are verified against.
"""

__version__ = "0.1.0"

from .modules import ModuleSpec, module_spec

__all__ = ["ModuleSpec", "module_spec", "__version__"]
