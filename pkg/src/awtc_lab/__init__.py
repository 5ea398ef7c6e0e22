"""Random binned codes for the binary adversarial wiretap channel.

Capacity-bound calculator, codebook construction, limited-view adversary
simulation and exact small-block secrecy metrics.
"""

from awtc_lab.errors import AwtcError, BudgetError, DomainError, FormatError, ResourceError

__version__ = "0.1.0"

__all__ = [
    "AwtcError",
    "BudgetError",
    "DomainError",
    "FormatError",
    "ResourceError",
    "__version__",
]
