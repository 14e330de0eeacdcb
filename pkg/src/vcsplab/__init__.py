"""Exact-rational toolkit for finite-valued constraint languages.

Modules:

- ``rationals``, ``foundation``: exact numbers and the core vocabulary
  (domains, cost functions, languages, instances, operations).
- ``exactlp``: certified exact-rational LP solver and the strict/weak
  alternative.
- ``langops``, ``coremod``: expressibility, restriction, pinning, the
  fractional-polymorphism checker, and core detection/extraction.
- ``classifier``: the tractable / NP-hard dichotomy pipeline with verified
  witnesses.
- ``blpsolver``: the basic LP relaxation, extraction, and the brute-force
  oracle.
- ``markovlift``: Markov-chain construction of symmetric fractional
  polymorphisms and arity lifting.
- ``jsonio``, ``cli``: deterministic JSON wire formats and the command line.
"""

__version__ = "1.0.0"

from .foundation import (  # noqa: F401
    Constraint,
    CostFunction,
    Domain,
    FractionalOperation,
    Operation,
    ValuedLanguage,
    VcspInstance,
    instance_value,
)
from .errors import (  # noqa: F401
    CapExceeded,
    InconclusiveUnderCap,
    InternalInconsistency,
    VcspError,
    VerificationError,
)
