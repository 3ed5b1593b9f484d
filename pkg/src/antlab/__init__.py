"""Computational lab for primes of the form a^2 + p^4.

Submodules: primes, arith, constants, sequences, sieve, dirichlet, gaussian
and lab (experiments and the ``antlab`` command).
"""

from .errors import AntlabError, CapacityError, DomainError, PreconditionError

__version__ = "0.1.0"

__all__ = ["AntlabError", "CapacityError", "DomainError", "PreconditionError", "__version__"]
