"""Exception types shared across the package."""

from __future__ import annotations


class PfafflabError(Exception):
    """Base class for all library errors."""


class MissingRule(PfafflabError):
    """A generator has no derivation rule for the requested derivation."""


class OddSize(PfafflabError):
    """Pfaffian requested for an odd-size matrix."""


class SizeLimit(PfafflabError):
    """Input exceeds the hard size cap of a brute-force routine."""


class OddParity(PfafflabError):
    """Tau-function index with odd total degree."""


class EvenParity(PfafflabError):
    """Linear-form index with even total degree."""


class BoundExceeded(PfafflabError):
    """A moment degree outside the materialized bounds was requested."""


class InvalidSpec(PfafflabError):
    """Malformed instance specification."""


class DegenerateInstance(PfafflabError):
    """Concrete instance too degenerate for the requested construction."""


class NotNormal(PfafflabError):
    """Moment system singular at the requested multi-index."""


class UnknownEquation(PfafflabError):
    """Unrecognized equation identifier."""


class ConfigError(PfafflabError):
    """Invalid suite configuration."""
