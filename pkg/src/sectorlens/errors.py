"""Exception taxonomy shared across the package."""


class ContractViolation(ValueError):
    """An input broke a documented precondition."""


class CapabilityError(RuntimeError):
    """The request is valid but outside the supported size/feature range."""


class InternalConsistencyError(RuntimeError):
    """A quantity that must hold by construction failed its self-check."""


class CertificationError(RuntimeError):
    """An exact certificate (LP bound, dual witness) failed verification."""
