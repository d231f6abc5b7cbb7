"""Exception and warning types shared across the library."""


class SymplecticDomainError(ValueError):
    """Base class for domain errors on symplectic/Hamiltonian inputs."""


class OddDimensionError(SymplecticDomainError):
    """Matrix dimension is odd; symplectic structures need even dimension."""


class DimensionMismatchError(SymplecticDomainError):
    """Operands have inconsistent shapes."""


class NotSymplecticError(SymplecticDomainError):
    """Matrix fails the symplectic relation beyond tolerance."""


class NotHamiltonianError(SymplecticDomainError):
    """Omega @ X is asymmetric beyond tolerance, so X is not in sp(2n)."""


class NotEllipticError(SymplecticDomainError):
    """Matrix is outside the positively elliptic region."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"not positively elliptic: {reason}")


class SignatureDegenerateError(SymplecticDomainError):
    """A Krein Gram matrix has an eigenvalue at zero within tolerance."""


class OutsideConeError(SymplecticDomainError):
    """Hamiltonian direction lies outside the closed causal cone."""


class NotConnectableError(SymplecticDomainError):
    """No admissible geodesic connection inside the elliptic region."""


class NotCausalError(SymplecticDomainError):
    """Connecting direction exists but is not cone-admissible."""


class ZeroDirectionError(SymplecticDomainError):
    """Direction is numerically zero; the flow is constant."""


class DriftExceededError(RuntimeError):
    """Accumulated symplecticity drift along a path exceeded the bound."""


class MatchingAmbiguousError(RuntimeError):
    """Eigenphase matching stayed ambiguous after adaptive refinement."""


class IllConditionedWarning(UserWarning):
    """Result is valid but computed near the region boundary."""
