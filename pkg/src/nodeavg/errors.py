"""Exception types shared across the package."""


class InputError(ValueError):
    """Bad arguments or malformed input data."""


class ContractViolation(RuntimeError):
    """A caller or a node program broke an API contract."""


class ConstructionInvariantError(RuntimeError):
    """An instance does not have the structure a construction guarantees."""


class RounderContractError(RuntimeError):
    """A matching rounder returned a non-matching or too little weight."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
