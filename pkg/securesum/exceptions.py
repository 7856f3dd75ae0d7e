class Error(Exception):
    pass


class FieldMismatchError(Error):
    def __init__(self, left, right):
        super().__init__(f"cannot combine elements of F_{left.q} and F_{right.q}")


class NotPrimeError(Error, ValueError):
    pass


class DivisionByZeroError(Error, ZeroDivisionError):
    pass


class DimensionMismatchError(Error, ValueError):
    pass


class RaggedLayoutError(DimensionMismatchError):
    pass


class HypergraphError(Error, ValueError):
    pass


class CapacityBoundsError(Error, ValueError):
    pass


class InfeasibleError(Error):
    pass


class CertificateNotFoundError(Error):
    def __init__(self, attempts: int, q: int, m: int):
        super().__init__(
            f"no precoding passed every rank certificate after {attempts} attempts "
            f"over F_{q} with block multiplier m={m}; try a larger q or m"
        )
        self.attempts = attempts


class StateSpaceTooLargeError(Error):
    def __init__(self, states: int, limit: int):
        super().__init__(
            f"exhaustive enumeration needs {states} states, above the limit of {limit}"
        )
        self.states = states
        self.limit = limit


class SchemaError(Error, ValueError):
    pass


class ConfigNotFoundError(Error):
    def __init__(self, path):
        super().__init__(f"instance config file {path} does not exist")


class MissingSeedError(Error):
    def __init__(self):
        super().__init__(
            "a seed is required for randomized generation, set [instance] seed "
            "or the SECURE_SUM_SEED environment variable"
        )


class TranscriptIntegrityError(Error):
    pass
