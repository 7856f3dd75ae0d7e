from fractions import Fraction
from typing import Dict, Optional, Tuple

from securesum.domain.dataclass import dataclass
from securesum.domain.hypergraph import UserSet


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class CapacityRegion:
    """
    Lower bounds of an optimal rate region, keyed by coordinate name
    (``R``, ``R_Z``, ``R_ZΣ`` or ``R``, ``R_S``). An infeasible region has no bounds.
    """

    kind: str
    feasible: bool
    bounds: Dict[str, Fraction]

    @classmethod
    def infeasible(cls, kind: str) -> "CapacityRegion":
        return cls(kind, False, {})

    def describe(self) -> str:
        if not self.feasible:
            return "INFEASIBLE"
        return ", ".join(
            f"{k} ≥ {format_rational(v)}" for k, v in self.bounds.items()
        )


@dataclass(frozen=True)
class RateReport:
    achieved: Dict[str, Fraction]

    bounds: Dict[str, Fraction]
    """
    Capacity lower bounds for the coordinates the scheme kind has a known region for.
    """

    optimal: Dict[str, bool]
    """
    Per bounded coordinate, whether the achieved rate meets the bound with equality.
    """

    def respects_converse(self) -> bool:
        return all(self.achieved[k] >= v for k, v in self.bounds.items())

    def is_optimal(self) -> bool:
        return all(self.optimal.values())


@dataclass(frozen=True)
class RankCertificate:
    """
    Rank the honest messages must reach for colluding set ``T`` and the rank they
    reach. Both ranks are ``None`` when computing them raised, and ``error`` says why.
    """

    T: UserSet
    required: Optional[int]
    found: Optional[int]
    passed: bool
    error: Optional[str] = None

    def __attrs_post_init__(self) -> None:
        if self.passed != (self.found is not None and self.found == self.required):
            raise ValueError(
                f"certificate marked passed={self.passed} with rank {self.found} "
                f"against {self.required} required"
            )


@dataclass(frozen=True)
class MICheck:
    T: UserSet

    state_space: int
    """
    Number of equally likely (inputs, source key) states enumerated.
    """

    mi_value: Optional[Fraction] = None
    """
    Exact conditional mutual information in q-ary units, when every fiber is uniform.
    """

    mi_float: Optional[float] = None
    """
    Double precision value, always filled when the enumeration ran.
    """

    error: Optional[str] = None

    @property
    def exact(self) -> bool:
        return self.mi_value is not None

    @property
    def leaks(self) -> bool:
        if self.mi_value is not None:
            return self.mi_value != 0
        return self.mi_float is not None and self.mi_float > 0


@dataclass(frozen=True)
class AuditReport:
    per_collusion: Tuple[RankCertificate, ...]
    mi_checks: Tuple[MICheck, ...] = ()
    rates: Optional[RateReport] = None

    zero_sum: bool = True
    """
    Whether the precoding of every key group sums to zero.
    """

    @property
    def all_pass(self) -> bool:
        return self.zero_sum and all(c.passed for c in self.per_collusion)

    @property
    def secure(self) -> bool:
        return self.all_pass and not any(c.leaks for c in self.mi_checks)

    def failures(self) -> Tuple[RankCertificate, ...]:
        return tuple(c for c in self.per_collusion if not c.passed)
