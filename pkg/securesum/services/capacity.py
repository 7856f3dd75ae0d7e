from fractions import Fraction
from math import comb
from typing import Dict

from securesum.domain.audit import CapacityRegion, RateReport
from securesum.domain.scheme import SchemeKind, SchemeParams
from securesum.exceptions import CapacityBoundsError


def check_bounds(K: int, T: int) -> None:
    if K < 2:
        raise CapacityBoundsError(f"secure summation needs K >= 2 users, got K={K}")
    if not 0 <= T <= K - 2:
        raise CapacityBoundsError(f"colluding set size T={T} outside [0, K-2={K - 2}]")


def capacity_coded(K: int, T: int) -> CapacityRegion:
    """
    With arbitrarily coded keys: R >= 1, R_Z >= 1, R_ZΣ >= K-1, whatever T is.
    """
    check_bounds(K, T)
    return CapacityRegion(
        SchemeKind.CODED.value,
        True,
        {"R": Fraction(1), "R_Z": Fraction(1), "R_ZΣ": Fraction(K - 1)},
    )


def capacity_groupwise(K: int, T: int, G: int) -> CapacityRegion:
    """
    With symmetric groupwise keys of group size G: empty when G > K-T, otherwise
    R >= 1 and R_S >= (K-T-1) / C(K-T, G).
    """
    check_bounds(K, T)
    if not 1 <= G <= K:
        raise CapacityBoundsError(f"group size G={G} outside [1, K={K}]")
    if G > K - T:
        return CapacityRegion.infeasible(SchemeKind.SYMMETRIC.value)
    return CapacityRegion(
        SchemeKind.SYMMETRIC.value,
        True,
        {"R": Fraction(1), "R_S": Fraction(K - T - 1, comb(K - T, G))},
    )


def achieved_rates(params: SchemeParams) -> Dict[str, Fraction]:
    L = params.L
    rates = {"R": Fraction(params.L_X, L)}
    if params.kind is SchemeKind.CODED:
        assert params.L_Z is not None and params.L_Zsum is not None
        rates["R_Z"] = Fraction(params.L_Z, L)
        rates["R_ZΣ"] = Fraction(params.L_Zsum, L)
    elif params.L_S is not None:
        rates["R_S"] = Fraction(params.L_S, L)
    return rates


def rate_report(params: SchemeParams) -> RateReport:
    """
    Achieved rates against the applicable capacity region. General schemes only get
    the R coordinate bounded, since a key hypergraph only decides feasibility.
    """
    achieved = achieved_rates(params)
    if params.kind is SchemeKind.CODED:
        bounds = dict(capacity_coded(params.K, params.T).bounds)
    elif params.kind is SchemeKind.SYMMETRIC:
        assert params.G is not None
        bounds = dict(capacity_groupwise(params.K, params.T, params.G).bounds)
    else:
        bounds = {"R": Fraction(1)}
    optimal = {k: achieved[k] == v for k, v in bounds.items()}
    return RateReport(achieved, bounds, optimal)
