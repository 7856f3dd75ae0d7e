from multiprocessing import cpu_count
from pathlib import Path
from typing import List, Optional

import attr

from securesum.domain.dataclass import dataclass


_int = attr.validators.instance_of(int)
_optional_int = attr.validators.optional(_int)
_optional_str = attr.validators.optional(attr.validators.instance_of(str))
_user_sets = attr.validators.optional(
    attr.validators.deep_iterable(
        member_validator=attr.validators.deep_iterable(
            member_validator=_int, iterable_validator=attr.validators.instance_of(list)
        ),
        iterable_validator=attr.validators.instance_of(list),
    )
)


@dataclass
class ProjectConfig:
    _path: Path
    """
    Directory the config file lives in. Relative paths are resolved against it.
    """

    loglevel: str = attr.ib(default="INFO", validator=attr.validators.instance_of(str))
    """
    Log level of the CLI.
    """

    output_dir: str = attr.ib(default=".", validator=attr.validators.instance_of(str))
    """
    Where artifacts are written when a command is not given an explicit path.
    """

    @property
    def output_path(self) -> Path:
        return self._path / self.output_dir


@dataclass
class InstanceConfig:
    _path: Path
    """
    Directory the config file lives in.
    """

    kind: str = attr.ib(
        default="symmetric",
        validator=attr.validators.in_(["coded", "symmetric", "general"]),
    )
    """
    Key regime: arbitrarily coded keys, symmetric groupwise keys or general groupwise
    keys on a hypergraph.
    """

    K: Optional[int] = attr.ib(default=None, validator=_optional_int)
    """
    Number of users. Taken from the hypergraph for the general kind.
    """

    T: int = attr.ib(default=0, validator=_int)
    """
    Largest colluding set size (coded and symmetric kinds).
    """

    G: Optional[int] = attr.ib(default=None, validator=_optional_int)
    """
    Group size of the symmetric groupwise keys.
    """

    L: int = attr.ib(default=1, validator=_int)
    """
    Input length for the coded kind.
    """

    q: int = attr.ib(default=251, validator=_int)
    """
    Prime field size.
    """

    m: int = attr.ib(default=1, validator=_int)
    """
    Block multiplier of the symmetric construction.
    """

    seed: Optional[int] = attr.ib(default=None, validator=_optional_int)
    """
    Mandatory for randomized generation. Overridden by SECURE_SUM_SEED.
    """

    max_attempts: int = attr.ib(default=64, validator=_int)
    """
    Resampling budget for certified symmetric precoding.
    """

    edges: Optional[List[List[int]]] = attr.ib(default=None, validator=_user_sets)
    """
    Key hypergraph edges, 1-based (general kind).
    """

    collusion: Optional[List[List[int]]] = attr.ib(default=None, validator=_user_sets)
    """
    Colluding sets to audit (general kind). Defaults to [[]], the server alone.
    """

    fixture: Optional[str] = attr.ib(default=None, validator=_optional_str)
    """
    JSON file with externally supplied symmetric precoding matrices.
    """

    pad_keys: bool = attr.ib(default=False, validator=attr.validators.instance_of(bool))
    """
    Zero pad general edge keys to the longest key length.
    """

    @property
    def fixture_path(self) -> Optional[Path]:
        if self.fixture is None:
            return None
        return self._path / self.fixture


@dataclass
class AuditConfig:
    mi_limit: int = attr.ib(default=1 << 24, validator=_int)
    """
    Largest joint state count brute-force mutual information may enumerate.
    """

    with_mi: bool = attr.ib(default=False, validator=attr.validators.instance_of(bool))
    """
    Run exhaustive mutual information checks alongside the rank certificates.
    """

    workers: int = attr.ib(default=min(4, cpu_count()), validator=_int)
    """
    Threads used for per-colluding-set checks and MI shards.
    """
