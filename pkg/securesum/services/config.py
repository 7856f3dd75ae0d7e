from collections import OrderedDict
import json
import logging
import os
from pathlib import Path
from typing import Any, ClassVar, Dict, Tuple, Union

import attr
import toml

from securesum.domain.config import AuditConfig, InstanceConfig, ProjectConfig
from securesum.domain.dataclass import dataclass
from securesum.domain.hypergraph import CollusionFamily, KeyHypergraph
from securesum.exceptions import ConfigNotFoundError, HypergraphError, SchemaError


logger = logging.getLogger(__name__)

SEED_ENV_VAR = "SECURE_SUM_SEED"


def _read(path: Path) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as config_file:
        if path.suffix == ".json":
            try:
                data = json.load(config_file)
            except ValueError as e:
                raise SchemaError(f"{path} is not valid JSON: {e}")
        else:
            try:
                data = toml.load(config_file)
            except toml.TomlDecodeError as e:
                raise SchemaError(f"{path} is not valid TOML: {e}")
    if not isinstance(data, dict):
        raise SchemaError(f"{path} must hold an object at the top level")
    schema = data.pop("schema", 1)
    if schema != 1:
        raise SchemaError(f"{path} declares unsupported schema {schema!r}")
    if "instance" not in data and "edges" in data:
        # A bare hypergraph file: {"K": ..., "edges": [...], "collusion": [...]}.
        data = {"instance": dict(data, kind="general")}
    return data


@dataclass
class Config:
    CONFIG_PATH: ClassVar[str] = "SecureSum.toml"

    project: ProjectConfig
    instance: InstanceConfig
    audit: AuditConfig

    @classmethod
    def from_file(cls, path: Union[str, Path, None] = None) -> "Config":
        config_path = Path(path) if path is not None else Path(cls.CONFIG_PATH)
        if config_path.is_dir():
            config_path = config_path / cls.CONFIG_PATH
        if not config_path.exists():
            raise ConfigNotFoundError(config_path)
        config_dict = _read(config_path)
        full_path = config_path.resolve().parent
        try:
            project = ProjectConfig(full_path, **config_dict.get("project", {}))
            instance = InstanceConfig(full_path, **config_dict.get("instance", {}))
            audit = AuditConfig(**config_dict.get("audit", {}))
        except (TypeError, ValueError) as e:
            raise SchemaError(f"invalid config {config_path}: {e}")
        seed = os.environ.get(SEED_ENV_VAR)
        if seed is not None:
            try:
                instance.seed = int(seed)
            except ValueError:
                raise SchemaError(f"{SEED_ENV_VAR} must be an integer, got {seed!r}")
            logger.debug("Seed %s taken from %s", seed, SEED_ENV_VAR)
        return cls(project, instance, audit)

    def to_file(self, path: Union[str, Path, None] = None) -> Path:
        config_path = Path(path) if path is not None else Path(self.CONFIG_PATH)
        config_dict = attr.asdict(
            self,
            recurse=True,
            dict_factory=OrderedDict,
            filter=lambda attribute, value: not attribute.name.startswith("_")
            and value is not None,
        )
        with open(config_path, "w", encoding="utf-8") as config_file:
            if config_path.suffix == ".json":
                json.dump(config_dict, config_file, indent=2, sort_keys=True)
            else:
                toml.dump(config_dict, config_file)
        return config_path


def hypergraph_from_instance(
    instance: InstanceConfig,
) -> Tuple[KeyHypergraph, CollusionFamily]:
    if instance.edges is None:
        raise SchemaError("a general instance needs an 'edges' list")
    if instance.K is None:
        raise SchemaError("a general instance needs the user count 'K'")
    try:
        graph = KeyHypergraph(instance.K, instance.edges)
        family = CollusionFamily(
            instance.K, instance.collusion if instance.collusion is not None else [[]]
        )
    except HypergraphError as e:
        raise SchemaError(str(e))
    return graph, family
