"""All tunable constants in one place, loadable from TOML.

Example ``cfg.toml``::

    seed = 3
    c_pack = 2.0

    [charge_constants]
    c_slot_mst = 2
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


@dataclass
class Config:
    seed: int = 0
    # graph and network
    weight_exponent: int = 4
    bandwidth: int = 1
    audit_bandwidth: bool = False
    # certificate
    tau: float = 3.0
    certificate_eps: float = 0.5
    lambda_oracle_exact: bool = False
    # decomposition
    phi_constant: float = 1000.0
    walk_seeds_factor: float = 2.0
    walk_max_steps: int = 256
    # tree packing
    c_skel: float = 4.0
    c_pack: float = 2.0
    # pipeline driver
    msgc_min_n: int = 128
    force_path: str = ""          # "", "msgc", "direct" or "lambda_small"
    simulate_protocols: bool = False
    simulate_max_trees: int = 0   # 0 = every tree
    charge_constants: dict = field(default_factory=dict)

    def charge_c(self, label: str) -> float:
        return float(self.charge_constants.get(label, 1))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def load_config(path=None) -> Config:
    if path is None:
        return Config()
    with open(Path(path), "rb") as fh:
        return Config.from_dict(tomllib.load(fh))


def dump_toml(cfg: Config) -> str:
    """Minimal TOML writer for :class:`Config` (flat scalars plus one table)."""
    lines = []
    tables = []
    for k, v in cfg.to_dict().items():
        if isinstance(v, dict):
            tables.append((k, v))
        elif isinstance(v, bool):
            lines.append(f"{k} = {'true' if v else 'false'}")
        elif isinstance(v, str):
            lines.append(f'{k} = "{v}"')
        else:
            lines.append(f"{k} = {v!r}")
    for name, table in tables:
        lines.append(f"\n[{name}]")
        lines.extend(f"{k} = {v!r}" for k, v in table.items())
    return "\n".join(lines) + "\n"
