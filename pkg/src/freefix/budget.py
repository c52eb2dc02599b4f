"""Search caps shared by every bounded procedure."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Budget:
    max_len: int = 8                # word length for fixed-word and witness searches
    fixed_len_cap: int = 10         # hard cap on any fixed-word enumeration
    fringe_cap: int = 8             # max vertices of a graph whose fringe is enumerated
    level_vertices: int = 50_000    # Whitehead level-graph size
    level_length: int = 16          # max minimal total length for level graphs
    max_rank: int = 3               # ambient rank for stabilizer computations
    ff_max_rank: int = 6            # ambient rank for free-factor descent
    retraction_bound: int = 10      # max image length in the retraction search
    retraction_nodes: int = 200_000
    max_iter: int = 10              # stable-image iterations

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ValueError(f"budget cap {f.name} must be positive")

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> Budget:
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def but(self, **changes) -> Budget:
        return replace(self, **changes)


DEFAULT = Budget()
