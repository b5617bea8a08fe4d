"""Grid -> domain -> entity hierarchy and relationship classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from gridtrust.errors import ConfigError


class RelationKind(enum.Enum):
    INTRA_DOMAIN_INTRA_GRID = "IntraDomainIntraGrid"
    INTER_DOMAIN_INTRA_GRID = "InterDomainIntraGrid"
    INTER_GRID = "InterGrid"


@dataclass(frozen=True)
class Topology:
    """Immutable membership tables.

    ``domains`` maps domain id to grid id and ``entities`` maps entity id to
    domain id. Entity order is preserved (insertion order of ``entities``) and
    is the canonical iteration order everywhere in the simulator.
    """

    grids: tuple[str, ...]
    domains: Mapping[str, str]
    entities: Mapping[str, str]
    _order: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "grids", tuple(self.grids))
        object.__setattr__(self, "domains", dict(self.domains))
        object.__setattr__(self, "entities", dict(self.entities))
        problems = []
        known_grids = set(self.grids)
        if len(known_grids) != len(self.grids):
            problems.append(("topology.grids", "duplicate grid id"))
        for dom, grid in self.domains.items():
            if grid not in known_grids:
                problems.append(("topology.domain", f"domain {dom!r} refers to unknown grid {grid!r}"))
        for ent, dom in self.entities.items():
            if dom not in self.domains:
                problems.append(("topology.entity", f"entity {ent!r} refers to unknown domain {dom!r}"))
        if problems:
            raise ConfigError(problems)
        object.__setattr__(self, "_order", {e: i for i, e in enumerate(self.entities)})

    @classmethod
    def from_nested(cls, layout: Mapping[str, Mapping[str, Iterable[str]]]) -> "Topology":
        """Build from ``{grid: {domain: [entity, ...]}}``."""
        domains: dict[str, str] = {}
        entities: dict[str, str] = {}
        problems = []
        for grid, doms in layout.items():
            for dom, members in (doms or {}).items():
                if dom in domains:
                    problems.append(("topology.domain", f"domain {dom!r} appears in more than one grid"))
                domains[dom] = grid
                for ent in members or ():
                    ent = str(ent)
                    if ent in entities:
                        problems.append(("topology.entity", f"entity {ent!r} placed in more than one domain"))
                    entities[ent] = dom
        if problems:
            raise ConfigError(problems)
        return cls(grids=tuple(layout), domains=domains, entities=entities)

    def domain_of(self, entity: str) -> str:
        try:
            return self.entities[entity]
        except KeyError:
            raise KeyError(f"unknown entity {entity!r}") from None

    def grid_of(self, entity: str) -> str:
        return self.domains[self.domain_of(entity)]

    def members(self, domain: str) -> list[str]:
        return [e for e, d in self.entities.items() if d == domain]

    def sort(self, ids: Iterable[str]) -> list[str]:
        """Return ``ids`` in canonical entity order."""
        return sorted(ids, key=self._order.__getitem__)

    def __contains__(self, entity: object) -> bool:
        return entity in self.entities

    def __len__(self) -> int:
        return len(self.entities)


def classify_relationship(topology: Topology, a: str, b: str) -> RelationKind:
    dom_a, dom_b = topology.domain_of(a), topology.domain_of(b)
    if dom_a == dom_b:
        return RelationKind.INTRA_DOMAIN_INTRA_GRID
    if topology.domains[dom_a] == topology.domains[dom_b]:
        return RelationKind.INTER_DOMAIN_INTRA_GRID
    return RelationKind.INTER_GRID


def recommenders_of(topology: Topology, evaluator: str, subject: str, kind: RelationKind) -> set[str]:
    """Entities, other than ``evaluator`` and ``subject``, related to ``evaluator`` by ``kind``."""
    if evaluator == subject:
        raise ValueError("evaluator and subject must differ")
    topology.domain_of(subject)
    return {
        e
        for e in topology.entities
        if e != evaluator and e != subject and classify_relationship(topology, evaluator, e) is kind
    }


def same_domain_pool(topology: Topology, evaluator: str, subject: str) -> set[str]:
    """Recommenders feeding the same-domain indirect trust term."""
    return recommenders_of(topology, evaluator, subject, RelationKind.INTRA_DOMAIN_INTRA_GRID)


def other_domain_pool(topology: Topology, evaluator: str, subject: str) -> set[str]:
    """Recommenders outside the evaluator's domain, whether in its grid or another."""
    return recommenders_of(topology, evaluator, subject, RelationKind.INTER_DOMAIN_INTRA_GRID) | recommenders_of(
        topology, evaluator, subject, RelationKind.INTER_GRID
    )
