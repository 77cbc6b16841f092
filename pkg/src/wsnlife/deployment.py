"""Initial node placement: uniform random positions with the sink at the center."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .model import (
    SINK_ID,
    DeploymentArea,
    EnergyParams,
    NetworkState,
    Node,
    Point,
    RadioParams,
    Role,
    Topology,
)


@dataclass(frozen=True)
class DeploymentConfig:
    node_count: int = 300
    area: DeploymentArea = field(default_factory=lambda: DeploymentArea(1074.0, 660.0))
    seed: int = 1

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be at least 1 (the sink)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def deploy(
    config: DeploymentConfig, radio: RadioParams, energy: EnergyParams
) -> NetworkState:
    """Place node 0 (the sink) at the area center and the rest uniformly at random.

    The generator is Python's Mersenne Twister seeded with config.seed, drawn
    through random() only, node by node, x before y. That sequence is pinned:
    placements must be bit-stable across runs, so the generator is never
    changed silently.
    """
    rng = random.Random(config.seed)
    width, height = config.area.width, config.area.height
    nodes = [
        Node(
            id=SINK_ID,
            position=Point(width / 2.0, height / 2.0),
            energy=energy.initial_energy,
            role=Role.SINK,
        )
    ]
    for node_id in range(1, config.node_count):
        x = rng.random() * width
        y = rng.random() * height
        nodes.append(Node(id=node_id, position=Point(x, y), energy=energy.initial_energy))
    empty = Topology(active_set={SINK_ID}, parent={}, root=SINK_ID)
    return NetworkState(
        nodes=nodes, area=config.area, radio=radio, energy=energy, topology=empty, rng=rng
    )
