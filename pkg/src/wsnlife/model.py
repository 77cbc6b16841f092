"""Shared domain types: nodes, parameters, topology, and the network state container."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SINK_ID = 0


class Life(Enum):
    ALIVE = "alive"
    DEAD = "dead"


class Role(Enum):
    SINK = "sink"
    ACTIVE = "active"
    SLEEPING = "sleeping"


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("coordinates must be finite")


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two positions, in meters."""
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class DeploymentArea:
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("area dimensions must be positive")


@dataclass(frozen=True)
class RadioParams:
    """Radio front-end constants plus the fixed communication and sensing radii."""

    tx_power: float = 1.0
    gain_tx: float = 1.0
    gain_rx: float = 1.0
    height_tx: float = 1.0
    height_rx: float = 1.0
    transceiver_constant: float = 1.0
    communication_radius: float = 100.0
    sensing_radius: float = 20.0

    def __post_init__(self):
        for name, value in (
            ("tx_power", self.tx_power),
            ("gain_tx", self.gain_tx),
            ("gain_rx", self.gain_rx),
            ("height_tx", self.height_tx),
            ("height_rx", self.height_rx),
            ("transceiver_constant", self.transceiver_constant),
            ("communication_radius", self.communication_radius),
            ("sensing_radius", self.sensing_radius),
        ):
            if not value > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class EnergyParams:
    """First-order radio dissipation constants and the per-node battery budget.

    elec_energy_per_bit is spent in transceiver electronics on both ends of a
    hop; amp_energy_per_bit_m2 is spent in the transmit amplifier and scales
    with the square of the hop distance.
    """

    elec_energy_per_bit: float = 50e-9
    amp_energy_per_bit_m2: float = 10e-12
    initial_energy: float = 1.0
    control_packet_bits: int = 128
    data_packet_bits: int = 1000

    def __post_init__(self):
        if not self.elec_energy_per_bit > 0:
            raise ValueError("elec_energy_per_bit must be positive")
        if not self.amp_energy_per_bit_m2 > 0:
            raise ValueError("amp_energy_per_bit_m2 must be positive")
        if not self.initial_energy > 0:
            raise ValueError("initial_energy must be positive")
        if self.control_packet_bits < 1 or self.data_packet_bits < 1:
            raise ValueError("packet sizes must be at least 1 bit")


@dataclass(frozen=True)
class SensingParams:
    """Probabilistic sensing model: certain detection inside
    sensing_radius - uncertainty_radius, exponential decay with rate
    decay_rate and exponent decay_exponent across the uncertainty band,
    nothing beyond it. A location counts as sensed when the combined
    detection probability reaches detection_threshold."""

    uncertainty_radius: float = 2.0
    decay_rate: float = 0.5
    decay_exponent: float = 1.0
    detection_threshold: float = 0.5

    def __post_init__(self):
        if self.uncertainty_radius < 0:
            raise ValueError("uncertainty_radius must be non-negative")
        if not self.decay_rate > 0:
            raise ValueError("decay_rate must be positive")
        if not self.decay_exponent > 0:
            raise ValueError("decay_exponent must be positive")
        if not 0 < self.detection_threshold < 1:
            raise ValueError("detection_threshold must lie in (0, 1)")


@dataclass
class Node:
    id: int
    position: Point
    energy: float
    life: Life = Life.ALIVE
    role: Role = Role.SLEEPING

    @property
    def alive(self) -> bool:
        return self.life is Life.ALIVE


@dataclass
class Topology:
    """A reduced topology: a tree rooted at the sink.

    active_set holds the relays (sink included); parent maps every attached
    node, relays and sleeping leaves alike, to its parent. coverage_promoted
    marks leaves activated purely for sensing coverage, which exempts them
    from childless pruning.
    """

    active_set: set[int]
    parent: dict[int, int]
    root: int = SINK_ID
    activation_time: int = 0
    activation_energy: dict[int, float] = field(default_factory=dict)
    coverage_promoted: set[int] = field(default_factory=set)

    def members(self) -> set[int]:
        return set(self.parent) | {self.root}


@dataclass
class NetworkState:
    """Mutable simulation state, owned by exactly one run at a time.

    energy_ledger accumulates every joule actually drained from non-sink
    batteries, so that sum(initial) - sum(current) over non-sink nodes
    equals the ledger at any instant.
    """

    nodes: list[Node]
    area: DeploymentArea
    radio: RadioParams
    energy: EnergyParams
    topology: Topology
    rng: random.Random
    time: int = 0
    energy_ledger: float = 0.0
    death_step: dict[int, int] = field(default_factory=dict)
    sink_bits_last_step: int = 0
    packets_delivered: int = 0
    packets_dropped: int = 0
    in_step: bool = False

    def __post_init__(self):
        self.positions = np.array(
            [(n.position.x, n.position.y) for n in self.nodes], dtype=float
        )

    @property
    def sink(self) -> Node:
        return self.nodes[SINK_ID]

    def node(self, node_id: int) -> Node:
        if not 0 <= node_id < len(self.nodes):
            raise KeyError(f"unknown node id {node_id}")
        return self.nodes[node_id]

    def alive_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.alive]

    def charge(self, node_id: int, joules: float) -> float:
        """Drain energy from a node; returns the amount actually drained.

        The sink is mains-powered and never drained. A battery cannot go
        negative: the drain is clamped to the residual and hitting zero
        kills the node, recorded against the step in progress.
        """
        if node_id == SINK_ID:
            return 0.0
        node = self.nodes[node_id]
        if not node.alive:
            return 0.0
        drained = min(joules, node.energy)
        node.energy -= drained
        self.energy_ledger += drained
        if node.energy <= 0.0:
            node.energy = 0.0
            self.kill(node_id)
        return drained

    def kill(self, node_id: int) -> None:
        node = self.nodes[node_id]
        if node.role is Role.SINK or not node.alive:
            return
        node.energy = 0.0
        node.life = Life.DEAD
        self.death_step.setdefault(node_id, self.time + 1 if self.in_step else self.time)


def neighbors(state: NetworkState, node_id: int, radius: float) -> list[int]:
    """Alive nodes other than node_id within radius of it, ascending by id."""
    origin = state.node(node_id).position
    found = []
    for other in state.nodes:
        if other.id == node_id or not other.alive:
            continue
        if distance(origin, other.position) <= radius:
            found.append(other.id)
    return found
