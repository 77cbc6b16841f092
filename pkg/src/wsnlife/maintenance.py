"""Topology maintenance: trigger policies and the rotation / recreation /
hybrid replacement strategies behind the six named protocols.

Naming follows the usual maintenance taxonomy: D/H/S for dynamic, hybrid,
static; G for global (the sink coordinates network-wide, no local repair);
ET/TT for energy- and time-triggered; Rec/Rot for recreation and rotation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .construction import A3Params, TCProtocol, construct
from .errors import SimulationError
from .model import Life, NetworkState, Role, Topology

# A rotation-set growth that reaches under half of the alive nodes lifts its
# exclusion list: better to reuse relays than to precompute a stump.
RELAX_REACH_FRACTION = 0.5


class TriggerKind(Enum):
    TIME = "time"
    ENERGY = "energy"


class StrategyKind(Enum):
    STATIC_ROTATION = "static-rotation"
    DYNAMIC_RECREATION = "dynamic-recreation"
    HYBRID = "hybrid-recreation-rotation"


class TMProtocol(Enum):
    DGETREC = "DGETRec"
    HGETRECROT = "HGETRecRot"
    SGETROT = "SGETRot"
    DGTTREC = "DGTTRec"
    HGTTRECROT = "HGTTRecRot"
    SGTTROT = "SGTTRot"

    @property
    def trigger_kind(self) -> TriggerKind:
        return TriggerKind.ENERGY if "GET" in self.value else TriggerKind.TIME

    @property
    def strategy_kind(self) -> StrategyKind:
        head = self.value[0]
        if head == "D":
            return StrategyKind.DYNAMIC_RECREATION
        if head == "H":
            return StrategyKind.HYBRID
        return StrategyKind.STATIC_ROTATION


@dataclass(frozen=True)
class TriggerPolicy:
    """When to replace the reduced topology.

    Time-triggered: after `period` steps since activation. Energy-triggered:
    as soon as any active non-sink node drops below `energy_threshold` times
    the energy it had at activation, or dies outright. Comparing against
    activation-time energy (not the initial budget) re-arms the trigger at
    every activation.
    """

    kind: TriggerKind
    period: int = 500
    energy_threshold: float = 0.6

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be at least 1 step")
        if not 0 < self.energy_threshold < 1:
            raise ValueError("energy_threshold must lie in (0, 1)")


@dataclass
class MaintenanceStrategy:
    kind: StrategyKind
    rotation_set: list[Topology] = field(default_factory=list)
    cursor: int = 0
    rotation_size: int = 3
    events: list[tuple[int, str]] = field(default_factory=list)


def should_trigger(policy: TriggerPolicy, state: NetworkState) -> bool:
    topology = state.topology
    if policy.kind is TriggerKind.TIME:
        return state.time - topology.activation_time >= policy.period
    for nid in sorted(topology.active_set):
        if nid == topology.root:
            continue
        node = state.nodes[nid]
        if node.life is Life.DEAD:
            return True
        if node.energy < policy.energy_threshold * topology.activation_energy[nid]:
            return True
    return False


def activate_topology(state: NetworkState, topology: Topology) -> None:
    """Install a topology: stamp the activation clock and energy snapshot,
    make its members active and every other alive non-sink node sleep."""
    topology.activation_time = state.time
    topology.activation_energy = {
        nid: state.nodes[nid].energy for nid in sorted(topology.active_set)
    }
    for node in state.nodes:
        if node.role is Role.SINK or not node.alive:
            continue
        node.role = Role.ACTIVE if node.id in topology.active_set else Role.SLEEPING
    state.topology = topology


def precompute_rotation_set(
    state: NetworkState,
    tc: TCProtocol,
    k: int,
    params: A3Params,
    sensing=None,
    grid=None,
) -> list[Topology]:
    """Build k alternative topologies up front, excluding the relays of each
    run from the next so rotations drain different nodes. Construction energy
    for all k is charged here, at precomputation time."""
    if k < 1:
        raise ValueError("rotation set size must be at least 1")
    if state.time != 0:
        raise ValueError("rotation sets are precomputed on a fresh deployment")
    topologies: list[Topology] = []
    exclude: set[int] = set()
    for _ in range(k):
        topology, _charge = construct(
            state,
            tc,
            params,
            sensing,
            grid,
            exclude=frozenset(exclude),
            relax_below=RELAX_REACH_FRACTION,
        )
        topologies.append(topology)
        exclude |= topology.active_set - {topology.root}
    return topologies


def _next_usable(strategy: MaintenanceStrategy, state: NetworkState) -> int | None:
    """Next rotation entry, scanning cyclically from the cursor, whose
    non-sink members are all alive; wraps back to the cursor itself."""
    k = len(strategy.rotation_set)
    for offset in range(1, k + 1):
        idx = (strategy.cursor + offset) % k
        candidate = strategy.rotation_set[idx]
        if all(
            state.nodes[nid].alive
            for nid in sorted(candidate.active_set)
            if nid != candidate.root
        ):
            return idx
    return None


def maintain(
    strategy: MaintenanceStrategy,
    state: NetworkState,
    tc: TCProtocol,
    params: A3Params,
    sensing=None,
    grid=None,
) -> tuple[Topology, str]:
    """Replace (or retain) the reduced topology after a trigger fired.

    Returns the activated topology and what happened: "Rotated",
    "Recreated", or "Retained". Every branch re-stamps the activation clock
    and snapshot, which re-arms the trigger.
    """
    if not state.sink.alive:
        raise SimulationError("sink is dead; maintenance impossible")
    if strategy.kind is StrategyKind.DYNAMIC_RECREATION:
        topology, _ = construct(state, tc, params, sensing, grid)
        action = "Recreated"
    elif strategy.kind is StrategyKind.STATIC_ROTATION:
        idx = _next_usable(strategy, state)
        if idx is None:
            topology = state.topology
            action = "Retained"
        else:
            strategy.cursor = idx
            topology = strategy.rotation_set[idx]
            action = "Rotated"
    else:  # hybrid: rotate while possible, rebuild once the set is spent
        idx = _next_usable(strategy, state)
        if idx is not None:
            strategy.cursor = idx
            topology = strategy.rotation_set[idx]
            action = "Rotated"
        else:
            topology, _ = construct(state, tc, params, sensing, grid)
            strategy.rotation_set = [topology]
            strategy.cursor = 0
            action = "Recreated"
    activate_topology(state, topology)
    return topology, action
