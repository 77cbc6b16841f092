"""Reduced-topology builders.

A3 grows a connected dominating tree outward from the sink, selecting relay
children by a weighted score of residual energy and parent distance. A3Cov
then promotes sleeping leaves whose own positions the active sensors cannot
detect. Both run centrally but charge per-node control-message energy as if
the handshake messages were actually exchanged, so that rebuilding a
topology is never free.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import SimulationError
from .metrics import alive_count, sense_probability
from .model import NetworkState, Topology, distance
from .radio import rx_energy, tx_energy


class TCProtocol(Enum):
    A3 = "A3"
    A3COV = "A3Cov"


@dataclass(frozen=True)
class A3Params:
    """Relay selection weights. The score of a candidate at distance d from
    its prospective parent is
    energy_weight * (residual / initial) + distance_weight * (d / radius),
    favoring well-charged candidates that extend the tree far."""

    energy_weight: float = 0.5
    distance_weight: float = 0.5

    def __post_init__(self):
        if not 0 <= self.energy_weight <= 1 or not 0 <= self.distance_weight <= 1:
            raise ValueError("weights must lie in [0, 1]")
        if abs(self.energy_weight + self.distance_weight - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")


@dataclass
class ConstructionCharge:
    """Per-node control traffic accounted during one construction."""

    sent: dict[int, int] = field(default_factory=dict)
    received: dict[int, int] = field(default_factory=dict)
    energy: dict[int, float] = field(default_factory=dict)

    def total_energy(self) -> float:
        return sum(self.energy[nid] for nid in sorted(self.energy))


@dataclass
class _Growth:
    topology: Topology
    charge: ConstructionCharge
    reached: int


def _grow(state: NetworkState, params: A3Params, exclude: frozenset[int]) -> _Growth:
    """One growth pass. Does not touch the state; control-energy debits are
    simulated on a local view so callers can preview a construction."""
    nodes = state.nodes
    radio, energy = state.radio, state.energy
    radius = radio.communication_radius
    e_init = energy.initial_energy
    control_bits = energy.control_packet_bits
    rx_cost = rx_energy(energy, control_bits)
    sink = state.sink.id

    charge = ConstructionCharge()
    residual: dict[int, float] = {}

    def budget(nid: int) -> float:
        return residual.get(nid, nodes[nid].energy)

    eligible = sorted(
        n.id for n in nodes if n.alive and n.id != sink and n.id not in exclude
    )
    unvisited = set(eligible)
    visited = {sink}
    active = {sink}
    parent: dict[int, int] = {}
    queue = deque([sink])

    while True:
        while queue:
            pid = queue.popleft()
            ppos = nodes[pid].position
            candidates = []
            for cid in sorted(unvisited):
                d = distance(ppos, nodes[cid].position)
                if d <= radius:
                    candidates.append((cid, d))
            if not candidates:
                continue
            candidates.sort(
                key=lambda cd: (
                    -(
                        params.energy_weight * budget(cd[0]) / e_init
                        + params.distance_weight * cd[1] / radius
                    ),
                    cd[0],
                )
            )
            for cid, _ in candidates:
                unvisited.discard(cid)
                visited.add(cid)
            appointed: list[int] = []
            for cid, d in candidates:
                # The candidate hears one hello and answers with its score.
                cost = rx_cost + tx_energy(energy, control_bits, d)
                drained = min(cost, budget(cid))
                residual[cid] = budget(cid) - drained
                charge.sent[cid] = charge.sent.get(cid, 0) + 1
                charge.received[cid] = charge.received.get(cid, 0) + 1
                charge.energy[cid] = charge.energy.get(cid, 0.0) + drained
                if residual[cid] <= 0.0:
                    continue  # drained dry by the handshake; never attached
                cpos = nodes[cid].position
                covered = any(
                    distance(cpos, nodes[a].position) <= radius for a in appointed
                )
                parent[cid] = pid
                if not covered:
                    appointed.append(cid)
                    active.add(cid)
                    queue.append(cid)
        # Wake-up pass: a sleeping leaf may be the sole gateway to nodes the
        # relays never saw; promote the lowest-id such leaf and keep growing,
        # otherwise the tree would not dominate its disk-graph component.
        woken = None
        for sid in sorted(parent):
            if sid in active:
                continue
            spos = nodes[sid].position
            for cid in sorted(unvisited):
                if distance(spos, nodes[cid].position) <= radius:
                    woken = sid
                    break
            if woken is not None:
                break
        if woken is None:
            break
        active.add(woken)
        queue.append(woken)

    topology = Topology(active_set=active, parent=parent, root=sink)
    return _Growth(topology=topology, charge=charge, reached=len(visited))


def _apply_charge(state: NetworkState, charge: ConstructionCharge) -> None:
    for nid in sorted(charge.energy):
        state.charge(nid, charge.energy[nid])


def prune_childless(topology: Topology) -> Topology:
    """Demote active non-sink nodes with no attached children back to
    sleeping leaves. Coverage-promoted nodes are kept. Demotion never
    detaches a child, so a single bottom-up pass reaches the fixpoint."""
    child_count = Counter(topology.parent.values())
    active = set(topology.active_set)
    for nid in sorted(topology.active_set):
        if nid == topology.root or nid in topology.coverage_promoted:
            continue
        if child_count.get(nid, 0) == 0:
            active.discard(nid)
    return Topology(
        active_set=active,
        parent=dict(topology.parent),
        root=topology.root,
        activation_time=topology.activation_time,
        activation_energy=dict(topology.activation_energy),
        coverage_promoted=set(topology.coverage_promoted),
    )


def _promote_for_sensing(state: NetworkState, topology: Topology, sp) -> None:
    """Activate sleeping leaves whose own positions are not sensed with
    probability detection_threshold by the current active sensors. Each
    promotion joins as a leaf under the nearest active node and immediately
    counts as a sensor for the leaves tested after it."""
    r = state.radio.sensing_radius
    radius = state.radio.communication_radius
    sleepers = sorted(set(topology.parent) - topology.active_set)
    for sid in sleepers:
        node = state.nodes[sid]
        if not node.alive:
            continue
        miss = 1.0
        for aid in sorted(topology.active_set):
            if aid == topology.root:
                continue  # the sink collects, it does not sense
            miss *= 1.0 - sense_probability(
                sp, r, distance(node.position, state.nodes[aid].position)
            )
        if 1.0 - miss >= sp.detection_threshold:
            continue
        best = None
        for aid in sorted(topology.active_set):
            d = distance(node.position, state.nodes[aid].position)
            if d <= radius and (best is None or (d, aid) < best):
                best = (d, aid)
        if best is None:
            continue  # no active node in range; cannot attach
        topology.parent[sid] = best[1]
        topology.active_set.add(sid)
        topology.coverage_promoted.add(sid)


def construct(
    state: NetworkState,
    tc: TCProtocol,
    params: A3Params,
    sensing=None,
    grid=None,
    exclude: frozenset[int] = frozenset(),
    relax_below: float | None = None,
) -> tuple[Topology, ConstructionCharge]:
    """Build a reduced topology with the selected protocol and charge the
    control traffic to the batteries.

    relax_below, when set, lifts the exclusion set if the excluded growth
    reaches fewer than that fraction of the alive nodes; rotation-set
    precomputation uses it to allow relay reuse in sparse networks.
    """
    if not state.sink.alive:
        raise SimulationError("sink is dead; cannot construct a topology")
    if state.sink.id in exclude:
        raise ValueError("the sink cannot be excluded from construction")
    growth = _grow(state, params, frozenset(exclude))
    if relax_below is not None and growth.reached < relax_below * alive_count(state):
        growth = _grow(state, params, frozenset())
    _apply_charge(state, growth.charge)
    topology = prune_childless(growth.topology)
    if tc is TCProtocol.A3COV:
        if sensing is None:
            raise ValueError("A3Cov requires sensing parameters")
        _promote_for_sensing(state, topology, sensing)
    return topology, growth.charge


def a3_construct(
    state: NetworkState, params: A3Params, exclude: frozenset[int] = frozenset()
) -> tuple[Topology, ConstructionCharge]:
    """Communication-coverage tree: grow, charge, prune childless relays."""
    return construct(state, TCProtocol.A3, params, exclude=exclude)


def a3cov_construct(
    state: NetworkState,
    params: A3Params,
    sensing,
    grid=None,
    exclude: frozenset[int] = frozenset(),
) -> tuple[Topology, ConstructionCharge]:
    """A3 followed by sensing promotions. The grid parameter is reserved for
    an area-hole promotion variant; promotion here is position-based."""
    return construct(state, TCProtocol.A3COV, params, sensing, grid, exclude=exclude)
