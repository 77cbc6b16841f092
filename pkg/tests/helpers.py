"""Shared fixtures for hand-built network states."""
from __future__ import annotations

import random

from wsnlife import (
    DeploymentArea,
    EnergyParams,
    Life,
    NetworkState,
    Node,
    Point,
    RadioParams,
    Role,
    Topology,
)


def make_state(
    positions,
    area=None,
    radio=None,
    energy=None,
    initial_energy=None,
    roles=None,
    dead=(),
):
    """Build a NetworkState with node 0 as the sink at positions[0].

    roles maps node id to Role for non-default assignments (default: every
    non-sink node sleeps); dead lists ids to kill outright.
    """
    radio = radio or RadioParams()
    if energy is None:
        if initial_energy is not None:
            energy = EnergyParams(initial_energy=initial_energy)
        else:
            energy = EnergyParams()
    xs = [p[0] for p in positions]
    ys = [p[1] for p in positions]
    area = area or DeploymentArea(max(xs) + 100.0, max(ys) + 100.0)
    nodes = []
    for i, (x, y) in enumerate(positions):
        role = Role.SINK if i == 0 else Role.SLEEPING
        if roles and i in roles:
            role = roles[i]
        nodes.append(
            Node(id=i, position=Point(x, y), energy=energy.initial_energy, role=role)
        )
    state = NetworkState(
        nodes=nodes,
        area=area,
        radio=radio,
        energy=energy,
        topology=Topology(active_set={0}, parent={}, root=0),
        rng=random.Random(0),
    )
    for nid in dead:
        state.nodes[nid].energy = 0.0
        state.nodes[nid].life = Life.DEAD
    return state
