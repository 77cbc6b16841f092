"""Time-stepped lifetime loop.

Each step runs, in order: data traffic over the active tree, the death
sweep, the maintenance trigger check (and maintenance itself when it
fires), the clock advance, and metric sampling when due. One data round per
step; the link layer is lossless, so node death is the only loss mechanism,
and idle listening costs nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .construction import A3Params, TCProtocol, construct
from .deployment import DeploymentConfig, deploy
from .errors import ConfigError, SimulationError
from .maintenance import (
    MaintenanceStrategy,
    StrategyKind,
    TMProtocol,
    TriggerKind,
    TriggerPolicy,
    activate_topology,
    maintain,
    precompute_rotation_set,
    should_trigger,
)
from .metrics import (
    CoverageGrid,
    MetricsSample,
    alive_count,
    comm_coverage,
    sensing_coverage,
    sink_reachable,
)
from .model import EnergyParams, Life, NetworkState, RadioParams, Role, SensingParams
from .radio import rx_energy, tx_energy


@dataclass(frozen=True)
class SimConfig:
    deployment: DeploymentConfig = field(default_factory=DeploymentConfig)
    radio: RadioParams = field(default_factory=RadioParams)
    energy: EnergyParams = field(default_factory=EnergyParams)
    sensing: SensingParams = field(default_factory=SensingParams)
    a3: A3Params = field(default_factory=A3Params)
    tc: TCProtocol = TCProtocol.A3
    tm: TMProtocol | None = TMProtocol.DGETREC
    trigger: TriggerPolicy = field(
        default_factory=lambda: TriggerPolicy(TriggerKind.ENERGY)
    )
    rotation_k: int = 3
    grid_cell: float = 4.0
    max_steps: int = 5000
    metrics_stride: int = 50
    aggregation: str = "passthrough"


@dataclass
class RunResult:
    series: list[MetricsSample]
    death_times: dict[int, int]
    maintenance_events: list[tuple[int, str]]
    final_summary: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "series": [
                [s.time, s.alive, s.sink_reachable, s.comm_coverage, s.sensing_coverage]
                for s in self.series
            ],
            "death_times": {str(k): v for k, v in sorted(self.death_times.items())},
            "maintenance_events": list(self.maintenance_events),
            "final_summary": dict(self.final_summary),
        }


def validate_config(config: SimConfig) -> None:
    """The pre-run error check: every threshold in range and the trigger
    family consistent with the maintenance protocol."""
    if config.deployment.node_count < 1:
        raise ConfigError("deployment.node_count", "must be at least 1")
    if config.rotation_k < 1:
        raise ConfigError("rotation_k", "must be at least 1")
    if config.grid_cell <= 0:
        raise ConfigError("grid_cell", "must be positive")
    if config.max_steps < 1:
        raise ConfigError("max_steps", "must be at least 1")
    if config.metrics_stride < 1:
        raise ConfigError("metrics_stride", "must be at least 1")
    if config.aggregation != "passthrough":
        raise ConfigError("aggregation", "only 'passthrough' is implemented")
    if config.sensing.uncertainty_radius >= config.radio.sensing_radius:
        raise ConfigError(
            "sensing.uncertainty_radius",
            "must be smaller than the sensing radius",
        )
    if config.tm is not None and config.trigger.kind is not config.tm.trigger_kind:
        raise ConfigError(
            "trigger.kind",
            f"{config.tm.value} requires a {config.tm.trigger_kind.value}-triggered policy",
        )


def initialize(config: SimConfig) -> tuple[NetworkState, MaintenanceStrategy | None]:
    """Deploy, build the first reduced topology (plus the rotation set for
    static and hybrid strategies), and activate it at time zero."""
    validate_config(config)
    state = deploy(config.deployment, config.radio, config.energy)
    grid = CoverageGrid(state.area, config.grid_cell)
    strategy: MaintenanceStrategy | None = None
    if config.tm is None:
        topology, _ = construct(state, config.tc, config.a3, config.sensing, grid)
    else:
        kind = config.tm.strategy_kind
        if kind is StrategyKind.DYNAMIC_RECREATION:
            topology, _ = construct(state, config.tc, config.a3, config.sensing, grid)
            strategy = MaintenanceStrategy(kind, rotation_size=config.rotation_k)
        else:
            rotation = precompute_rotation_set(
                state, config.tc, config.rotation_k, config.a3, config.sensing, grid
            )
            topology = rotation[0]
            strategy = MaintenanceStrategy(
                kind, rotation_set=rotation, rotation_size=config.rotation_k
            )
    activate_topology(state, topology)
    return state, strategy


def _route_table(state: NetworkState) -> tuple[list[int], dict[int, tuple[int, float]]]:
    """Per-topology routing cache: traffic origins in ascending id, and for
    each relay its parent hop with the precomputed transmit cost."""
    topology = state.topology
    cached = getattr(topology, "_route_cache", None)
    if cached is not None:
        return cached
    energy = state.energy
    origins = sorted(topology.active_set - {topology.root})
    edges: dict[int, tuple[int, float]] = {}
    for nid in origins:
        parent = topology.parent[nid]
        hop = float(
            ((state.positions[nid] - state.positions[parent]) ** 2).sum() ** 0.5
        )
        edges[nid] = (parent, tx_energy(energy, energy.data_packet_bits, hop))
    topology._route_cache = (origins, edges)
    return origins, edges


def _traffic(state: NetworkState) -> None:
    """Every alive active node sends one data packet up the tree. Senders pay
    the transmit cost, receivers the receive cost; a node that dies mid-step
    drops the packet at the point of death and handles nothing further."""
    state.sink_bits_last_step = 0
    origins, edges = _route_table(state)
    if not origins:
        return
    energy = state.energy
    bits = energy.data_packet_bits
    rx_cost = rx_energy(energy, bits)
    sink = state.sink.id
    nodes = state.nodes
    for origin in origins:
        if nodes[origin].life is Life.DEAD:
            continue  # dead nodes generate nothing
        current = origin
        while True:
            parent, tx_cost = edges[current]
            state.charge(current, tx_cost)
            if nodes[current].life is Life.DEAD:
                state.packets_dropped += 1  # died mid-transmission
                break
            if parent == sink:
                # The sink is mains powered; its receive cost is not metered.
                state.sink_bits_last_step += bits
                state.packets_delivered += 1
                break
            if nodes[parent].life is Life.DEAD:
                state.packets_dropped += 1  # transmitted into a dead hop
                break
            state.charge(parent, rx_cost)
            if nodes[parent].life is Life.DEAD:
                state.packets_dropped += 1  # died receiving
                break
            current = parent


def _death_sweep(state: NetworkState) -> None:
    for node in state.nodes:
        if node.alive and node.role is not Role.SINK and node.energy <= 0.0:
            state.kill(node.id)


def _network_finished(state: NetworkState) -> bool:
    """True once a network that ever had sensors has lost them all; a
    sink-only deployment simply runs out its clock."""
    if len(state.nodes) <= 1:
        return False
    return not any(n.alive for n in state.nodes if n.id != state.sink.id)


def sample_metrics(state: NetworkState, config: SimConfig, grid: CoverageGrid) -> MetricsSample:
    return MetricsSample(
        time=state.time,
        alive=alive_count(state),
        sink_reachable=len(sink_reachable(state)),
        comm_coverage=comm_coverage(state, grid),
        sensing_coverage=sensing_coverage(state, config.sensing, grid),
    )


def step(
    state: NetworkState,
    strategy: MaintenanceStrategy | None,
    config: SimConfig,
    grid: CoverageGrid | None = None,
) -> MetricsSample | None:
    """Advance the simulation by one step; returns the metrics sample when
    the step lands on the sampling stride, else None."""
    if not state.sink.alive:
        raise SimulationError("sink is dead")
    if grid is None:
        grid = CoverageGrid(state.area, config.grid_cell)
    state.in_step = True
    _traffic(state)
    _death_sweep(state)
    if config.tm is not None and should_trigger(config.trigger, state):
        _, action = maintain(
            strategy, state, config.tc, config.a3, config.sensing, grid
        )
        strategy.events.append((state.time + 1, action))
    state.in_step = False
    state.time += 1
    if state.time % config.metrics_stride == 0:
        return sample_metrics(state, config, grid)
    return None


def run(config: SimConfig) -> RunResult:
    """Initialize and step to max_steps, or stop early with a final sample
    once every sensor node is dead and maintenance has nothing to activate."""
    state, strategy = initialize(config)
    grid = CoverageGrid(state.area, config.grid_cell)
    series = [sample_metrics(state, config, grid)]
    while state.time < config.max_steps:
        sample = step(state, strategy, config, grid)
        if sample is not None:
            series.append(sample)
        if _network_finished(state):
            if series[-1].time != state.time:
                series.append(sample_metrics(state, config, grid))
            break
    final = {
        "steps": state.time,
        "alive": alive_count(state),
        "energy_spent": state.energy_ledger,
        "packets_delivered": state.packets_delivered,
        "packets_dropped": state.packets_dropped,
    }
    events = list(strategy.events) if strategy is not None else []
    return RunResult(
        series=series,
        death_times=dict(sorted(state.death_step.items())),
        maintenance_events=events,
        final_summary=final,
    )
