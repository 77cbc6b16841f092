"""Config ingestion, run sweeps, and CSV/report persistence.

The config file is a single JSON object with flat dotted keys mirroring the
simulation config fields. Unknown keys are rejected; unspecified keys take
the documented defaults. All outputs are deterministic byte-for-byte for a
given spec: fixed column formats, LF line endings, no timestamps.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path

from .construction import A3Params, TCProtocol
from .deployment import DeploymentConfig
from .engine import RunResult, SimConfig, run, validate_config
from .errors import ConfigError
from .maintenance import TMProtocol, TriggerKind, TriggerPolicy
from .model import DeploymentArea, EnergyParams, RadioParams, SensingParams

TM_NAMES = [p.value for p in TMProtocol]
TC_NAMES = [p.value for p in TCProtocol]


@dataclass(frozen=True)
class ExperimentSpec:
    base: SimConfig
    tc_list: list[str]
    tm_list: list[str]
    seeds: list[int]
    output_dir: Path


@dataclass(frozen=True)
class SummaryRow:
    tc: str
    tm: str
    seed: int
    time_to_first_death: int
    time_to_low_reachability: int
    integrated_comm_coverage: float
    integrated_sensing_coverage: float


def _positive(key: str, value: float) -> float:
    if not value > 0:
        raise ConfigError(key, "must be positive")
    return float(value)


def _non_negative(key: str, value: float) -> float:
    if value < 0:
        raise ConfigError(key, "must be non-negative")
    return float(value)


def _int_at_least(minimum: int):
    def check(key: str, value) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, "must be an integer")
        if value < minimum:
            raise ConfigError(key, f"must be at least {minimum}")
        return value

    return check


def _fraction(key: str, value: float) -> float:
    if not 0 < value < 1:
        raise ConfigError(key, "must lie strictly between 0 and 1")
    return float(value)


def _unit_interval(key: str, value: float) -> float:
    if not 0 <= value <= 1:
        raise ConfigError(key, "must lie in [0, 1]")
    return float(value)


def _seed_value(key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, "must be an integer")
    if not 0 <= value < 2**64:
        raise ConfigError(key, "must fit in 64 unsigned bits")
    return value


def _choice(options: list[str]):
    def check(key: str, value) -> str:
        if value not in options:
            raise ConfigError(key, f"must be one of {options}")
        return value

    return check


_SCALAR_KEYS = {
    "deployment.node_count": _int_at_least(1),
    "deployment.width": _positive,
    "deployment.height": _positive,
    "deployment.seed": _seed_value,
    "radio.tx_power": _positive,
    "radio.gain_tx": _positive,
    "radio.gain_rx": _positive,
    "radio.height_tx": _positive,
    "radio.height_rx": _positive,
    "radio.transceiver_constant": _positive,
    "radio.communication_radius": _positive,
    "radio.sensing_radius": _positive,
    "energy.elec_energy_per_bit": _positive,
    "energy.amp_energy_per_bit_m2": _positive,
    "energy.initial_energy": _positive,
    "energy.control_packet_bits": _int_at_least(1),
    "energy.data_packet_bits": _int_at_least(1),
    "sensing.uncertainty_radius": _non_negative,
    "sensing.decay_rate": _positive,
    "sensing.decay_exponent": _positive,
    "sensing.detection_threshold": _fraction,
    "a3.energy_weight": _unit_interval,
    "a3.distance_weight": _unit_interval,
    "tc": _choice(TC_NAMES),
    "tm": _choice(TM_NAMES + ["None"]),
    "trigger.kind": _choice(["time", "energy"]),
    "trigger.period": _int_at_least(1),
    "trigger.energy_threshold": _fraction,
    "rotation_k": _int_at_least(1),
    "grid_cell": _positive,
    "max_steps": _int_at_least(1),
    "metrics_stride": _int_at_least(1),
    "aggregation": _choice(["passthrough"]),
    "output_dir": lambda key, value: str(value),
}

_LIST_KEYS = {"tc_list", "tm_list", "seeds"}


def parse_config(path: str | Path) -> ExperimentSpec:
    """Read and validate a config file; see the README for the key schema."""
    path = Path(path)
    if not path.exists():
        raise ConfigError("config", f"file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")

    values: dict[str, object] = {}
    for key, value in raw.items():
        if key in _SCALAR_KEYS:
            values[key] = _SCALAR_KEYS[key](key, value)
        elif key in _LIST_KEYS:
            if not isinstance(value, list) or not value:
                raise ConfigError(key, "must be a non-empty list")
            if key == "seeds":
                values[key] = [_seed_value(key, v) for v in value]
            elif key == "tc_list":
                values[key] = [_choice(TC_NAMES)(key, v) for v in value]
            else:
                values[key] = [_choice(TM_NAMES + ["None"])(key, v) for v in value]
        else:
            raise ConfigError(key, "unknown key")

    def get(key: str, default):
        return values.get(key, default)

    # A single selection weight implies its complement.
    w_e = values.get("a3.energy_weight")
    w_d = values.get("a3.distance_weight")
    if w_e is None and w_d is not None:
        w_e = 1.0 - w_d
    elif w_d is None and w_e is not None:
        w_d = 1.0 - w_e
    elif w_e is None and w_d is None:
        w_e = w_d = 0.5
    if abs(w_e + w_d - 1.0) > 1e-9:
        raise ConfigError("a3.distance_weight", "weights must sum to 1")

    tm_name = get("tm", "DGETRec")
    tm = None if tm_name == "None" else TMProtocol(tm_name)
    kind_name = values.get("trigger.kind")
    if kind_name is None:
        kind = tm.trigger_kind if tm is not None else TriggerKind.ENERGY
    else:
        kind = TriggerKind(kind_name)

    try:
        base = SimConfig(
            deployment=DeploymentConfig(
                node_count=get("deployment.node_count", 300),
                area=DeploymentArea(
                    get("deployment.width", 1074.0), get("deployment.height", 660.0)
                ),
                seed=get("deployment.seed", 1),
            ),
            radio=RadioParams(
                tx_power=get("radio.tx_power", 1.0),
                gain_tx=get("radio.gain_tx", 1.0),
                gain_rx=get("radio.gain_rx", 1.0),
                height_tx=get("radio.height_tx", 1.0),
                height_rx=get("radio.height_rx", 1.0),
                transceiver_constant=get("radio.transceiver_constant", 1.0),
                communication_radius=get("radio.communication_radius", 100.0),
                sensing_radius=get("radio.sensing_radius", 20.0),
            ),
            energy=EnergyParams(
                elec_energy_per_bit=get("energy.elec_energy_per_bit", 50e-9),
                amp_energy_per_bit_m2=get("energy.amp_energy_per_bit_m2", 10e-12),
                initial_energy=get("energy.initial_energy", 1.0),
                control_packet_bits=get("energy.control_packet_bits", 128),
                data_packet_bits=get("energy.data_packet_bits", 1000),
            ),
            sensing=SensingParams(
                uncertainty_radius=get("sensing.uncertainty_radius", 2.0),
                decay_rate=get("sensing.decay_rate", 0.5),
                decay_exponent=get("sensing.decay_exponent", 1.0),
                detection_threshold=get("sensing.detection_threshold", 0.5),
            ),
            a3=A3Params(energy_weight=w_e, distance_weight=w_d),
            tc=TCProtocol(get("tc", "A3")),
            tm=tm,
            trigger=TriggerPolicy(
                kind=kind,
                period=get("trigger.period", 500),
                energy_threshold=get("trigger.energy_threshold", 0.6),
            ),
            rotation_k=get("rotation_k", 3),
            grid_cell=get("grid_cell", 4.0),
            max_steps=get("max_steps", 5000),
            metrics_stride=get("metrics_stride", 50),
            aggregation=get("aggregation", "passthrough"),
        )
    except ValueError as exc:
        raise ConfigError("config", str(exc)) from exc
    validate_config(base)

    return ExperimentSpec(
        base=base,
        tc_list=list(get("tc_list", [base.tc.value])),
        tm_list=list(get("tm_list", [tm_name])),
        seeds=list(get("seeds", [base.deployment.seed])),
        output_dir=Path(get("output_dir", "out")),
    )


def config_for(spec: ExperimentSpec, tc_name: str, tm_name: str, seed: int) -> SimConfig:
    """Materialize the config for one sweep cell; the trigger kind follows
    the maintenance protocol's family."""
    tc = TCProtocol(tc_name)
    tm = None if tm_name == "None" else TMProtocol(tm_name)
    trigger = spec.base.trigger
    if tm is not None and trigger.kind is not tm.trigger_kind:
        trigger = TriggerPolicy(
            tm.trigger_kind, trigger.period, trigger.energy_threshold
        )
    deployment = replace(spec.base.deployment, seed=seed)
    return replace(spec.base, deployment=deployment, tc=tc, tm=tm, trigger=trigger)


def _round6(value: float) -> float:
    return float(f"{value:.6f}")


def emit_series(result: RunResult, path: str | Path) -> Path:
    """Write the per-step metric series as CSV, coverages at 6 decimals."""
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["step", "alive", "sink_reachable", "comm_coverage", "sensing_coverage"]
        )
        for s in result.series:
            writer.writerow(
                [
                    s.time,
                    s.alive,
                    s.sink_reachable,
                    f"{s.comm_coverage:.6f}",
                    f"{s.sensing_coverage:.6f}",
                ]
            )
    return path


def _integrate(times: list[int], values: list[float]) -> float:
    """Left Riemann sum over the sampled series, using the emitted (rounded)
    values so the number is exactly recomputable from the CSV."""
    total = 0.0
    for i in range(len(times) - 1):
        total += _round6(values[i]) * (times[i + 1] - times[i])
    return total


def summarize(result: RunResult, tc: str, tm: str, seed: int, node_count: int) -> SummaryRow:
    deaths = result.death_times.values()
    first_death = min(deaths) if deaths else -1
    threshold = 0.10 * node_count
    low_reach = result.series[-1].time
    for s in result.series:
        if s.sink_reachable < threshold:
            low_reach = s.time
            break
    times = [s.time for s in result.series]
    return SummaryRow(
        tc=tc,
        tm=tm,
        seed=seed,
        time_to_first_death=first_death,
        time_to_low_reachability=low_reach,
        integrated_comm_coverage=_integrate(
            times, [s.comm_coverage for s in result.series]
        ),
        integrated_sensing_coverage=_integrate(
            times, [s.sensing_coverage for s in result.series]
        ),
    )


def write_summary(rows: list[SummaryRow], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            [
                "tc",
                "tm",
                "seed",
                "time_to_first_death",
                "time_to_low_reachability",
                "integrated_comm_coverage",
                "integrated_sensing_coverage",
            ]
        )
        for row in rows:
            writer.writerow(
                [
                    row.tc,
                    row.tm,
                    row.seed,
                    row.time_to_first_death,
                    row.time_to_low_reachability,
                    f"{row.integrated_comm_coverage:.6f}",
                    f"{row.integrated_sensing_coverage:.6f}",
                ]
            )
    return path


def write_ranking(rows: list[SummaryRow], path: str | Path) -> Path:
    """Rank protocol combinations by mean integrated communication coverage
    across seeds, best first. The A3+DGETRec position is called out for
    comparison against the published conclusion."""
    path = Path(path)
    combos: dict[tuple[str, str], list[float]] = {}
    for row in rows:
        combos.setdefault((row.tc, row.tm), []).append(row.integrated_comm_coverage)
    means = {
        combo: sum(vals) / len(vals) for combo, vals in sorted(combos.items())
    }
    ordered = sorted(means.items(), key=lambda item: (-item[1], item[0]))
    lines = ["rank combo mean_integrated_comm_coverage"]
    target_rank = None
    for rank, ((tc, tm), mean) in enumerate(ordered, start=1):
        lines.append(f"{rank} {tc}+{tm} {mean:.6f}")
        if (tc, tm) == ("A3", "DGETRec"):
            target_rank = rank
    if target_rank is not None:
        lines.append(f"A3+DGETRec rank: {target_rank} of {len(ordered)}")
    path.write_text("\n".join(lines) + "\n")
    return path


def run_experiment(spec: ExperimentSpec) -> list[Path]:
    """Execute every (tc, tm, seed) cell, writing one series CSV per run plus
    the aggregate summary and the ranking report."""
    out = spec.output_dir
    out.mkdir(parents=True, exist_ok=True)
    rows: list[SummaryRow] = []
    written: list[Path] = []
    for tc_name in spec.tc_list:
        for tm_name in spec.tm_list:
            for seed in spec.seeds:
                config = config_for(spec, tc_name, tm_name, seed)
                try:
                    result = run(config)
                except ConfigError:
                    raise
                except Exception as exc:
                    raise RuntimeError(
                        f"run failed for tc={tc_name} tm={tm_name} seed={seed}: {exc}"
                    ) from exc
                series_path = out / f"series_{tc_name}_{tm_name}_seed{seed}.csv"
                written.append(emit_series(result, series_path))
                rows.append(
                    summarize(
                        result, tc_name, tm_name, seed, config.deployment.node_count
                    )
                )
    written.append(write_summary(rows, out / "summary.csv"))
    written.append(write_ranking(rows, out / "ranking.txt"))
    return written
