"""Closed-form radio and energy formulas.

Connectivity in the simulator itself uses the configured communication
radius directly; received_power and comm_range are model utilities kept for
validation and documentation. Energy dissipation follows the first-order
radio model with a squared-distance amplifier term.
"""
from __future__ import annotations

import math

from .model import EnergyParams, RadioParams


def received_power(radio: RadioParams, d: float) -> float:
    """Two-ray ground received power at distance d:
    P_t * G_t * G_r * h_t^2 * h_r^2 / d^4.
    """
    if d <= 0:
        raise ValueError("distance must be positive (singularity at zero)")
    numerator = (
        radio.tx_power
        * radio.gain_tx
        * radio.gain_rx
        * radio.height_tx**2
        * radio.height_rx**2
    )
    return numerator / d**4


def comm_range(transceiver_constant: float, tx_power: float) -> float:
    """Transmitter coverage diameter 2 * (C_t * P_t)^(1/4).

    The leading factor 2 is taken as given by the model; it is not derived
    from a received-power threshold here.
    """
    if transceiver_constant <= 0 or tx_power <= 0:
        raise ValueError("transceiver constant and power must be positive")
    return 2.0 * (transceiver_constant * tx_power) ** 0.25


def tx_energy(energy: EnergyParams, bits: float, dist: float) -> float:
    """Transmit cost for `bits` over `dist` meters:
    E_elec * k + E_amp * k * l^2.
    """
    if bits < 0 or dist < 0:
        raise ValueError("bits and distance must be non-negative")
    return energy.elec_energy_per_bit * bits + energy.amp_energy_per_bit_m2 * bits * dist**2


def rx_energy(energy: EnergyParams, bits: float) -> float:
    """Receive cost for `bits`: electronics only, E_elec * k."""
    if bits < 0:
        raise ValueError("bits must be non-negative")
    return energy.elec_energy_per_bit * bits


def critical_transmission_range(n: int, f: str | float = "loglog") -> float:
    """Dense-network critical transmission range on the unit square,
    sqrt((ln n + f(n)) / (n * pi)), as a fraction of the square edge.

    f selects the divergent correction term: "zero" for f(n) = 0, "loglog"
    for f(n) = ln(ln n) (taken as 0 below n = 3, where it is undefined or
    negative), or any float for a custom constant. Natural logarithms
    throughout.
    """
    if n < 1:
        raise ValueError("node count must be at least 1")
    if isinstance(f, str):
        if f == "zero":
            extra = 0.0
        elif f == "loglog":
            extra = math.log(math.log(n)) if n >= 3 else 0.0
        else:
            raise ValueError(f"unknown f choice {f!r}")
    else:
        extra = float(f)
    return math.sqrt((math.log(n) + extra) / (n * math.pi))


def critical_transmission_range_meters(
    n: int, edge_length: float, f: str | float = "loglog"
) -> float:
    """critical_transmission_range scaled by the square's edge length."""
    if edge_length <= 0:
        raise ValueError("edge length must be positive")
    return edge_length * critical_transmission_range(n, f)
