"""Switched piecewise-linear simulation of the stress boost converter.

Topology (all values configurable):

    vin --- series_r --- L ---+--- switch (rds_on) --- gnd
                              |
                            diode (constant diode_vf drop)
                              |
                      output node: c_out, optional r_load,
                      hard-clamped at v_supply + diode_vf

State is the pair (inductor current, output capacitor voltage). The
inductor/diode path is unidirectional: when the switch is off and the
current reaches zero with the diode reverse-biased, the current is held at
zero until the next on-edge (discontinuous conduction). When the output
node would exceed the clamp level the excess charge flows into the
high-voltage supply and the node voltage stays pinned, which is how the
reverse-bias stress circuit holds the drain at the stress level.

The drain-source voltage is derived from the state: ``i*rds_on`` while the
gate is on, output voltage plus the diode drop while the diode conducts,
and the source voltage while the branch is open.

Integration is fixed-step explicit trapezoidal with steps aligned to the
PWM edges, so switching instants fall exactly on grid points. The duty
cycle is quantized to the step grid (one part in ``steps_per_period``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, TextIO

import numpy as np

from .device import DeviceState
from .errors import (
    DomainDivisionError,
    InsufficientDataError,
    InvalidParameterError,
    NumericInstabilityError,
)

WAVEFORM_CSV_HEADER = "t_s,v_ds_V,i_l_A,v_out_V,gate_on"


@dataclass(frozen=True)
class CircuitParams:
    """Component values of the stress converter (SI units).

    ``c_in`` is carried for completeness; the input node is treated as stiff
    and the small input capacitor does not enter the two-state model.
    ``r_load`` is an optional resistive load on the output node; ``None``
    leaves the output open, which is the reverse-bias stress configuration.
    """

    vin: float = 10.0
    l_drain: float = 10e-6
    c_in: float = 100e-12
    c_out: float = 25e-12
    v_supply: float = 100.0
    diode_vf: float = 0.5
    series_r: float = 0.0
    r_load: Optional[float] = None

    def __post_init__(self):
        if not self.vin > 0.0:
            raise InvalidParameterError(f"vin must be > 0, got {self.vin}")
        if not self.l_drain > 0.0:
            raise InvalidParameterError(f"l_drain must be > 0, got {self.l_drain}")
        if not self.c_out > 0.0:
            raise InvalidParameterError(f"c_out must be > 0, got {self.c_out}")
        if self.diode_vf < 0.0:
            raise InvalidParameterError(f"diode_vf must be >= 0, got {self.diode_vf}")
        if self.series_r < 0.0:
            raise InvalidParameterError(f"series_r must be >= 0, got {self.series_r}")
        if self.r_load is not None and not self.r_load > 0.0:
            raise InvalidParameterError(f"r_load must be > 0 or None, got {self.r_load}")

    @property
    def clamp_voltage(self) -> float:
        """Level the output node is pinned at by the high-voltage supply path."""
        return self.v_supply + self.diode_vf


@dataclass(frozen=True)
class DriveSignal:
    """PWM gate drive: frequency in hertz, duty in [0, 1], gate levels in volts."""

    frequency: float = 100e3
    duty: float = 0.7
    v_gate_high: float = 5.0
    v_gate_low: float = 0.0

    def __post_init__(self):
        if not self.frequency > 0.0:
            raise InvalidParameterError(f"frequency must be > 0, got {self.frequency}")
        if not 0.0 <= self.duty <= 1.0:
            raise InvalidParameterError(f"duty must be in [0, 1], got {self.duty}")
        if not (self.v_gate_low <= 0.0 <= self.v_gate_high):
            raise InvalidParameterError(
                f"requires v_gate_low <= 0 <= v_gate_high, got {self.v_gate_low} / {self.v_gate_high}"
            )


@dataclass(frozen=True)
class SimConfig:
    """Run length and resolution. ``settle_fraction`` of the run is discarded
    before steady-state metrics are taken."""

    steps_per_period: int = 1000
    n_periods: int = 60
    settle_fraction: float = 0.5

    def __post_init__(self):
        if self.steps_per_period < 100:
            raise InvalidParameterError(f"steps_per_period must be >= 100, got {self.steps_per_period}")
        if self.n_periods < 2:
            raise InvalidParameterError(f"n_periods must be >= 2, got {self.n_periods}")
        if not 0.0 <= self.settle_fraction < 1.0:
            raise InvalidParameterError(f"settle_fraction must be in [0, 1), got {self.settle_fraction}")


@dataclass
class Waveform:
    """Uniformly sampled run record: time, v_ds, inductor current, output
    voltage, and the gate state of the interval starting at each sample."""

    t: np.ndarray
    v_ds: np.ndarray
    i_l: np.ndarray
    v_out: np.ndarray
    gate_on: np.ndarray

    def __post_init__(self):
        n = len(self.t)
        if any(len(a) != n for a in (self.v_ds, self.i_l, self.v_out, self.gate_on)):
            raise InvalidParameterError("waveform columns must have equal length")
        if n >= 2:
            dt = np.diff(self.t)
            if not (dt > 0).all():
                raise InvalidParameterError("waveform time must be strictly increasing")
            if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
                raise InvalidParameterError("waveform time step must be uniform")
        if (self.i_l < 0).any():
            raise InvalidParameterError("waveform i_l must be >= 0 at all samples")

    def __len__(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class SteadyStateMetrics:
    """Post-settle scalars: peak and mean drain voltage, mean on-time
    inductor current, peak inductor current."""

    v_max: float
    v_in_avg: float
    i_avg: float
    i_peak: float

    def __post_init__(self):
        if not (self.v_max >= self.v_in_avg >= 0.0):
            raise InvalidParameterError(
                f"requires v_max >= v_in_avg >= 0, got {self.v_max} / {self.v_in_avg}"
            )


def ideal_boost_vout(vin: float, duty: float) -> float:
    """Ideal continuous-conduction transfer: vin / (1 - duty)."""
    if not math.isfinite(vin):
        raise InvalidParameterError(f"vin must be finite, got {vin}")
    if duty == 1.0:
        raise DomainDivisionError("boost transfer diverges at duty = 1")
    if not 0.0 <= duty < 1.0:
        raise InvalidParameterError(f"duty must be in [0, 1), got {duty}")
    return vin / (1.0 - duty)


def simulate(circuit: CircuitParams, drive: DriveSignal, device: DeviceState,
             sim: SimConfig) -> Waveform:
    """Integrate the switched converter and return the sampled waveform.

    The run starts from the quiescent pre-switching operating point (zero
    inductor current, output charged to vin - diode_vf through the inductor
    and diode), so short runs begin near periodic steady state.
    """
    vin = circuit.vin
    ell = circuit.l_drain
    cap = circuit.c_out
    vf = circuit.diode_vf
    rs = circuit.series_r
    rds = device.rds_on
    clamp = circuit.clamp_voltage
    g_load = 0.0 if circuit.r_load is None else 1.0 / circuit.r_load

    spp = sim.steps_per_period
    n = sim.n_periods * spp
    h = 1.0 / (drive.frequency * spp)
    on_steps = round(drive.duty * spp)

    t = np.arange(n + 1) * h
    i_arr = np.empty(n + 1)
    v_arr = np.empty(n + 1)
    vds_arr = np.empty(n + 1)
    gate_arr = np.empty(n + 1, dtype=bool)

    def deriv(i: float, v: float, gate: bool) -> tuple[float, float]:
        if gate:
            return (vin - i * (rs + rds)) / ell, (-v * g_load) / cap
        if i > 0.0 or vin - vf - v > 0.0:
            dv = (i - v * g_load) / cap
            if v >= clamp and dv > 0.0:
                dv = 0.0  # excess charge spills into the supply
            return (vin - i * rs - vf - v) / ell, dv
        return 0.0, (-v * g_load) / cap  # branch open: current held at zero

    def v_drain(i: float, v: float, gate: bool) -> float:
        if gate:
            return i * rds
        if i > 0.0:
            return v + vf
        return min(vin, v + vf)

    i = 0.0
    v = min(max(vin - vf, 0.0), clamp)
    gate = 0 < on_steps
    i_arr[0], v_arr[0], vds_arr[0], gate_arr[0] = i, v, v_drain(i, v, gate), gate

    for k in range(n):
        gate = (k % spp) < on_steps
        d1i, d1v = deriv(i, v, gate)
        pi = i + h * d1i
        pv = v + h * d1v
        if pi < 0.0:
            pi = 0.0
        if pv > clamp:
            pv = clamp
        elif pv < 0.0:
            pv = 0.0
        d2i, d2v = deriv(pi, pv, gate)
        i += 0.5 * h * (d1i + d2i)
        v += 0.5 * h * (d1v + d2v)
        if not (math.isfinite(i) and math.isfinite(v)):
            raise NumericInstabilityError(k)
        if i < 0.0:
            i = 0.0
        if v > clamp:
            v = clamp
        elif v < 0.0:
            v = 0.0
        g_next = ((k + 1) % spp) < on_steps
        i_arr[k + 1] = i
        v_arr[k + 1] = v
        vds_arr[k + 1] = v_drain(i, v, g_next)
        gate_arr[k + 1] = g_next

    return Waveform(t=t, v_ds=vds_arr, i_l=i_arr, v_out=v_arr, gate_on=gate_arr)


def settle_start_index(sim: SimConfig) -> int:
    """First sample index after the settle window, aligned to a period start."""
    return round(sim.settle_fraction * sim.n_periods) * sim.steps_per_period


def steady_state_metrics(w: Waveform, sim: SimConfig, drive: DriveSignal) -> SteadyStateMetrics:
    """Reduce a waveform to its post-settle steady-state scalars.

    ``i_avg`` is the mean inductor current over on-gate samples; for a run
    with no on-time (duty 0) it is reported as 0.
    """
    start = settle_start_index(sim)
    spp = sim.steps_per_period
    if len(w) - 1 < start:
        raise InsufficientDataError(
            f"waveform has {len(w)} samples, shorter than the settle window ({start})"
        )
    if len(w) - 1 - start < 2 * spp:
        raise InsufficientDataError(
            f"waveform covers {(len(w) - 1 - start) / spp:.2f} periods after settling; need >= 2"
        )
    v_ds = w.v_ds[start:]
    i_l = w.i_l[start:]
    on = w.gate_on[start:]
    i_avg = float(i_l[on].mean()) if on.any() else 0.0
    return SteadyStateMetrics(
        v_max=float(v_ds.max()),
        v_in_avg=float(v_ds.mean()),
        i_avg=i_avg,
        i_peak=float(i_l.max()),
    )


def write_waveform_csv(w: Waveform, stream: TextIO) -> None:
    """Write the exact waveform CSV format (gate_on encoded as 1/0)."""
    stream.write(WAVEFORM_CSV_HEADER + "\n")
    t, v_ds, i_l, v_out = (a.tolist() for a in (w.t, w.v_ds, w.i_l, w.v_out))
    gate = w.gate_on.astype(int).tolist()
    for k in range(len(t)):
        stream.write(f"{t[k]!r},{v_ds[k]!r},{i_l[k]!r},{v_out[k]!r},{gate[k]}\n")
