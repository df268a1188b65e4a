"""Reverse-bias stress campaigns: a matrix of (voltage, temperature) cells.

Each cell alternates closed-form degradation marching with a periodic
simulated measurement: the converter is re-simulated with the degraded
on-resistance, steady-state metrics are taken, and the on-resistance is
extracted back from the averaged drain voltage. Fitting the extracted
series against ln(t) reproduces the log-time analysis pipeline.

Operating regime: the campaign drives the converter in continuous
conduction with the output pinned at the stress level, so the drain sits at
v_max for the whole off-time. The matching extraction shape factor for that
waveform is 1 (the triangular-transition value 2 applies when the off-state
drain ramps up and back down instead of being held). The input voltage of
each cell is tuned once, on the fresh device, so the mean on-state inductor
current hits the cell's drive-current target.

Cells are pure functions of their inputs and safe to run concurrently;
this implementation runs them sequentially and preserves input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .analysis import FitResult, RdsSample, extract_rds_on, fit_log_time
from .converter import (
    CircuitParams,
    DriveSignal,
    SimConfig,
    SteadyStateMetrics,
    simulate,
    steady_state_metrics,
)
from .degradation import DegradationParams, apply_stress_step
from .device import DeviceRatings, DeviceState, SoaViolation, check_soa
from .errors import GanStressError, InvalidParameterError, NumericInstabilityError

#: Default sampling density for the log-spaced measurement schedule.
SAMPLES_PER_DECADE = 20
#: Decades below the cell duration covered by the default schedule.
DEFAULT_SCHEDULE_DECADES = 3.0

#: Campaign drive defaults: fast PWM keeps the switch in continuous
#: conduction so the clamp holds the drain at the stress level off-time.
#: The off-phase current ripple grows with stress voltage; 5 MHz keeps the
#: current continuous up to ~130 V stress with the default inductor.
CAMPAIGN_DRIVE = DriveSignal(frequency=5e6, duty=0.7)
CAMPAIGN_SIM = SimConfig(steps_per_period=400, n_periods=140, settle_fraction=0.5)

_TUNE_TOLERANCE = 0.02
_TUNE_MAX_ITERATIONS = 20


def default_sample_times(duration: float) -> list[float]:
    """Log-spaced schedule: SAMPLES_PER_DECADE points per decade ending at
    ``duration`` and spanning DEFAULT_SCHEDULE_DECADES decades."""
    n = round(SAMPLES_PER_DECADE * DEFAULT_SCHEDULE_DECADES) + 1
    lo = math.log10(duration) - DEFAULT_SCHEDULE_DECADES
    return [float(t) for t in np.logspace(lo, math.log10(duration), n)]


@dataclass(frozen=True)
class StressCell:
    """One campaign cell: stress level, temperature, drive target, schedule."""

    v_stress: float                 # output clamp / stress level, V
    temp: float                     # K
    i_drive: float = 0.4            # on-time average inductor current target, A
    duty: float = 0.7
    duration: float = 1000.0        # min
    sample_times: Optional[tuple[float, ...]] = None  # minutes; default log schedule
    shape_factor: float = 1.0       # extraction shape factor for the clamp-held waveform

    def __post_init__(self):
        if not self.duration > 0.0:
            raise InvalidParameterError(f"duration must be > 0 min, got {self.duration}")
        if not 0.0 < self.duty < 1.0:
            raise InvalidParameterError(f"duty must be in (0, 1), got {self.duty}")
        if not self.v_stress > 0.0:
            raise InvalidParameterError(f"v_stress must be > 0, got {self.v_stress}")
        if not self.temp > 0.0:
            raise InvalidParameterError(f"temp must be > 0 K, got {self.temp}")
        if not self.i_drive > 0.0:
            raise InvalidParameterError(f"i_drive must be > 0, got {self.i_drive}")
        if not self.shape_factor > 0.0:
            raise InvalidParameterError(f"shape_factor must be > 0, got {self.shape_factor}")
        if self.sample_times is not None:
            ts = tuple(float(t) for t in self.sample_times)
            if not ts:
                raise InvalidParameterError("sample_times must be non-empty when given")
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise InvalidParameterError("sample_times must be strictly increasing")
            if ts[0] <= 0.0 or ts[-1] > self.duration:
                raise InvalidParameterError(
                    f"sample_times must lie in (0, {self.duration}], got [{ts[0]}, {ts[-1]}]"
                )
            object.__setattr__(self, "sample_times", ts)

    def schedule(self) -> list[float]:
        if self.sample_times is not None:
            return list(self.sample_times)
        return default_sample_times(self.duration)


@dataclass
class CellResult:
    """Everything one cell produced, including partial results on abort."""

    cell: StressCell
    samples: list[RdsSample]
    v_max_measured: float
    vin_tuned: float
    fit: Optional[FitResult]
    soa_violations: list[tuple[int, SoaViolation]]  # (sample index, violation)
    quality_flags: list[str] = field(default_factory=list)
    aborted: bool = False
    abort_reason: str = ""


@dataclass
class CampaignResult:
    """Ordered per-cell results plus run metadata.

    ``created_at`` is in-memory metadata only; emitted files are
    byte-deterministic and carry the config hash, never wall-clock times.
    """

    cells: list[CellResult]
    config_hash: str = ""
    created_at: str = ""


def cell_circuit(cell: StressCell, circuit: CircuitParams) -> CircuitParams:
    """Shared circuit adapted to one cell: supply set so the drain clamp
    lands exactly at the cell's stress level (clamp + diode drop = v_max)."""
    return replace(circuit, v_supply=cell.v_stress - 2.0 * circuit.diode_vf, r_load=None)


def tune_vin(cell: StressCell, circuit: CircuitParams, drive: DriveSignal,
             device: DeviceState, sim: SimConfig,
             tolerance: float = _TUNE_TOLERANCE,
             max_iterations: int = _TUNE_MAX_ITERATIONS) -> float:
    """Secant search for the input voltage that hits the cell's on-time
    average current target within ``tolerance`` (relative).

    The averaged-voltage relation makes the current nearly linear in vin, so
    the search converges in a few simulations. Raises if the target is not
    met within ``max_iterations``.
    """
    target = cell.i_drive

    def run(vin: float) -> float:
        w = simulate(replace(circuit, vin=vin), drive, device, sim)
        return steady_state_metrics(w, sim, drive).i_avg - target

    x0 = cell.duty * target * device.rds_on + (1.0 - cell.duty) * cell.v_stress
    x1 = 1.1 * x0
    f0 = run(x0)
    f1 = run(x1)
    if abs(f0) <= tolerance * target:
        return x0
    for _ in range(max_iterations):
        if abs(f1) <= tolerance * target:
            return x1
        if f1 == f0:
            break
        x0, x1 = x1, x1 - f1 * (x1 - x0) / (f1 - f0)
        if x1 <= 0.0:
            x1 = 0.5 * x0
        f0, f1 = f1, run(x1)
    if abs(f1) <= tolerance * target:
        return x1
    raise InvalidParameterError(
        f"drive-current tuning did not reach {target} A within {max_iterations} iterations"
    )


def run_cell(cell: StressCell, circuit: CircuitParams, drive: DriveSignal,
             ratings: DeviceRatings, deg: DegradationParams,
             sim: SimConfig = CAMPAIGN_SIM) -> CellResult:
    """Run one stress cell: degradation march + periodic simulated extraction.

    Degradation is evaluated at the cell's stress level (the clamp pins the
    measured v_max there). SOA violations are recorded per sample and the
    run continues; a numeric instability aborts the cell but keeps the
    samples already taken. Deterministic for identical inputs.
    """
    circ = cell_circuit(cell, circuit)
    drv = replace(drive, duty=cell.duty)
    state = DeviceState(rds_on_nominal=ratings.rds_on_nominal)
    try:
        vin = tune_vin(cell, circ, drv, state, sim)
    except (NumericInstabilityError, InvalidParameterError) as exc:
        return CellResult(cell=cell, samples=[], v_max_measured=0.0,
                          vin_tuned=float("nan"), fit=None, soa_violations=[],
                          aborted=True, abort_reason=f"drive tuning: {exc}")
    circ = replace(circ, vin=vin)

    samples: list[RdsSample] = []
    violations: list[tuple[int, SoaViolation]] = []
    flags: list[str] = []
    v_max_measured = 0.0
    aborted = False
    abort_reason = ""
    t_prev = 0.0
    for idx, t_k in enumerate(cell.schedule()):
        state = apply_stress_step(state, deg, cell.v_stress, cell.temp, t_k - t_prev)
        t_prev = t_k
        try:
            w = simulate(circ, drv, state, sim)
        except NumericInstabilityError as exc:
            aborted = True
            abort_reason = f"sample {idx} (t = {t_k:g} min): {exc}"
            break
        m: SteadyStateMetrics = steady_state_metrics(w, sim, drv)
        v_max_measured = max(v_max_measured, m.v_max)
        for viol in check_soa(ratings, m.v_max, m.i_peak, cell.temp):
            violations.append((idx, viol))
        r = extract_rds_on(m.v_in_avg, m.v_max, cell.duty, m.i_avg, cell.shape_factor)
        if r <= 0.0:
            flags.append(f"sample {idx} (t = {t_k:g} min): non-positive extraction {r!r}")
            continue
        samples.append(RdsSample(t_k, r))

    fit = fit_log_time(samples) if len(samples) >= 2 else None
    return CellResult(cell=cell, samples=samples, v_max_measured=v_max_measured,
                      vin_tuned=vin, fit=fit, soa_violations=violations,
                      quality_flags=flags, aborted=aborted, abort_reason=abort_reason)


def run_matrix(cells: list[StressCell], circuit: CircuitParams, drive: DriveSignal,
               ratings: DeviceRatings, deg: DegradationParams,
               sim: SimConfig = CAMPAIGN_SIM) -> CampaignResult:
    """Run every cell independently; output order matches the input order.

    A cell abort is recorded in that cell's result and never fails the
    matrix."""
    results = []
    for cell in cells:
        try:
            results.append(run_cell(cell, circuit, drive, ratings, deg, sim))
        except GanStressError as exc:
            results.append(CellResult(cell=cell, samples=[], v_max_measured=0.0,
                                      vin_tuned=float("nan"), fit=None,
                                      soa_violations=[], aborted=True,
                                      abort_reason=str(exc)))
    return CampaignResult(cells=results)
