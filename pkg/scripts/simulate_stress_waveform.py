#!/usr/bin/env python3
"""Simulate the stress converter at its published component values
(10 V in, 10 uH, 25 pF, 100 V clamp supply, D = 0.7) and report the
steady-state drain metrics. Writes the waveform CSV next to the report.

Usage: python scripts/simulate_stress_waveform.py [out_dir]
"""

import sys
from pathlib import Path

from ganstress import CircuitParams, DeviceState, DriveSignal, SimConfig, simulate, steady_state_metrics
from ganstress.results import emit_metrics, emit_results

OUT_DIR = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results_waveform")

circuit = CircuitParams()         # published component values
drive = DriveSignal(frequency=100e3, duty=0.7)
sim = SimConfig(steps_per_period=1000, n_periods=60, settle_fraction=0.5)

wave = simulate(circuit, drive, DeviceState(rds_on_nominal=3.3), sim)
metrics = steady_state_metrics(wave, sim, drive)

print(f"v_max    = {metrics.v_max:.3f} V   (clamp at v_supply + diode_vf = "
      f"{circuit.v_supply + circuit.diode_vf:.1f} V)")
print(f"v_in_avg = {metrics.v_in_avg:.3f} V")
print(f"i_avg    = {metrics.i_avg:.4f} A (on-time mean)")
print(f"i_peak   = {metrics.i_peak:.4f} A")

OUT_DIR.mkdir(parents=True, exist_ok=True)
for p in emit_results(wave, OUT_DIR) + emit_metrics(metrics, OUT_DIR):
    print(p)
