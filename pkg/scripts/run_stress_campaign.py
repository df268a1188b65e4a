#!/usr/bin/env python3
"""Run the three reported stress classes (60/85/110 V peak, 400 mA, D=0.7)
and write per-cell series plus the fitted log-time summary.

Usage: python scripts/run_stress_campaign.py [out_dir]
"""

import sys
from pathlib import Path

from ganstress import CircuitParams, DegradationParams, EPC2038, StressCell, run_matrix
from ganstress.campaign import CAMPAIGN_DRIVE, CAMPAIGN_SIM
from ganstress.results import emit_results

OUT_DIR = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results_campaign")

cells = [
    StressCell(v_stress=v, temp=298.15, i_drive=0.4, duty=0.7, duration=1000.0)
    for v in (60.0, 85.0, 110.0)
]

result = run_matrix(cells, CircuitParams(), CAMPAIGN_DRIVE, EPC2038,
                    DegradationParams(), CAMPAIGN_SIM)

OUT_DIR.mkdir(parents=True, exist_ok=True)
paths = emit_results(result, OUT_DIR)

for idx, cell_result in enumerate(result.cells):
    fit = cell_result.fit
    n_soa = len(cell_result.soa_violations)
    print(f"cell{idx:02d}: v_max = {cell_result.v_max_measured:.2f} V, "
          f"vin tuned = {cell_result.vin_tuned:.3f} V, "
          f"slope = {fit.slope:.4e} ohm/ln-min, r^2 = {fit.r_squared:.5f}, "
          f"soa flags = {n_soa}")
for p in paths:
    print(p)
