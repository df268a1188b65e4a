"""Shared checks for the physics invariants of simulated waveforms."""

from ganstress import CircuitParams, SimConfig, Waveform
from ganstress.converter import settle_start_index


def worst_volt_second(w: Waveform, sim: SimConfig, circuit: CircuitParams) -> float:
    """Worst per-period |mean inductor voltage| / vin over post-settle periods.

    The mean inductor voltage over one period is L * delta(i) / T, so this
    is a periodicity check on the inductor current.
    """
    spp = sim.steps_per_period
    start = settle_start_index(sim)
    dt = w.t[1] - w.t[0]
    period = spp * dt
    worst = 0.0
    for a in range(start, len(w) - spp, spp):
        dv = abs(circuit.l_drain * (w.i_l[a + spp] - w.i_l[a]) / period)
        worst = max(worst, dv / circuit.vin)
    return worst


def worst_charge_balance(w: Waveform, sim: SimConfig, circuit: CircuitParams) -> float:
    """Worst per-period |net charge into c_out| / per-cycle charge throughput.

    Throughput is the diode charge delivered during the period (current while
    the gate is off and the branch conducts). Clamp spill keeps the capacitor
    voltage pinned, so net charge is measured as C * delta(v_out).
    """
    spp = sim.steps_per_period
    start = settle_start_index(sim)
    dt = w.t[1] - w.t[0]
    worst = 0.0
    for a in range(start, len(w) - spp, spp):
        sl = slice(a, a + spp)
        conducting = (~w.gate_on[sl]) & (w.i_l[sl] > 0)
        throughput = float(w.i_l[sl][conducting].sum()) * dt
        net = abs(circuit.c_out * (w.v_out[a + spp] - w.v_out[a]))
        if throughput > 0:
            worst = max(worst, net / throughput)
        else:
            worst = max(worst, net / max(circuit.c_out * circuit.vin, 1e-30))
    return worst


def post_settle_periods(w: Waveform, sim: SimConfig) -> int:
    return (len(w) - 1 - settle_start_index(sim)) // sim.steps_per_period


def clamp_margin(w: Waveform, circuit: CircuitParams) -> float:
    """Max v_ds relative to the clamp bound v_supply + diode_vf."""
    return float(w.v_ds.max()) / (circuit.v_supply + circuit.diode_vf)
