"""Reference scenarios: every published number recomputed from first principles.

Each :class:`Check` pairs a computed value with the published figure and an
absolute tolerance. ``run_checks`` is shared by the ``reproduce`` command and
the acceptance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dmc, holevo, photon, receivers
from .qstate import basis, ket_from_angle

DEG45 = math.pi / 4


@dataclass(frozen=True)
class Check:
    name: str
    computed: float
    reference: float
    tolerance: float
    unit: str

    @property
    def delta(self) -> float:
        return abs(self.computed - self.reference)

    @property
    def passed(self) -> bool:
        return self.delta <= self.tolerance


def _binary_45():
    return receivers.SignalSet((ket_from_angle(0.0), ket_from_angle(DEG45)), ("s0", "s1"))


@lru_cache(maxsize=None)
def _pair_trine():
    pairs = receivers.pair_signals(receivers.trine_states())
    ch = receivers.measure_channel(pairs, receivers.square_root_measurement(pairs))
    return ch, dmc.blahut_arimoto(ch), holevo.maximize_holevo(list(pairs.states))


def run_checks() -> list[Check]:
    out: list[Check] = []

    def add(name, computed, reference, tol, unit="bit"):
        out.append(Check(name, float(computed), float(reference), float(tol), unit))

    sig = _binary_45()

    # horizontal filter -> Z-channel
    z = receivers.measure_channel(sig, receivers.polarization_filter(0.0))
    zc = dmc.blahut_arimoto(z)
    add("horizontal_filter_capacity", zc.capacity, 0.32, 0.005)
    add("horizontal_filter_q0", zc.optimal_input[0], 0.60, 0.005, "")

    # minimum-error filter -> BSC
    _, hb = receivers.helstrom_binary(*sig.states)
    add("helstrom_crossover", hb.transition[0, 1], 0.146, 0.001, "")
    add("helstrom_capacity", dmc.blahut_arimoto(hb).capacity, 0.40, 0.005)

    # unambiguous receiver -> erasure channel
    _, er = receivers.povm_binary_erasure(*sig.states)
    add("unambiguous_eps", er.transition[0, 2], 1 / math.sqrt(2), 1e-9, "")
    add("unambiguous_capacity", dmc.blahut_arimoto(er).capacity, 0.293, 0.005)

    h45 = holevo.maximize_holevo(list(sig.states))
    add("holevo_45deg", h45.capacity, 0.60, 0.005)
    add("holevo_45deg_q0", h45.optimal_priors[0], 0.5, 0.005, "")

    # trine
    trine = receivers.trine_states()
    par = receivers.measure_channel(trine, receivers.trine_povm_parallel())
    orth = receivers.measure_channel(trine, receivers.trine_povm_orthogonal())
    add("trine_parallel", dmc.blahut_arimoto(par).capacity, 0.33, 0.005)
    add("trine_orthogonal", dmc.blahut_arimoto(orth).capacity, 0.585, 0.005)
    add("trine_holevo", holevo.maximize_holevo(list(trine.states)).capacity, 1.0, 1e-6)
    filt, _ = receivers.helstrom_binary(trine.states[0], trine.states[1])
    sub = receivers.measure_channel(trine, filt)
    add("trine_binary_subchannel_p", sub.transition[0, 1], 0.067, 0.001, "")
    add("trine_binary_subchannel", dmc.blahut_arimoto(sub, support=[True, True, False]).capacity, 0.65, 0.005)

    # photon pairs
    pch, pcap, phol = _pair_trine()
    off = pch.transition[~np.eye(3, dtype=bool)]
    add("pair_diag", float(np.min(np.diag(pch.transition))), 0.97, 0.005, "")
    add("pair_offdiag", float(np.max(off)), 0.015, 0.005, "")
    add("pair_CS", pcap.capacity, 1.37, 0.01, "bit/pair")
    add("pair_CS_per_photon", pcap.capacity / 2, 0.68, 0.005, "bit/photon")
    add("pair_CN_total", phol.capacity, 1.50, 0.005, "bit/pair")
    add("pair_CN", phol.capacity / 2, 0.75, 0.005, "bit/photon")

    # attenuation
    add("lossy_helstrom_bsc", dmc.blahut_arimoto(dmc.compose_erasure(dmc.bsc(hb.transition[0, 1]), 0.1)).capacity,
        0.36, 0.005)
    eps_1db = dmc.erasure_from_db(1.0)
    add("lossy_orthogonal_1dB", dmc.blahut_arimoto(dmc.compose_erasure(dmc.identity_channel(2), eps_1db)).capacity,
        0.79, 0.005)
    add("lossy_orthogonal_1dB_holevo",
        holevo.attenuated_holevo([(0.5, basis(0)), (0.5, basis(1))], eps_1db), 0.79, 0.005)
    add("attenuation_dB_eps0.1", dmc.attenuation_db(0.1), 0.46, 0.005, "dB")

    # polarisation noise
    c_n, c_s = holevo.noisy_orthogonal_capacity(0.1)
    add("noise_d0.1_CN", c_n, 0.53, 0.005)
    add("noise_d0.1_CS", c_s, 0.53, 0.005)
    add("noise_d0.1_CN_minus_CS", c_n - c_s, 0.0, 1e-9)

    # photon counting
    for g1 in (0.1, 1.0, 10.0, 100.0):
        ip = photon.IntensityPair(0.0, g1)
        add(f"ook_C_over_gamma1[{g1:g}]", photon.ook_capacity(ip) / g1, 1 / math.e, 1e-9, "nat/photon")
        cph = photon.capacity_per_photon(ip)
        add(f"ook_nats_per_photon[{g1:g}]", cph, 1.0, 1e-9, "nat/photon")
        add(f"ook_bits_per_photon[{g1:g}]", cph / math.log(2), 1 / math.log(2), 1e-9, "bit/photon")
    for m in (0.5, 1.0, 3.0):
        ch = photon.ook_z_channel(m)
        add(f"z_unit_cost[m={m:g}]", photon.capacity_per_unit_cost(ch, [0.0, m]), 1.0, 1e-9, "nat/photon")
    fig7 = photon.emit_curve("fig7", [1e4])[0]
    add("cost_per_bit_gamma1_1e4", fig7.photons_per_bit, math.log(2), 0.01 * math.log(2), "photon/bit")
    add("band_limited_cph_m0.01", photon.band_limited_ook(0.01, check=True).nats_per_photon, 1.0, 0.01, "nat/photon")
    return out


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{'scenario':<{width}}  {'computed':>10}  {'reference':>10}  {'|delta|':>9}  {'tol':>8}  status"]
    for c in checks:
        lines.append(
            f"{c.name:<{width}}  {c.computed:>10.4f}  {c.reference:>10.4f}  {c.delta:>9.2e}  "
            f"{c.tolerance:>8.1e}  {'pass' if c.passed else 'FAIL'}")
    return "\n".join(lines)
