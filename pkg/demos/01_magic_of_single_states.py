"""How much magic do familiar single-qubit states carry?

Walks through the basic measures: the Pauli moment N_alpha, the stabilizer
purity Xi_alpha, the stabilizer Renyi entropy M_alpha, incompatibility and
coherence, evaluated on stabilizer states, the H-type state (the saddle of
N_alpha on the Bloch sphere) and the T-type state (its minimum).
"""
import numpy as np

from magicdist import (
    BlochVector,
    PureState,
    from_bloch,
    incompatibility,
    magic_report,
    pauli_spectrum_fast,
    single_qubit_cliffords,
    state_from_amplitudes,
    to_bloch,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)
INV_SQRT3 = 1.0 / np.sqrt(3.0)

states = {
    "|0>": state_from_amplitudes([1, 0]),
    "|+>": state_from_amplitudes([INV_SQRT2, INV_SQRT2]),
    "|H>-type (X+Z)/sqrt2": from_bloch(BlochVector(INV_SQRT2, 0, INV_SQRT2)),
    "|T>-type (1,1,1)/sqrt3": from_bloch(BlochVector(INV_SQRT3, INV_SQRT3, INV_SQRT3)),
}

print("state                        N_2      Xi_2     M_2 (nats)  Gamma_2  coherence")
for name, s in states.items():
    r = magic_report(pauli_spectrum_fast(s), 2.0, state=s)
    print(
        f"{name:27s}  {r.n_alpha:.5f}  {r.xi_alpha:.5f}  {r.m_alpha + 0.0:.6f}"
        f"   {r.gamma_alpha:.4f}   {r.coherence:.5f}"
    )

# Stabilizer states carry zero entropy; the H-type state sits exactly at
# M_2 = log(4/3) = 0.28768..., and the T-type state at the maximum
# log(3/2) = 0.40546...  Incompatibility with the three Pauli axes is
# largest (Gamma_2 = 4) precisely on stabilizer states: magic is an
# incompatibility deficit.

print()
print("The 12 states of the Clifford orbit of |H>:")
h = states["|H>-type (X+Z)/sqrt2"]
orbit = set()
for u in single_qubit_cliffords():
    mapped = PureState(u @ h.amplitudes, 2, 1)
    b = to_bloch(mapped)
    orbit.add(tuple(float(v) for v in np.round([b.n1, b.n2, b.n3], 6) + 0.0))
for vec in sorted(orbit):
    print(f"   Bloch ({vec[0]:+.6f}, {vec[1]:+.6f}, {vec[2]:+.6f})")
print(f"orbit size: {len(orbit)} (the saddle points of N_alpha, all with N_2 = 1/2)")

print()
print("Incompatibility orders on |H>:")
for alpha in (1, 2, 3):
    print(f"   Gamma_{alpha} = {incompatibility(h, alpha):.6f}")
