"""
A controlled square root of NOT from atoms and a cavity
=======================================================

Two atoms pass Ramsey zones and a single-mode cavity.  With the right pulse
timing the sequence acts as a controlled square root of NOT on the atoms and
returns the cavity to vacuum.
"""

from dataclasses import replace

import numpy as np

from qdecode import cavity

pp = cavity.default_pulse_params()
print("detuning (rad/s):", pp.delta)
print("g_eff * t       :", pp.g_eff * pp.t, "(pi/4 =", np.pi / 4, ")")
print("tau, tau'       :", pp.tau, pp.tau_prime)

gate = cavity.composite_csqrtx(pp)
print("fidelity:", gate.fidelity, " cavity leak:", gate.leak)

# the 4x4 block on the atoms with the cavity in vacuum, global phase removed
r = gate.restricted / gate.restricted[0, 0]
np.set_printoptions(precision=4, suppress=True)
print(r)

# two passes give a CNOT
sq = gate.restricted @ gate.restricted
print("U^2 / phase:\n", (sq / sq[0, 0]).real)

# the gate depends on the second Ramsey pulse timing to a fraction of an optical cycle
for shift in (0.0, np.pi / 8, np.pi / 4, np.pi / 2, np.pi):
    bad = replace(pp, tau_prime=pp.tau_prime + shift / pp.nu)
    print(f"phase error {shift:5.3f} rad -> fidelity {cavity.composite_csqrtx(bad).fidelity:.6f}")

# solving for tau' from a generic starting point
start = replace(pp, tau_prime=0.97e-6)
solved = cavity.solve_phase_condition(start, near=1e-6)
print("solved tau':", solved.tau_prime, "residual:", cavity.phase_condition_residual(solved))

# which readings of the pulse-to-pulse phase relation give a working gate
generic = cavity.default_pulse_params(t=100.0000123e-6)
for row in cavity.phase_condition_variants(generic):
    print(row)

# the mirror-image gate, firing on the upper control level
up = cavity.default_pulse_params(fire_on="up")
print("fire on up: fidelity", cavity.composite_csqrtx(up, fire_on="up").fidelity)
