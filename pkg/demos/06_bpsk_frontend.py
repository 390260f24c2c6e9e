"""
Coherent-state letters
======================

Binary phase-shift keying uses |alpha> and |-alpha>.  After a displacement
the letters are |0> and |-2 alpha>, which span a qubit.
"""

import numpy as np

from qdecode import compile_codebook, make_bpsk_letters, make_codebook
from qdecode.codebook import Codebook

for alpha in (0.25, 0.5, 1.0, 2.0):
    f = make_bpsk_letters(alpha)
    print(f"alpha={alpha:4.2f}  n_max={f.n_max:2d}  <0|-2a>={f.overlap:.10f}  exp(-2a^2)={np.exp(-2 * alpha**2):.10f}")

# on the letter span, vacuum detection is the projector |a><a| and a click is |b><b|
f = make_bpsk_letters(0.5)
print(f.photon_counting_residuals())

# the letters written in the {|a>, |b>} qubit; the overlap is the only parameter
lp = f.qubit_letters()
print("plus:", np.round(lp.plus, 6), " minus:", np.round(lp.minus, 6))

# decoding the pair code directly in this basis
cb = Codebook(lp, ("++", "--"))
res = compile_codebook(cb)
print("pair code error:", res.expected_error, " closed form:", 0.5 * (1 - np.sqrt(1 - f.overlap**4)))

# larger amplitudes need more Fock levels than the default cap
try:
    make_bpsk_letters(3.0)
except Exception as exc:
    print(type(exc).__name__, exc)
print("alpha=3 with a larger cap:", make_bpsk_letters(3.0, n_max_cap=128).overlap)
