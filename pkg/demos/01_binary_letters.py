"""
Two letters, one qubit
======================

Two non-orthogonal letter states with real overlap kappa, and the best
single-letter measurement.
"""

import numpy as np

from qdecode import helstrom_binary, make_letter_pair
from qdecode.codebook import letter_error_probability

# letters for kappa = 0.6 in the measurement basis {|up>, |down>}
lp = make_letter_pair(0.6)
print("plus  =", lp.plus.real)
print("minus =", lp.minus.real)
print("<plus|minus> =", np.vdot(lp.plus, lp.minus).real)

# minimum-error measurement with equal priors
err, (w_plus, w_minus) = helstrom_binary(lp.plus, lp.minus, 0.5, 0.5)
print("error probability:", err)

# for this pair the optimal vectors are just |up> and |down>
print("optimal vectors:", np.round(w_plus.real, 12), np.round(w_minus.real, 12))

# the error grows with the overlap
for k in (0.0, 0.3, 0.6, 0.9, 0.99):
    print(f"kappa={k:4.2f}  p={letter_error_probability(k):.6f}")
