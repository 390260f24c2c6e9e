"""
Decoding a two-letter codeword as one vector
============================================

Codewords {++, --}: letter-by-letter decoding versus one measurement on the
joint four-dimensional state.
"""

import numpy as np

from qdecode import channel_and_information, make_codebook, overlap_matrix, square_root_measurement
from qdecode.codebook import letter_error_probability
from qdecode.linalg import sqrtm_psd

kappa = 0.6
cb = make_codebook(kappa, ["++", "--"])

# prior-weighted Gram matrix and its square root
G = overlap_matrix(cb)
print("Gram:\n", G.real)
R = sqrtm_psd(G)
print("sqrt(Gram):\n", np.round(R.real, 6))

# the diagonal entries agree, so the square-root measurement is already optimal
ms = square_root_measurement(cb)
rep = channel_and_information(cb, ms)
print("collective error:", rep.error_prob)
print("closed form     :", 0.5 * (1 - np.sqrt(1 - kappa**4)))

# letter-by-letter: majority vote is impossible with two letters, so a
# disagreement is a coin toss
p = letter_error_probability(kappa)
separate = p * p + p * (1 - p)
print("separate decoding error:", separate)

# the measurement vectors in the product basis (up-up, up-down, down-up, down-down)
for word, v in zip(cb.words, ms.vectors):
    print(word, np.round(v.real, 6))

print("channel:\n", rep.channel)
print("information per block (bits):", rep.mutual_info_bits)
