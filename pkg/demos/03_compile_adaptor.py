"""
From a measurement to a gate netlist
====================================

The optimal collective measurement is realized as a unitary followed by a
plain letter-by-letter measurement.  The unitary is split into plane
rotations and each rotation into one- and two-qubit gates.
"""

import numpy as np

from qdecode import compile_codebook, make_codebook, netlist_to_matrix
from qdecode.reference import pair_adaptor, pair_rotation_angles

kappa = 0.6
cb = make_codebook(kappa, ["++", "--"])

# symmetric completion keeps the adaptor as close to the identity as possible
res = compile_codebook(cb, completion="symmetric")
np.set_printoptions(precision=6, suppress=True)
print("adaptor U:\n", res.unitary.real)
print("closed form max deviation:", np.max(np.abs(res.unitary - pair_adaptor(kappa))))

# plane rotations, in product order T21 T31 T32 T41 T42 T43
ref = pair_rotation_angles(kappa)
print("\n (j,i)   cos g      sin g      closed cos  closed sin   RY angle")
for rot in res.rotations:
    c, s = ref[(rot.j, rot.i)]
    print(f" ({rot.j},{rot.i})  {np.cos(rot.gamma):+.6f}  {np.sin(rot.gamma):+.6f}   {c:+.6f}   {s:+.6f}   {2 * rot.gamma:+.6f}")

# the lowered netlist
print("\ngate counts:", res.netlist.counts())
print("reconstruction error:", res.reconstruction_error)
print("expected decoding error:", res.expected_error)

# every outcome of the letter measurement maps back to a codeword
for k, word in sorted(res.assignment.items()):
    print(f"outcome {k:02b} -> {cb.words[word]}")

# the netlist in JSON lines, first few gates
print(res.netlist.to_jsonl().splitlines()[:4])

# a three-letter code: the 8x8 adaptor and its netlist
cb3 = make_codebook(0.9, ["+++", "+--", "--+", "-+-"])
res3 = compile_codebook(cb3)
print("\nlength-3 code: error", res3.expected_error, "gates", len(res3.netlist))
print("netlist == adaptor (up to phase):", np.allclose(netlist_to_matrix(res3.netlist) / netlist_to_matrix(res3.netlist)[0, 0] * res3.unitary[0, 0], res3.unitary))
