"""Coding gain: why the information symbols are rotated before transmit.

For a single-group codeword difference the determinant collapses to a
product of signed sums; over plain integer offsets that product can
vanish, so each group's symbols are passed through an orthogonal
rotation with nonvanishing product distance first.
"""

import numpy as np

from stbc import build_rate1_4group, builtin_rotation, extract_W, min_determinant
from stbc.coding_gain import default_encoder, identity_encoder
from stbc.decoder import constellation

cons = constellation("4qam")

design = build_rate1_4group(3)
w = extract_W(design)
print("sign basis W from the first group's diagonals (8 antennas):")
print(np.array_str(w, precision=3, suppress_small=True))
print(f"orthogonality residual: {np.abs(w.T @ w - np.eye(4)).max():.1e}")

for dim in (2, 4, 8):
    spec = builtin_rotation(dim)
    print(f"\nbuiltin rotation dim {dim}: min |prod (U d)_j| = "
          f"{spec.min_product_distance_value:.6f} over {spec.certified_over}")

# ---------------------------------------------------------------------------
# unrotated integer differences can zero the determinant; rotation fixes it
# ---------------------------------------------------------------------------
d4 = build_rate1_4group(2)
plain = min_determinant(d4, identity_encoder(d4, cons.pam),
                        diff_levels=np.array([-2.0, 0.0, 2.0]))
rotated = min_determinant(d4, default_encoder(d4, cons.pam))
print(f"\n4 antennas, single-group differences:")
print(f"  unrotated integer offsets: min det = {plain.min_det:g} "
      f"(vanishes at difference {plain.argmin})")
print(f"  rotated 4-QAM encoding:    min det = {rotated.min_det:.4f} > 0")
print(f"  closed form vs literal determinant gap: {rotated.max_disagreement:.2e}")
