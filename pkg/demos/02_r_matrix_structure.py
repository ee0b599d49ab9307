"""Equivalent-channel R-matrix structure.

The weight-level orthogonality condition A_i A_j^H + A_j A_i^H = 0 makes
columns of the equivalent channel orthogonal for every channel draw,
which pins zeros into the R factor of its QR: per layer, the diagonal
block collapses to I_4 x V.  Fewer projections per column means larger
R diagonals, which is also why these codes keep more ergodic capacity.
"""

import numpy as np

from stbc import (
    build_rate1_4group,
    column_orthogonality_pairs,
    equivalent_channel,
    extend_full_rate,
    profile_over_channels,
    r_profile,
    sample_channel,
)
from stbc.rng import substream

rate1 = build_rate1_4group(3)
rate2 = extend_full_rate(rate1, 2)

pairs = column_orthogonality_pairs(rate2)
print(f"rate-2 design: {len(pairs)} weight pairs are orthogonal at the "
      f"weight level (of {32 * 31 // 2} total)")

h = sample_channel(8, 2, substream(7)).H
prof = r_profile(equivalent_channel(h, rate2), design=rate2)
print("\nzero mask of R for one random channel ('.' = structural zero):")
print(prof.mask_text())
for blk in prof.layer_blocks:
    print(f"layer {blk.layer + 1}: I4-block structure = {blk.kron_identity} "
          f"(cross-group residual {blk.max_cross_group:.1e}, "
          f"sub-block mismatch {blk.max_block_mismatch:.1e})")

# the pattern is structural: it survives every channel realization
_, max_abs, always_zero, _ = profile_over_channels(rate2, 2, 50, seed=1)
print(f"\nacross 50 channels: {int(always_zero.sum())} entries of R stay "
      f"below 1e-9 every time")

# compare with the rate-1 code seen by a single receive antenna
prof1 = r_profile(
    equivalent_channel(sample_channel(8, 1, substream(8)).H, rate1),
    design=rate1,
)
v = prof1.layer_blocks[0].V
print("\nrate-1 code, one receive antenna: R = I_4 x V with V =")
print(np.array_str(v, precision=3, suppress_small=True))
