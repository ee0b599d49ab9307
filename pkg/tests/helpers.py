"""Shared oracles for the test suite (independent of the library paths
they check wherever that matters)."""

import numpy as np

from stbc.channel import sample_channel
from stbc.decoder import full_symbol_matrix
from stbc.designs import codeword
from stbc.rng import substream

CTX_TEST = 11


def literal_product(cliff, *indices, scalar=1.0):
    """Left-to-right matrix product of generators, bypassing the exact
    sign bookkeeping (this is the oracle side)."""
    out = np.eye(cliff.n, dtype=complex) * scalar
    for i in indices:
        out = out @ cliff.generators[i - 1]
    return out


def expected_table_n8(cliff):
    """The 16 weight matrices of the eight-antenna rate-1 code, written
    out column by column with explicit signs (independent construction)."""
    p = lambda *idx, s=1.0: literal_product(cliff, *idx, scalar=s)
    return [
        # group 1
        p(), p(4, 5, s=1j), p(1, 2, 3), p(1, 2, 3, 4, 5, s=1j),
        # group 2
        p(1), p(1, 4, 5, s=1j), -p(2, 3), -p(2, 3, 4, 5, s=1j),
        # group 3
        p(2), p(2, 4, 5, s=1j), p(1, 3), p(1, 3, 4, 5, s=1j),
        # group 4
        p(3), p(3, 4, 5, s=1j), -p(1, 2), -p(1, 2, 4, 5, s=1j),
    ]


def random_trial(design, cons, encoder, n_r, snr, seed, trial,
                 noise_scale=1.0):
    """One transmit/receive draw: returns (Y, H, true level indices)."""
    rng = substream(seed, CTX_TEST, 0, trial)
    h = sample_channel(design.n_t, n_r, rng).H
    noise = np.sqrt(0.5) * (
        rng.standard_normal((n_r, design.T))
        + 1j * rng.standard_normal((n_r, design.T))
    )
    levels = rng.integers(0, len(cons.pam), size=design.n_real_symbols)
    s = full_symbol_matrix(design, encoder) @ cons.pam[levels]
    y = np.sqrt(snr / design.n_t) * (
        h @ (design.energy_scale * codeword(design, s))
    ) + noise_scale * noise
    return y, h, levels
