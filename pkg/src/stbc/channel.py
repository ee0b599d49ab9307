"""Rayleigh block-fading channel sampling and R-matrix structure profiling.

The complex transmission Y = c H S + N is equivalent to the real model

    tilde(vec(Y)) = c H_eq s + tilde(vec(N)),   H_eq = (I_T x realify(H)) G,

with G the design's generator matrix.  Whenever two weight matrices
satisfy A_i A_j^H + A_j A_i^H = 0 the corresponding columns of H_eq are
orthogonal for every H, which pins structural zeros into the R factor of
the column-ordered QR.  For the builtin designs (layer-major,
group-contiguous weight order) each layer's diagonal R block collapses
to I_4 x V with V upper triangular of size n_t/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .designs import STBCDesign, generator_matrix
from .errors import DimensionMismatchError, RankDeficientError
from .linalg import gram_schmidt_qr, kron, realify

__all__ = [
    "ChannelRealization",
    "RProfile",
    "LayerBlock",
    "sample_channel",
    "equivalent_channel",
    "column_orthogonality_pairs",
    "mandated_zero_mask",
    "r_profile",
]


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One i.i.d. CN(0,1) channel draw plus its stream annotation."""

    H: np.ndarray
    lineage: str = ""

    @property
    def n_r(self) -> int:
        return self.H.shape[0]

    @property
    def n_t(self) -> int:
        return self.H.shape[1]


def sample_channel(
    n_t: int, n_r: int, rng: np.random.Generator, lineage: str = ""
) -> ChannelRealization:
    """Draw H with i.i.d. circularly symmetric unit-variance entries.

    Real and imaginary parts are independent N(0, 1/2), so each complex
    entry has variance one.
    """
    h = rng.standard_normal((n_r, n_t)) + 1j * rng.standard_normal((n_r, n_t))
    h *= np.sqrt(0.5)
    h.setflags(write=False)
    return ChannelRealization(H=h, lineage=lineage)


def equivalent_channel(H: np.ndarray, design: STBCDesign) -> np.ndarray:
    """Real equivalent channel (I_T x realify(H)) G, shape 2*n_r*T x 2k.

    Satisfies tilde(vec(H S(s))) = H_eq s for the unnormalized codeword
    map; energy normalization is applied by the caller where needed.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[1] != design.n_t:
        raise DimensionMismatchError(
            f"channel shape {H.shape} does not match n_t={design.n_t}"
        )
    g = generator_matrix(design)
    return kron(np.eye(design.T), realify(H)) @ g


def column_orthogonality_pairs(
    design: STBCDesign, tol: float = 1e-12
) -> set[tuple[int, int]]:
    """All 0-based index pairs (i < j) with A_i A_j^H + A_j A_i^H = 0.

    For every such pair the i-th and j-th columns of H_eq are orthogonal
    for every channel realization.
    """
    ws = design.weight_stack
    n = len(design.weights)
    pairs = set()
    for i in range(n):
        for j in range(i + 1, n):
            resid = np.abs(
                ws[i] @ ws[j].conj().T + ws[j] @ ws[i].conj().T
            ).max()
            if resid <= tol:
                pairs.add((i, j))
    return pairs


def mandated_zero_mask(design: STBCDesign) -> np.ndarray:
    """Boolean 2k x 2k mask of R entries forced to zero for every channel.

    Everything strictly below the diagonal, plus -- inside each layer's
    diagonal block -- all entries outside the I_4 x (upper triangular)
    pattern.  Off-diagonal layer blocks carry no guaranteed zeros.
    """
    n = design.n_real_symbols
    gs = design.group_size
    per_layer = n // design.layers
    mask = np.tril(np.ones((n, n), dtype=bool), k=-1)
    for layer in range(design.layers):
        lo = layer * per_layer
        for p in range(per_layer // gs):
            for q in range(per_layer // gs):
                rs = slice(lo + p * gs, lo + (p + 1) * gs)
                cs = slice(lo + q * gs, lo + (q + 1) * gs)
                if p != q:
                    mask[rs, cs] = True
                else:
                    mask[rs, cs] = ~np.triu(np.ones((gs, gs), dtype=bool))
    return mask


@dataclass(frozen=True, eq=False)
class LayerBlock:
    """Structure summary of one layer's diagonal R block."""

    layer: int
    kron_identity: bool
    V: np.ndarray
    max_cross_group: float
    max_block_mismatch: float


@dataclass(frozen=True, eq=False)
class RProfile:
    """R factor of the (column-normalized) equivalent channel QR."""

    R: np.ndarray
    zero_mask: np.ndarray
    layer_blocks: tuple[LayerBlock, ...]
    tol: float

    def zero_count(self) -> int:
        return int(self.zero_mask.sum())

    def mask_text(self) -> str:
        """Text grid: '.' for a zero entry, 'x' otherwise."""
        return "\n".join(
            "".join("." if z else "x" for z in row) for row in self.zero_mask
        )


def profile_over_channels(
    design: STBCDesign,
    n_r: int,
    n_seeds: int,
    tol: float = 1e-9,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[RProfile]]:
    """R-profiles over ``n_seeds`` random channels.

    Returns (mean |R|, max |R|, always-zero mask, per-seed profiles); an
    entry is in the always-zero mask when it stays below tol for every
    sampled channel realization.
    """
    from .rng import CTX_PROFILE, substream  # local import avoids a cycle

    profiles = []
    for s in range(n_seeds):
        h = sample_channel(design.n_t, n_r, substream(seed, CTX_PROFILE, 0, s)).H
        profiles.append(r_profile(equivalent_channel(h, design), tol, design))
    mags = np.stack([np.abs(p.R) for p in profiles])
    always_zero = np.all(np.stack([p.zero_mask for p in profiles]), axis=0)
    return mags.mean(axis=0), mags.max(axis=0), always_zero, profiles


def r_profile(
    H_eq: np.ndarray,
    tol: float = 1e-9,
    design: STBCDesign | None = None,
) -> RProfile:
    """QR the column-normalized equivalent channel and map its zeros.

    Zero detection is |R(i,j)| < tol after scaling every column of H_eq
    to unit norm.  When ``design`` is given, each layer's diagonal block
    is additionally classified: it is flagged ``kron_identity`` when the
    four per-group sub-blocks are equal upper-triangular copies (within
    tol), i.e. the block factors as I_4 x V.
    """
    H_eq = np.asarray(H_eq, dtype=float)
    norms = np.linalg.norm(H_eq, axis=0)
    if np.any(norms == 0.0):
        raise RankDeficientError("equivalent channel has a zero column")
    _, r = gram_schmidt_qr(H_eq / norms)
    mask = np.abs(r) < tol
    blocks: list[LayerBlock] = []
    if design is not None:
        n = design.n_real_symbols
        if r.shape[0] != n:
            raise DimensionMismatchError(
                f"R is {r.shape[0]}x{r.shape[0]} but the design has {n} symbols"
            )
        gs = design.group_size
        per_layer = n // design.layers
        n_groups = per_layer // gs
        for layer in range(design.layers):
            lo = layer * per_layer
            block = r[lo : lo + per_layer, lo : lo + per_layer]
            v = block[:gs, :gs]
            cross = 0.0
            mismatch = 0.0
            for p in range(n_groups):
                for q in range(n_groups):
                    sub = block[p * gs : (p + 1) * gs, q * gs : (q + 1) * gs]
                    if p != q:
                        cross = max(cross, float(np.abs(sub).max()))
                    else:
                        mismatch = max(mismatch, float(np.abs(sub - v).max()))
            upper_ok = bool(np.abs(np.tril(v, k=-1)).max() <= tol) if gs > 1 else True
            blocks.append(
                LayerBlock(
                    layer=layer,
                    kron_identity=bool(cross <= tol and mismatch <= tol and upper_ok),
                    V=v.copy(),
                    max_cross_group=cross,
                    max_block_mismatch=mismatch,
                )
            )
    return RProfile(R=r, zero_mask=mask, layer_blocks=tuple(blocks), tol=tol)
