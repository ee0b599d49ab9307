"""Exact ML decoding: exhaustive oracle, per-group and conditional search.

All decoders minimize the same metric  || Y - sqrt(snr/n_t) H S ||^2
over the information symbols, where S is the energy-normalized codeword.
They differ only in how the search space is traversed:

* ``ml_oracle``         -- full enumeration of all M^k candidates.
* ``group_decode``      -- for rate-1 4-group designs the equivalent
  channel's cross-group columns are orthogonal, so the metric splits into
  four independent per-group terms; each group's n_t/2 real symbols are
  scanned separately (4 * M^{n_t/4} hypotheses) and the result is still
  the exact ML answer.
* ``conditional_decode``-- for an L-layer full-rate design the outer
  layers' M^{n_t(L-1)} hypotheses are enumerated, their contribution is
  cancelled from the received vector, and the first layer is group
  decoded conditionally: M^{n_t(L-1)} * 4 * M^{n_t/4} hypotheses, i.e.
  order M^{n_t(L-3/4)}.

Candidates are enumerated in lexicographic order of their per-real-symbol
alphabet indices (first symbol most significant), and ties are broken
toward the lexicographically smallest index vector, so the three
decoders agree exactly even on degenerate inputs.

``metric_evaluations`` counts scanned hypotheses. Group scans evaluate a
per-group partial metric per hypothesis; those count one evaluation each,
which is what makes the counters comparable across decoders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from .channel import equivalent_channel
from .coding_gain import Encoder, default_encoder
from .designs import STBCDesign, codeword, verify_group_decodable
from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    NotGroupDecodableError,
    TooLargeError,
)
from .linalg import kron, tilde_vec, vec

__all__ = [
    "Constellation",
    "DecodeResult",
    "ComplexityAccount",
    "square_qam",
    "constellation",
    "ml_oracle",
    "group_decode",
    "conditional_decode",
    "decode_auto",
    "complexity_account",
    "full_symbol_matrix",
]

_CHUNK = 1 << 14


@dataclass(frozen=True, eq=False)
class Constellation:
    """Square QAM constellation with unit average energy.

    ``pam`` holds the sqrt(M) ascending real component levels; complex
    point index (i, j) -> i * sqrt(M) + j maps component indices to the
    flat ``points`` array.
    """

    label: str
    points: np.ndarray
    pam: np.ndarray

    @property
    def size(self) -> int:
        return self.points.size

    def __post_init__(self):
        power = float(np.mean(np.abs(self.points) ** 2))
        if abs(power - 1.0) > 1e-12:
            raise ValueError(f"constellation power {power} != 1")


def square_qam(m: int) -> Constellation:
    """Unit-energy square M-QAM, M in {4, 16, 64, 256, ...}."""
    root = isqrt(m)
    if root * root != m or root % 2 or m < 4:
        raise ValueError(f"square QAM needs an even perfect-square size, got {m}")
    delta = np.sqrt(3.0 / (2.0 * (m - 1)))
    pam = delta * (2.0 * np.arange(root) - (root - 1))
    points = (pam[:, None] + 1j * pam[None, :]).reshape(-1)
    return Constellation(label=f"{m}qam", points=points, pam=pam)


def constellation(label: str) -> Constellation:
    """Parse labels like '4qam', '16-QAM'."""
    clean = label.lower().replace("-", "").replace("_", "")
    if not clean.endswith("qam"):
        raise ValueError(f"unsupported constellation {label!r} (square QAM only)")
    return square_qam(int(clean[:-3]))


@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Decoded info symbols plus bookkeeping.

    level_indices  -- per real symbol, index into the PAM component set
    symbol_indices -- per complex symbol, index into the constellation
    info           -- the decoded info levels (pre-rotation), length 2k
    metric         -- || Y - sqrt(snr/n_t) H S ||^2 recomputed from scratch
    """

    level_indices: tuple[int, ...]
    symbol_indices: tuple[int, ...]
    info: np.ndarray
    metric: float
    metric_evaluations: int


@dataclass(frozen=True)
class ComplexityAccount:
    """Predicted hypothesis counts per decoded codeword."""

    constellation_size: int
    oracle_evaluations: int
    group_evaluations: int | None
    conditional_evaluations: int | None
    order_exponent: float

    def describe(self) -> str:
        m = self.constellation_size
        parts = [f"oracle: {self.oracle_evaluations} = M^k hypotheses (M={m})"]
        if self.group_evaluations is not None:
            parts.append(f"group: {self.group_evaluations}")
        if self.conditional_evaluations is not None:
            parts.append(f"conditional: {self.conditional_evaluations}")
        parts.append(f"search order M^{self.order_exponent:g}")
        return "; ".join(parts)


def complexity_account(
    design: STBCDesign, constellation: Constellation
) -> ComplexityAccount:
    """Exact hypothesis counts for each decoder on this design."""
    p = len(constellation.pam)
    m = constellation.size
    gs = design.group_size
    oracle = p ** design.n_real_symbols  # == m ** design.k
    if design.layers == 1:
        group = len(design.groups) * p**gs
        conditional = None
        exponent = design.n_t / 4.0
    else:
        group = None
        outer = p ** (design.n_real_symbols - 2 * design.n_t)
        conditional = outer * 4 * p**gs
        exponent = design.n_t * (design.layers - 0.75)
    return ComplexityAccount(
        constellation_size=m,
        oracle_evaluations=oracle,
        group_evaluations=group,
        conditional_evaluations=conditional,
        order_exponent=exponent,
    )


def full_symbol_matrix(design: STBCDesign, encoder: Encoder | None) -> np.ndarray:
    """2k x 2k map from info levels to stored symbols: the first layer's
    four groups go through the encoder rotation, outer layers are raw."""
    n = design.n_real_symbols
    b = np.eye(n)
    if encoder is not None:
        first = 2 * design.n_t if design.layers > 1 else n
        b[:first, :first] = kron(
            np.eye(first // encoder.rotation.shape[0]), encoder.rotation
        )
    return b


def _effective_operator(
    Y: np.ndarray,
    H: np.ndarray,
    design: STBCDesign,
    cons: Constellation,
    snr: float,
    encoder: Encoder | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, Encoder | None, float]:
    """(y_tilde, phi, b_matrix, encoder, c): the real model y = phi x + n."""
    Y = np.asarray(Y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if Y.shape != (H.shape[0], design.T):
        raise DimensionMismatchError(
            f"received matrix shape {Y.shape} != ({H.shape[0]}, {design.T})"
        )
    if encoder is None:
        encoder = default_encoder(design, cons.pam)
    c = float(np.sqrt(snr / design.n_t)) * design.energy_scale
    b = full_symbol_matrix(design, encoder)
    phi = c * equivalent_channel(H, design) @ b
    return tilde_vec(vec(Y)), phi, b, encoder, c


def _final_metric(
    Y: np.ndarray,
    H: np.ndarray,
    design: STBCDesign,
    snr: float,
    b: np.ndarray,
    info: np.ndarray,
) -> float:
    """Metric recomputed from scratch in the complex domain."""
    s = design.energy_scale * codeword(design, b @ info)
    resid = np.asarray(Y, dtype=complex) - np.sqrt(snr / design.n_t) * (
        np.asarray(H, dtype=complex) @ s
    )
    return float(np.linalg.norm(resid) ** 2)


def _result(
    Y, H, design, snr, b, pam, level_indices, evaluations
) -> DecodeResult:
    levels = np.asarray(level_indices, dtype=int)
    info = pam[levels]
    root = len(pam)
    symbols = tuple(int(levels[2 * i] * root + levels[2 * i + 1])
                    for i in range(levels.size // 2))
    return DecodeResult(
        level_indices=tuple(int(v) for v in levels),
        symbol_indices=symbols,
        info=info,
        metric=_final_metric(Y, H, design, snr, b, info),
        metric_evaluations=int(evaluations),
    )


def ml_oracle(
    Y: np.ndarray,
    H: np.ndarray,
    design: STBCDesign,
    cons: Constellation,
    snr: float,
    encoder: Encoder | None = None,
    budget: int = 1 << 22,
) -> DecodeResult:
    """Globally exhaustive ML decoding over all M^k candidates."""
    if design.k > 8:
        raise TooLargeError(f"oracle limited to k <= 8 complex symbols, k={design.k}")
    pam = cons.pam
    n = design.n_real_symbols
    total = len(pam) ** n
    if total > budget:
        raise TooLargeError(f"M^k = {total} exceeds the budget of {budget}")
    y, phi, b, encoder, _ = _effective_operator(Y, H, design, cons, snr, encoder)

    shape = (len(pam),) * n
    best = np.inf
    best_idx = -1
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        x = pam[np.array(np.unravel_index(idx, shape))]  # (n, chunk)
        resid = y[:, None] - phi @ x
        metrics = np.einsum("ij,ij->j", resid, resid)
        j = int(np.argmin(metrics))
        if metrics[j] < best:
            best = float(metrics[j])
            best_idx = int(idx[j])
    levels = np.unravel_index(best_idx, shape)
    return _result(Y, H, design, snr, b, pam, levels, total)


@lru_cache(maxsize=64)
def _group_decodable(design: STBCDesign) -> bool:
    return verify_group_decodable(design, tol=1e-10).passed


def _group_tables(phi, pam, groups):
    """Per group: candidate levels (lex), projected images and their norms."""
    tables = []
    for g in groups:
        cols = phi[:, list(g)]
        shape = (len(pam),) * len(g)
        digits = np.array(np.unravel_index(np.arange(len(pam) ** len(g)), shape))
        xc = pam[digits]  # (gs, n_cand)
        images = cols @ xc
        qnorm = np.einsum("ij,ij->j", images, images)
        tables.append((digits, images, qnorm))
    return tables


def group_decode(
    Y: np.ndarray,
    H: np.ndarray,
    design: STBCDesign,
    cons: Constellation,
    snr: float,
    encoder: Encoder | None = None,
) -> DecodeResult:
    """Exact ML decoding of a rate-1 4-group design, one group at a time.

    Cross-group columns of the equivalent channel are orthogonal, so
    || y - phi x ||^2 = ||y||^2 + sum_p ( ||phi_p x_p||^2 - 2 <y, phi_p x_p> )
    decomposes exactly and each group term is minimized independently.
    """
    if design.layers != 1 or len(design.groups) != 4:
        raise NotGroupDecodableError(
            "group decoding needs a rate-1 design with four groups"
        )
    if not _group_decodable(design):
        raise NotGroupDecodableError(
            "design fails the cross-group dispersion condition"
        )
    y, phi, b, encoder, _ = _effective_operator(Y, H, design, cons, snr, encoder)
    pam = cons.pam
    levels: list[int] = []
    evaluations = 0
    for digits, images, qnorm in _group_tables(phi, pam, design.groups):
        metrics = qnorm - 2.0 * (y @ images)
        j = int(np.argmin(metrics))  # first occurrence == lex smallest
        levels.extend(int(v) for v in digits[:, j])
        evaluations += metrics.size
    return _result(Y, H, design, snr, b, pam, levels, evaluations)


def conditional_decode(
    Y: np.ndarray,
    H: np.ndarray,
    design: STBCDesign,
    cons: Constellation,
    snr: float,
    encoder: Encoder | None = None,
    budget: int = 1 << 26,
) -> DecodeResult:
    """Exact ML decoding of an L-layer design by outer-layer conditioning.

    Enumerates the outer layers' symbols, cancels their contribution and
    group-decodes the first layer for each hypothesis; the overall
    minimum (with lexicographic tie-break over the full index vector,
    first-layer symbols most significant) equals the oracle's answer.
    """
    if design.layers < 2:
        raise NotGroupDecodableError(
            "conditional decoding needs a layered (full-rate) design"
        )
    pam = cons.pam
    n = design.n_real_symbols
    n_first = 2 * design.n_t
    n_outer = n - n_first
    inner_groups = design.groups[:4]
    outer_total = len(pam) ** n_outer
    per_inner = sum(len(pam) ** len(g) for g in inner_groups)
    if outer_total * per_inner > budget:
        raise BudgetExceededError(
            f"{outer_total} outer hypotheses x {per_inner} inner scans "
            f"exceed the budget of {budget}"
        )
    y, phi, b, encoder, _ = _effective_operator(Y, H, design, cons, snr, encoder)
    phi_out = phi[:, n_first:]
    tables = _group_tables(phi, pam, inner_groups)

    out_shape = (len(pam),) * n_outer
    best_metric = np.inf
    best_tuple: tuple[int, ...] | None = None
    evaluations = 0
    for start in range(0, outer_total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, outer_total))
        out_digits = np.array(np.unravel_index(idx, out_shape))  # (n_outer, chunk)
        yp = y[:, None] - phi_out @ pam[out_digits]
        base = np.einsum("ij,ij->j", yp, yp)
        total = base.copy()
        arg_inner = []
        for digits, images, qnorm in tables:
            metrics = qnorm[:, None] - 2.0 * (images.T @ yp)  # (n_cand, chunk)
            picks = np.argmin(metrics, axis=0)  # first occurrence == lex
            arg_inner.append((digits, picks))
            total += metrics[picks, np.arange(picks.size)]
            evaluations += metrics.size
        chunk_best = float(total.min())
        if chunk_best > best_metric:
            continue
        for j in np.flatnonzero(total == chunk_best):
            cand: list[int] = []
            for digits, picks in arg_inner:
                cand.extend(int(v) for v in digits[:, picks[j]])
            cand.extend(int(v) for v in out_digits[:, j])
            cand_t = tuple(cand)
            if chunk_best < best_metric or (
                chunk_best == best_metric
                and (best_tuple is None or cand_t < best_tuple)
            ):
                best_metric = chunk_best
                best_tuple = cand_t
    assert best_tuple is not None
    return _result(Y, H, design, snr, b, pam, best_tuple, evaluations)


def decode_auto(
    Y: np.ndarray,
    H: np.ndarray,
    design: STBCDesign,
    cons: Constellation,
    snr: float,
    encoder: Encoder | None = None,
) -> DecodeResult:
    """Group decoding for rate-1 designs, conditional otherwise."""
    if design.layers == 1:
        return group_decode(Y, H, design, cons, snr, encoder)
    return conditional_decode(Y, H, design, cons, snr, encoder)
