"""Seeded Monte-Carlo error-rate harness, verification suite, CSV output.

Transmission follows Y = sqrt(snr/n_t) H S + N with E||S||^2 = n_t T
(unit-power information symbols, energy-normalized weights).  Every trial
draws from its own counter-based substream keyed by (master seed, snr
point index, trial index), so a sweep is bit-reproducible regardless of
how trials are scheduled; per-trial draws are ordered channel, noise,
information symbols.

The CSV schema is (snr_db, trials, cer, ser, mean_evals, wall_time_s).
To keep re-runs byte-identical -- the reproducibility contract -- the
wall_time_s column is written as 0.0 unless measured timing is opted in,
in which case byte-identity across runs no longer holds; measured wall
time is always available on the in-memory records.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .clifford import (
    all_lambda_products,
    build_generators,
    products_commute,
    subset_square_sign,
    verify_generators,
    verify_traceless,
)
from .coding_gain import default_encoder, extract_W, min_determinant
from .channel import mandated_zero_mask, r_profile, sample_channel, equivalent_channel
from .decoder import (
    Constellation,
    DecodeResult,
    complexity_account,
    conditional_decode,
    constellation,
    decode_auto,
    full_symbol_matrix,
    group_decode,
    ml_oracle,
)
from .designs import (
    STBCDesign,
    build_rate1_4group,
    codeword,
    extend_full_rate,
    verify_theorem1,
)
from .errors import IntractableError
from .linalg import matrix_from_text
from .reports import Report
from .rng import CTX_ERROR_SWEEP, CTX_PROFILE, substream

__all__ = [
    "SimConfig",
    "SimRecord",
    "run_error_sweep",
    "uncoded_siso_sweep",
    "run_decode_trials",
    "verify_all",
    "emit_csv",
    "parse_records_csv",
    "parse_config_file",
    "parse_snr_spec",
    "parse_layer_scalar",
]

CSV_COLUMNS = ("snr_db", "trials", "cer", "ser", "mean_evals", "wall_time_s")

#: refuse sweeps whose total hypothesis count would exceed this
EVALUATION_BUDGET = int(2e9)

_DECODERS = {
    "auto": decode_auto,
    "oracle": ml_oracle,
    "group": group_decode,
    "conditional": conditional_decode,
}


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Declarative description of one error-rate experiment."""

    design: STBCDesign
    n_r: int
    constellation: str = "4qam"
    snr_db: tuple[float, ...] = (10.0,)
    trials: int = 1000
    seed: int = 0
    decoder: str = "auto"
    out: str | None = None
    noise_scale: float = 1.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snr_db:
            raise ValueError("snr list must be non-empty")
        if self.decoder not in _DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}")


@dataclass(frozen=True)
class SimRecord:
    """Tallies for one SNR point."""

    snr_db: float
    trials: int
    codeword_errors: int
    symbol_errors: int
    cer: float
    ser: float
    mean_evals: float
    wall_time_s: float

    def __post_init__(self):
        assert 0.0 <= self.cer <= 1.0 and 0.0 <= self.ser <= 1.0


def _predicted_evals(design: STBCDesign, cons: Constellation, decoder: str) -> int:
    account = complexity_account(design, cons)
    if decoder == "oracle":
        return account.oracle_evaluations
    if decoder == "group" or (decoder == "auto" and design.layers == 1):
        return account.group_evaluations
    return account.conditional_evaluations


def run_error_sweep(cfg: SimConfig) -> list[SimRecord]:
    """Monte-Carlo symbol/codeword error rates over the configured sweep."""
    design = cfg.design
    cons = constellation(cfg.constellation)
    per_codeword = _predicted_evals(design, cons, cfg.decoder)
    total = per_codeword * cfg.trials * len(cfg.snr_db)
    if total > EVALUATION_BUDGET:
        raise IntractableError(
            f"sweep needs ~{total:.3g} hypothesis evaluations "
            f"({per_codeword} per codeword); budget is {EVALUATION_BUDGET:.3g}"
        )
    decode = _DECODERS[cfg.decoder]
    encoder = default_encoder(design, cons.pam)
    b = full_symbol_matrix(design, encoder)
    scale = design.energy_scale
    pam = cons.pam
    n_real = design.n_real_symbols
    k = design.k
    records = []
    for point, snr_db in enumerate(cfg.snr_db):
        snr = 10.0 ** (snr_db / 10.0)
        c = np.sqrt(snr / design.n_t)
        t0 = time.perf_counter()
        cw_errors = 0
        sym_errors = 0
        evals = 0
        for trial in range(cfg.trials):
            rng = substream(cfg.seed, CTX_ERROR_SWEEP, point, trial)
            h = sample_channel(design.n_t, cfg.n_r, rng).H
            noise = np.sqrt(0.5) * (
                rng.standard_normal((cfg.n_r, design.T))
                + 1j * rng.standard_normal((cfg.n_r, design.T))
            )
            levels = rng.integers(0, len(pam), size=n_real)
            s = b @ pam[levels]
            y = c * (h @ (scale * codeword(design, s))) + cfg.noise_scale * noise
            result: DecodeResult = decode(y, h, design, cons, snr, encoder)
            evals += result.metric_evaluations
            decoded = np.asarray(result.level_indices)
            wrong = (
                (decoded[0::2] != levels[0::2]) | (decoded[1::2] != levels[1::2])
            )
            sym_errors += int(wrong.sum())
            cw_errors += int(wrong.any())
        elapsed = time.perf_counter() - t0
        records.append(
            SimRecord(
                snr_db=float(snr_db),
                trials=cfg.trials,
                codeword_errors=cw_errors,
                symbol_errors=sym_errors,
                cer=cw_errors / cfg.trials,
                ser=sym_errors / (cfg.trials * k),
                mean_evals=evals / cfg.trials,
                wall_time_s=elapsed,
            )
        )
    return records


def uncoded_siso_sweep(
    cons_label: str,
    snr_db: tuple[float, ...],
    trials: int,
    seed: int,
    noise_scale: float = 1.0,
) -> list[SimRecord]:
    """Single-antenna uncoded ML baseline on the same fading model."""
    cons = constellation(cons_label)
    points = cons.points
    records = []
    for point_i, db in enumerate(snr_db):
        snr = 10.0 ** (db / 10.0)
        c = np.sqrt(snr)
        t0 = time.perf_counter()
        errors = 0
        for trial in range(trials):
            rng = substream(seed, CTX_ERROR_SWEEP, point_i, trial)
            h = sample_channel(1, 1, rng).H[0, 0]
            noise = np.sqrt(0.5) * complex(
                rng.standard_normal(), rng.standard_normal()
            )
            idx = int(rng.integers(0, cons.size))
            y = c * h * points[idx] + noise_scale * noise
            guess = int(np.argmin(np.abs(y - c * h * points) ** 2))
            errors += guess != idx
        elapsed = time.perf_counter() - t0
        records.append(
            SimRecord(
                snr_db=float(db),
                trials=trials,
                codeword_errors=errors,
                symbol_errors=errors,
                cer=errors / trials,
                ser=errors / trials,
                mean_evals=float(cons.size),
                wall_time_s=elapsed,
            )
        )
    return records


def run_decode_trials(
    design: STBCDesign,
    n_r: int,
    cons_label: str,
    snr_db: float,
    trials: int,
    seed: int,
    decoder: str = "auto",
) -> list[dict]:
    """Per-trial decode log (metric, symbol errors, evaluations)."""
    cons = constellation(cons_label)
    decode = _DECODERS[decoder]
    encoder = default_encoder(design, cons.pam)
    b = full_symbol_matrix(design, encoder)
    snr = 10.0 ** (snr_db / 10.0)
    c = np.sqrt(snr / design.n_t)
    pam = cons.pam
    rows = []
    for trial in range(trials):
        rng = substream(seed, CTX_ERROR_SWEEP, 0, trial)
        h = sample_channel(design.n_t, n_r, rng).H
        noise = np.sqrt(0.5) * (
            rng.standard_normal((n_r, design.T))
            + 1j * rng.standard_normal((n_r, design.T))
        )
        levels = rng.integers(0, len(pam), size=design.n_real_symbols)
        s = b @ pam[levels]
        y = c * (h @ (design.energy_scale * codeword(design, s))) + noise
        result = decode(y, h, design, cons, snr, encoder)
        decoded = np.asarray(result.level_indices)
        wrong = (decoded[0::2] != levels[0::2]) | (decoded[1::2] != levels[1::2])
        rows.append(
            {
                "trial": trial,
                "metric": result.metric,
                "symbol_errors": int(wrong.sum()),
                "evaluations": result.metric_evaluations,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def emit_csv(records: list[SimRecord], path, timing: bool = False) -> None:
    """Write sweep records as UTF-8 CSV with a stable column order.

    ``timing=False`` (default) zeroes the wall_time_s column so identical
    configurations produce byte-identical files.
    """
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        wall = rec.wall_time_s if timing else 0.0
        lines.append(
            ",".join(
                repr(v)
                for v in (
                    rec.snr_db,
                    rec.trials,
                    rec.cer,
                    rec.ser,
                    rec.mean_evals,
                    wall,
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_records_csv(path) -> list[dict]:
    """Parse :func:`emit_csv` output back into one dict per row."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise ValueError("unexpected CSV header")
    rows = []
    for ln in lines[1:]:
        vals = ln.split(",")
        rows.append(
            {
                "snr_db": float(vals[0]),
                "trials": int(vals[1]),
                "cer": float(vals[2]),
                "ser": float(vals[3]),
                "mean_evals": float(vals[4]),
                "wall_time_s": float(vals[5]),
            }
        )
    return rows


# ---------------------------------------------------------------------------
# config files: flat key=value, '#' comments; CLI flags override
# ---------------------------------------------------------------------------


def parse_config_file(path) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def parse_snr_spec(spec: str) -> tuple[float, ...]:
    """Parse 'A:B:STEP' (inclusive endpoints) or a comma list."""
    spec = spec.strip()
    if ":" in spec:
        a, b, step = (float(tok) for tok in spec.split(":"))
        if step <= 0:
            raise ValueError("snr step must be positive")
        n = int(np.floor((b - a) / step + 1e-9)) + 1
        return tuple(round(a + i * step, 9) for i in range(max(n, 1)))
    return tuple(float(tok) for tok in spec.split(","))


def parse_layer_scalar(spec: str) -> complex:
    """'1', 'pi/4' (meaning e^{j pi/4}) or an explicit 'a+bi' literal."""
    spec = spec.strip().lower()
    if spec in ("1", "none", ""):
        return 1.0 + 0j
    if spec == "pi/4":
        return complex(np.exp(1j * np.pi / 4.0))
    z = complex(matrix_from_text(spec)[0, 0])
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError("layer scalar must have unit modulus")
    return z


# ---------------------------------------------------------------------------
# whole-artifact verification
# ---------------------------------------------------------------------------


def verify_all(a: int, layers: int = 1, seed: int = 0) -> Report:
    """Run every certification the package offers for one configuration.

    Exhaustive algebra checks run for a <= 3; the decoder/oracle
    equivalence runs wherever the exhaustive oracle is tractable (the
    rate-1 code at this ``a``, plus the two-antenna two-layer code).
    """
    report = Report(f"full verification (a={a}, layers={layers})")
    cliff = build_generators(a)
    report.extend(verify_generators(cliff))

    if a <= 3:
        report.extend(verify_traceless(cliff))
        products = all_lambda_products(cliff)
        bad_sq = []
        for prod in products:
            if not prod.indices:
                continue
            square = (prod.matrix @ prod.matrix) / (prod.scalar**2)
            want = subset_square_sign(len(prod.indices)) * np.eye(cliff.n)
            if np.abs(square - want).max() > 1e-12:
                bad_sq.append(prod.label())
        report.add("subset squares match the sign rule", not bad_sq, bad_sq)
        bad_comm = []
        for p1 in products:
            for p2 in products:
                if not p1.indices or not p2.indices:
                    continue
                overlap = len(set(p1.indices) & set(p2.indices))
                want = products_commute(len(p1.indices), len(p2.indices), overlap)
                lhs = p1.matrix @ p2.matrix
                rhs = p2.matrix @ p1.matrix
                got = np.abs(lhs - rhs).max() < 1e-12
                if got != want:
                    bad_comm.append(f"{p1.label()} vs {p2.label()}")
        report.add(
            "commutation predicate matches literal products",
            not bad_comm,
            bad_comm,
        )
    else:
        report.add("exhaustive algebra checks", True, detail="skipped for a > 3")

    base = build_rate1_4group(a)
    report.extend(verify_theorem1(base))

    w = extract_W(base)
    resid = float(np.abs(w.T @ w - np.eye(w.shape[0])).max())
    report.add("W orthogonality", resid < 1e-12, detail=f"residual {resid:.2e}")

    cons = constellation("4qam")
    encoder = default_encoder(base, cons.pam)
    md = min_determinant(base, encoder)
    report.add(
        "rotated minimum determinant positive (closed form agrees)",
        md.min_det > 0 and md.max_disagreement < 1e-9,
        detail=f"min det {md.min_det:.6g} over {md.evaluations} differences",
    )

    design = base if layers == 1 else extend_full_rate(base, layers)
    mask = mandated_zero_mask(design)
    n_r = max(layers, 1)
    worst = 0.0
    kron_ok = True
    for s in range(3):
        h = sample_channel(design.n_t, n_r, substream(seed, CTX_PROFILE, 0, s)).H
        prof = r_profile(equivalent_channel(h, design), tol=1e-9, design=design)
        worst = max(worst, float(np.abs(prof.R[mask]).max()))
        kron_ok &= all(blk.kron_identity for blk in prof.layer_blocks)
    report.add(
        "R-matrix structural zeros and I4-block structure",
        worst < 1e-9 and kron_ok,
        detail=f"worst mandated-zero magnitude {worst:.2e}",
    )

    account = complexity_account(design, cons)
    if design.layers == 1:
        formula = len(design.groups) * len(cons.pam) ** design.group_size
        ok = account.group_evaluations == formula
    else:
        outer = len(cons.pam) ** (design.n_real_symbols - 2 * design.n_t)
        formula = outer * 4 * len(cons.pam) ** design.group_size
        ok = account.conditional_evaluations == formula
    report.add(
        "complexity account matches the closed-form count",
        ok,
        detail=account.describe(),
    )

    oracle_total = len(cons.pam) ** base.n_real_symbols
    if oracle_total <= 1 << 18:
        mismatches = []
        for t in range(8):
            rng = substream(seed, CTX_PROFILE, 1, t)
            h = sample_channel(base.n_t, 1, rng).H
            noise = np.sqrt(0.5) * (
                rng.standard_normal((1, base.T))
                + 1j * rng.standard_normal((1, base.T))
            )
            levels = rng.integers(0, len(cons.pam), size=base.n_real_symbols)
            s = full_symbol_matrix(base, encoder) @ cons.pam[levels]
            snr = 10.0
            y = np.sqrt(snr / base.n_t) * (
                h @ (base.energy_scale * codeword(base, s))
            ) + noise
            r1 = group_decode(y, h, base, cons, snr, encoder)
            r2 = ml_oracle(y, h, base, cons, snr, encoder)
            if r1.level_indices != r2.level_indices or abs(r1.metric - r2.metric) > 1e-9:
                mismatches.append(f"trial {t}")
            if r1.metric_evaluations != complexity_account(base, cons).group_evaluations:
                mismatches.append(f"trial {t}: counter")
        report.add("group decoder == exhaustive oracle", not mismatches, mismatches)
    else:
        report.add(
            "group decoder == exhaustive oracle",
            True,
            detail="oracle intractable at this size; covered at smaller a",
        )

    silver = extend_full_rate(build_rate1_4group(1), 2)
    mismatches = []
    for t in range(25):
        rng = substream(seed, CTX_PROFILE, 2, t)
        h = sample_channel(2, 2, rng).H
        noise = np.sqrt(0.5) * (
            rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        )
        levels = rng.integers(0, len(cons.pam), size=8)
        enc2 = default_encoder(silver, cons.pam)
        s = full_symbol_matrix(silver, enc2) @ cons.pam[levels]
        snr = 10.0
        y = np.sqrt(snr / 2.0) * (h @ (silver.energy_scale * codeword(silver, s))) + noise
        r1 = conditional_decode(y, h, silver, cons, snr, enc2)
        r2 = ml_oracle(y, h, silver, cons, snr, enc2)
        if r1.level_indices != r2.level_indices or abs(r1.metric - r2.metric) > 1e-9:
            mismatches.append(f"trial {t}")
    report.add(
        "conditional decoder == exhaustive oracle (two antennas, two layers)",
        not mismatches,
        mismatches,
    )

    rng = substream(seed, CTX_PROFILE, 3, 0)
    b = full_symbol_matrix(design, default_encoder(design, cons.pam))
    energies = []
    for _ in range(1000):
        levels = rng.integers(0, len(cons.pam), size=design.n_real_symbols)
        s = b @ cons.pam[levels]
        energies.append(
            np.linalg.norm(design.energy_scale * codeword(design, s)) ** 2
        )
    mean_energy = float(np.mean(energies))
    target = design.n_t * design.T
    report.add(
        "codeword energy normalization",
        abs(mean_energy / target - 1.0) < 0.05,
        detail=f"mean ||S||^2 = {mean_energy:.3f}, target {target}",
    )
    return report

