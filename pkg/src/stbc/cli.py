"""Command line front end.

Subcommands mirror the library modules:

    stbc clifford dump     -- print/stash the anticommuting generators
    stbc design build      -- construct a design and write a design file
    stbc design verify     -- certify a design file
    stbc design dump       -- pretty-print a design file
    stbc channel profile   -- R-matrix zero structure over random channels
    stbc decode            -- per-trial Monte-Carlo decode log
    stbc capacity sweep    -- ergodic-capacity sweep, CSV out
    stbc sim sweep         -- symbol/codeword error-rate sweep, CSV out
    stbc gain min-det      -- brute-force minimum determinant
    stbc verify-all        -- every certification in one report

The default master seed comes from the STBC_SEED environment variable
(0 when unset); identical seeds yield byte-identical CSV output.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .capacity import code_capacity
from .channel import profile_over_channels
from .clifford import build_generators
from .coding_gain import (
    default_encoder,
    identity_encoder,
    min_determinant,
    rotation_from_matrix,
)
from .decoder import constellation
from .designs import (
    build_rate1_4group,
    design_to_text,
    extend_full_rate,
    load_design,
    save_design,
    verify_design,
)
from .linalg import matrix_to_text, real_matrix_from_text
from .sim import (
    SimConfig,
    emit_csv,
    parse_config_file,
    parse_layer_scalar,
    parse_snr_spec,
    run_decode_trials,
    run_error_sweep,
    verify_all,
)


def _default_seed() -> int:
    return int(os.environ.get("STBC_SEED", "0"))


def _build_design(a: int, layers: int, layer_scalar: str, sign: int):
    base = build_rate1_4group(a, sign)
    if layers == 1:
        return base
    return extend_full_rate(base, layers, layer_scalar=parse_layer_scalar(layer_scalar))


def _design_from_args(args) -> "STBCDesign":
    if getattr(args, "design", None):
        return load_design(args.design)
    if getattr(args, "a", None):
        return _build_design(args.a, getattr(args, "layers", 1) or 1,
                             getattr(args, "layer_scalar", "1") or "1",
                             getattr(args, "sign", 1) or 1)
    raise SystemExit("need --design FILE or --a A")


def cmd_clifford_dump(args) -> int:
    cliff = build_generators(args.a, args.sign)
    blocks = []
    for i, g in enumerate(cliff.generators):
        blocks.append(f"generator {i + 1}")
        blocks.append(matrix_to_text(g))
    text = "\n".join(blocks) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_design_build(args) -> int:
    design = _build_design(args.a, args.layers, args.layer_scalar, args.sign)
    save_design(design, args.out)
    print(f"wrote {args.out}: n_t={design.n_t}, T={design.T}, "
          f"rate={design.rate:g}, {len(design.weights)} weight matrices")
    return 0


def cmd_design_verify(args) -> int:
    design = load_design(args.design)
    report = verify_design(design)
    print(report.summary())
    return 0 if report.passed else 1


def cmd_design_dump(args) -> int:
    design = load_design(args.design)
    sys.stdout.write(design_to_text(design))
    return 0


def cmd_channel_profile(args) -> int:
    design = _design_from_args(args)
    mean_abs, max_abs, always_zero, _ = profile_over_channels(
        design, args.nr, args.seeds, args.tol, args.seed
    )
    print(f"# zero mask over {args.seeds} channels ('.' = |R| < {args.tol:g}):")
    print("\n".join("".join("." if z else "x" for z in row) for row in always_zero))
    if args.out:
        lines = ["row,col,mean_abs,max_abs,always_zero"]
        n = mean_abs.shape[0]
        for i in range(n):
            for j in range(n):
                lines.append(
                    f"{i + 1},{j + 1},{float(mean_abs[i, j])!r},"
                    f"{float(max_abs[i, j])!r},{int(always_zero[i, j])}"
                )
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {args.out}")
    return 0


def cmd_decode(args) -> int:
    design = _design_from_args(args)
    n_r = args.nr if args.nr else max(design.layers, 1)
    rows = run_decode_trials(
        design, n_r, args.constellation, args.snr_db, args.trials,
        args.seed, args.decoder,
    )
    lines = ["trial,metric,symbol_errors,evaluations"]
    lines += [
        f"{r['trial']},{r['metric']!r},{r['symbol_errors']},{r['evaluations']}"
        for r in rows
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_capacity_sweep(args) -> int:
    design = _design_from_args(args)
    snrs = parse_snr_spec(args.snr_db)
    lines = ["snr_db,mean_bits,std_err,trials"]
    for i, db in enumerate(snrs):
        est = code_capacity(design, args.nr, 10.0 ** (db / 10.0), args.trials,
                            rng=_capacity_stream(args.seed, i))
        lines.append(f"{float(db)!r},{est.mean!r},{est.std_error!r},{est.trials}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _capacity_stream(seed: int, point: int):
    from .rng import CTX_CAPACITY, substream

    return substream(seed, CTX_CAPACITY, point, 0)


def cmd_sim_sweep(args) -> int:
    cfg_file = parse_config_file(args.config) if args.config else {}

    def pick(flag, key, fallback):
        if flag is not None:
            return flag
        if key in cfg_file:
            return cfg_file[key]
        return fallback

    design_path = pick(args.design, "design", None)
    if design_path:
        design = load_design(design_path)
    else:
        a = int(pick(args.a, "a", 0))
        if not a:
            raise SystemExit("need --design FILE, --a A, or a config with one")
        design = _build_design(
            a,
            int(pick(args.layers, "layers", 1)),
            str(pick(args.layer_scalar, "layer_scalar", "1")),
            int(pick(args.sign, "sign", 1)),
        )
    cfg = SimConfig(
        design=design,
        n_r=int(pick(args.nr, "nr", max(design.layers, 1))),
        constellation=str(pick(args.constellation, "constellation", "4qam")),
        snr_db=parse_snr_spec(str(pick(args.snr_db, "snr_db", "10"))),
        trials=int(pick(args.trials, "trials", 1000)),
        seed=int(pick(args.seed, "seed", _default_seed())),
        decoder=str(pick(args.decoder, "decoder", "auto")),
        out=pick(args.out, "out", None),
        noise_scale=float(pick(args.noise_scale, "noise_scale", 1.0)),
    )
    records = run_error_sweep(cfg)
    for rec in records:
        print(
            f"snr {rec.snr_db:6.1f} dB: cer {rec.cer:.5f}  ser {rec.ser:.5f}  "
            f"({rec.trials} trials, {rec.mean_evals:.0f} evals/codeword, "
            f"{rec.wall_time_s:.2f} s)"
        )
    if cfg.out:
        emit_csv(records, cfg.out, timing=args.timing)
        print(f"wrote {cfg.out}")
    return 0


def cmd_gain_min_det(args) -> int:
    design = _design_from_args(args)
    cons = constellation(args.alphabet)
    if args.rotation == "none":
        encoder = identity_encoder(design, cons.pam)
    elif args.rotation == "builtin":
        encoder = default_encoder(design, cons.pam)
    else:
        with open(args.rotation, "r", encoding="utf-8") as fh:
            u = real_matrix_from_text(fh.read())
        encoder = default_encoder(design, cons.pam, rotation_from_matrix(u))
    res = min_determinant(design, encoder, budget=args.budget)
    print(f"minimum determinant: {res.min_det!r}")
    print(f"difference vectors searched: {res.evaluations}")
    print(f"argmin info difference: {np.array2string(res.argmin, precision=6)}")
    print(f"closed-form vs literal max relative gap: {res.max_disagreement:.3e}")
    return 0


def cmd_verify_all(args) -> int:
    report = verify_all(args.a, args.layers, seed=args.seed)
    print(report.summary())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stbc",
        description="Space-time block codes for 2^a transmit antennas: "
                    "construction, certification and Monte-Carlo evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_design_source(p, with_out=False):
        p.add_argument("--design", help="design file")
        p.add_argument("--a", type=int, help="antenna exponent (n_t = 2^a)")
        p.add_argument("--layers", type=int, default=1)
        p.add_argument("--layer-scalar", dest="layer_scalar", default="1",
                       help="'1', 'pi/4' or an explicit a+bi unit scalar")
        p.add_argument("--sign", type=int, choices=(1, -1), default=1)
        if with_out:
            p.add_argument("--out", help="output file (stdout when omitted)")

    p = sub.add_parser("clifford", help="generator matrices")
    csub = p.add_subparsers(dest="subcommand", required=True)
    pd = csub.add_parser("dump", help="emit the generators as matrix text")
    pd.add_argument("--a", type=int, required=True)
    pd.add_argument("--sign", type=int, choices=(1, -1), default=1)
    pd.add_argument("--out")
    pd.set_defaults(func=cmd_clifford_dump)

    p = sub.add_parser("design", help="build / verify / dump designs")
    dsub = p.add_subparsers(dest="subcommand", required=True)
    pb = dsub.add_parser("build", help="construct a design file")
    pb.add_argument("--a", type=int, required=True)
    pb.add_argument("--layers", type=int, default=1)
    pb.add_argument("--layer-scalar", dest="layer_scalar", default="1")
    pb.add_argument("--sign", type=int, choices=(1, -1), default=1)
    pb.add_argument("--out", required=True)
    pb.set_defaults(func=cmd_design_build)
    pv = dsub.add_parser("verify", help="certify a design file")
    pv.add_argument("--design", required=True)
    pv.set_defaults(func=cmd_design_verify)
    pp = dsub.add_parser("dump", help="print a design file")
    pp.add_argument("--design", required=True)
    pp.set_defaults(func=cmd_design_dump)

    p = sub.add_parser("channel", help="equivalent-channel analysis")
    chsub = p.add_subparsers(dest="subcommand", required=True)
    pc = chsub.add_parser("profile", help="R-matrix zero structure")
    add_design_source(pc)
    pc.add_argument("--nr", type=int, required=True)
    pc.add_argument("--seeds", type=int, default=100)
    pc.add_argument("--tol", type=float, default=1e-9)
    pc.add_argument("--seed", type=int, default=None)
    pc.add_argument("--out", help="per-entry |R| statistics CSV")
    pc.set_defaults(func=cmd_channel_profile)

    p = sub.add_parser("decode", help="per-trial decode log")
    add_design_source(p)
    p.add_argument("--constellation", default="4qam")
    p.add_argument("--snr-db", dest="snr_db", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--nr", type=int, default=0)
    p.add_argument("--decoder", default="auto",
                   choices=("auto", "oracle", "group", "conditional"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("capacity", help="ergodic capacity")
    casub = p.add_subparsers(dest="subcommand", required=True)
    pcs = casub.add_parser("sweep", help="capacity vs snr, CSV out")
    add_design_source(pcs)
    pcs.add_argument("--nr", type=int, required=True)
    pcs.add_argument("--snr-db", dest="snr_db", required=True,
                     help="'A:B:STEP' or comma list")
    pcs.add_argument("--trials", type=int, default=1000)
    pcs.add_argument("--seed", type=int, default=None)
    pcs.add_argument("--out")
    pcs.set_defaults(func=cmd_capacity_sweep)

    p = sub.add_parser("sim", help="error-rate simulation")
    ssub = p.add_subparsers(dest="subcommand", required=True)
    ps = ssub.add_parser("sweep", help="SER/CER sweep, CSV out")
    ps.add_argument("--config", help="key=value config file (flags win)")
    ps.add_argument("--design")
    ps.add_argument("--a", type=int)
    ps.add_argument("--layers", type=int)
    ps.add_argument("--layer-scalar", dest="layer_scalar")
    ps.add_argument("--sign", type=int, choices=(1, -1))
    ps.add_argument("--nr", type=int)
    ps.add_argument("--constellation")
    ps.add_argument("--snr-db", dest="snr_db")
    ps.add_argument("--trials", type=int)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--decoder", choices=("auto", "oracle", "group", "conditional"))
    ps.add_argument("--out")
    ps.add_argument("--noise-scale", dest="noise_scale", type=float)
    ps.add_argument("--timing", action="store_true",
                    help="write measured wall time into the CSV "
                         "(breaks byte-identical re-runs)")
    ps.set_defaults(func=cmd_sim_sweep)

    p = sub.add_parser("gain", help="coding gain")
    gsub = p.add_subparsers(dest="subcommand", required=True)
    pg = gsub.add_parser("min-det", help="brute-force minimum determinant")
    add_design_source(pg)
    pg.add_argument("--alphabet", default="4qam")
    pg.add_argument("--rotation", default="builtin",
                    help="'builtin', 'none' or a rotation matrix file")
    pg.add_argument("--budget", type=int, default=10**7)
    pg.set_defaults(func=cmd_gain_min_det)

    p = sub.add_parser("verify-all", help="run every certification")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # resolve the master seed late so config files can still supply it
    if getattr(args, "seed", None) is None and args.func is not cmd_sim_sweep:
        args.seed = _default_seed()
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
