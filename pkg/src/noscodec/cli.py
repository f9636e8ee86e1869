"""Command-line interface: train, analyze, sweep, encode, decode, oracle."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import oracles
from ._backend import backend_name
from .channel import ebn0_to_n0
from .codebook import (
    cross_correlation,
    load,
    new_params,
    pairwise_distance_stats,
    save,
)
from .codec import (
    bits_to_indices,
    encode,
    hard_decision,
    indices_to_bits,
    map_marginals,
    to_complex,
    to_real,
)
from .crc import crc_append, crc_check
from .harness import MODES, SweepConfig, emit_results, run_per_sweep
from .kbest import crc_assisted_decode
from .trainer import TrainConfig, train


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # uniform diagnostics, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noscodec",
        description="Superposition codec: codebook training, analysis, "
        "Monte-Carlo PER sweeps and single-packet debugging.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn a codebook and write it to disk")
    p.add_argument("--v", type=int, required=True, help="number of superimposed layers")
    p.add_argument("--m", type=int, required=True, help="alphabet size per layer (power of two)")
    p.add_argument("--d", type=int, required=True, help="real codeword length (even)")
    p.add_argument("--crc-len", type=int, default=11)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--batch-size", type=int, default=1024)
    p.add_argument("--train-snr", type=float, default=-1.5, help="training Eb/N0 in dB")
    p.add_argument("--lr-start", type=float, default=2e-4)
    p.add_argument("--lr-end", type=float, default=2e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log-interval", type=int, default=50)
    p.add_argument("--out", required=True, help="output codebook file")
    p.add_argument("--log", default=None, help="optional training log CSV")
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("analyze", help="report codebook correlation/distance stats")
    p.add_argument("--codebook", required=True)
    p.add_argument("--crc-len", type=int, default=11)
    p.add_argument("--pairs", type=int, default=20000, help="distance sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("sweep", help="Monte-Carlo PER/BER over an Eb/N0 grid")
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--codebook", default=None)
    p.add_argument("--crc-len", type=int, default=None)
    p.add_argument("--ebn0", default=None, help="comma-separated dB list")
    p.add_argument("--k", type=int, default=None, help="list size (default 128)")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None, help="max trials per point")
    p.add_argument("--target-errors", type=int, default=None)
    p.add_argument("--eb-convention", choices=("all-bits", "info-only"), default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--chunk-size", type=int, default=None)
    p.add_argument("--out", default=None, required=False)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("encode", help="encode one packet of info bits to a signal file")
    p.add_argument("--codebook", required=True)
    p.add_argument("--crc-len", type=int, default=11)
    p.add_argument("--in", dest="infile", required=True, help="info bits, ASCII 0/1")
    p.add_argument("--out", required=True, help="complex signal CSV (re,im rows)")
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("decode", help="decode one packet from a signal file")
    p.add_argument("--codebook", required=True)
    p.add_argument("--crc-len", type=int, default=11)
    p.add_argument("--in", dest="infile", required=True, help="signal CSV (re,im rows)")
    p.add_argument("--out", required=True, help="decoded info bits, ASCII 0/1")
    p.add_argument("--ebn0", type=float, default=0.0, help="assumed Eb/N0 in dB")
    p.add_argument("--n0", type=float, default=None, help="assumed noise power override")
    p.add_argument("--k", type=int, default=128)
    p.add_argument("--mode", choices=MODES, default="kbest-crc")
    p.add_argument("--eb-convention", choices=("all-bits", "info-only"), default="all-bits")
    p.set_defaults(handler=_cmd_decode)

    p = sub.add_parser("oracle", help="run the brute-force verification suites")
    p.add_argument(
        "--suite",
        choices=("all", "map", "kbest", "crc", "grad"),
        default="all",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_oracle)

    return parser


def _cmd_train(args) -> int:
    params = new_params(args.v, args.m, args.d, args.crc_len)
    config = TrainConfig(
        params=params,
        steps=args.steps,
        train_snr_db=args.train_snr,
        batch_size=args.batch_size,
        lr_start=args.lr_start,
        lr_end=args.lr_end,
        seed=args.seed,
        log_interval=args.log_interval,
    )
    codebook, log = train(config)
    save(codebook, args.out)
    if args.log:
        log.write_csv(args.log)
    stats = cross_correlation(codebook)
    print(
        f"trained {params.V}x{params.M}x{params.D} codebook -> {args.out} "
        f"(final loss {log.loss[-1]:.4f}, corr mean {stats.mean_abs:.4f}, "
        f"max {stats.max_abs:.4f})"
    )
    return 0


def _cmd_analyze(args) -> int:
    cb = load(args.codebook, crc_len=args.crc_len)
    p = cb.params
    corr = cross_correlation(cb)
    dist = pairwise_distance_stats(cb, args.pairs, args.seed)
    print(f"codebook {args.codebook}: V={p.V} M={p.M} D={p.D} rate={p.rate}")
    print(f"cross-correlation: mean_abs={corr.mean_abs:.6f} max_abs={corr.max_abs:.6f}")
    print(
        f"pairwise distance ({dist.sample_count} samples): "
        f"min={dist.min:.4f} mean={dist.mean:.4f} (2*D/V={2 * p.D / p.V:.4f})"
    )
    if args.out:
        import json

        report = {
            "V": p.V,
            "M": p.M,
            "D": p.D,
            "rate": p.rate,
            "corr_mean_abs": corr.mean_abs,
            "corr_max_abs": corr.max_abs,
            "corr_hist_edges": corr.bin_edges.tolist(),
            "corr_hist_counts": corr.counts.tolist(),
            "dist_min": dist.min,
            "dist_mean": dist.mean,
            "dist_hist_edges": dist.bin_edges.tolist(),
            "dist_hist_counts": dist.counts.tolist(),
        }
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


_SWEEP_DEFAULTS = {
    "crc_len": 11,
    "k": 128,
    "mode": "kbest-crc",
    "seed": 0,
    "trials": 10**6,
    "target_errors": 100,
    "eb_convention": "all-bits",
    "workers": 1,
    "chunk_size": 1024,
    "format": "csv",
}


def _cmd_sweep(args) -> int:
    file_cfg = _read_config(args.config) if args.config else {}

    def pick(flag_value, key, cast):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return cast(file_cfg[key])
        return _SWEEP_DEFAULTS.get(key)

    codebook = pick(args.codebook, "codebook", str)
    if codebook is None:
        raise ValueError("a codebook must be given via --codebook or the config file")
    ebn0 = pick(args.ebn0, "ebn0", str)
    if ebn0 is None:
        raise ValueError("an Eb/N0 grid must be given via --ebn0 or the config file")
    grid = [float(x) for x in str(ebn0).split(",") if x.strip() != ""]
    out = pick(args.out, "out", str)
    if out is None:
        raise ValueError("an output path must be given via --out or the config file")

    crc_len = pick(args.crc_len, "crc_len", int)
    _require_builtin_crc(crc_len)
    config = SweepConfig(
        codebook=codebook,
        ebn0_grid=grid,
        k=pick(args.k, "k", int),
        mode=pick(args.mode, "mode", str),
        max_trials=pick(args.trials, "trials", int),
        target_errors=pick(args.target_errors, "target_errors", int),
        seed=pick(args.seed, "seed", int),
        eb_convention=pick(args.eb_convention, "eb_convention", str),
        workers=pick(args.workers, "workers", int),
        chunk_size=pick(args.chunk_size, "chunk_size", int),
    )
    curve = run_per_sweep(config)
    fmt = pick(args.format, "format", str)
    emit_results(curve, out, fmt)
    for pt in curve.points:
        print(
            f"ebn0={pt.ebn0_db:g} dB: trials={pt.trials} per={pt.per:.3e} "
            f"ber={pt.ber:.3e} (+-{pt.ci95:.1e})"
        )
    print(f"wrote {out} [{fmt}, backend={backend_name()}]")
    return 0


def _require_builtin_crc(crc_len: int) -> None:
    if crc_len != 11:
        raise ValueError(
            "packet processing uses the built-in 11-bit CRC; "
            f"crc_len={crc_len} is only supported by the library API"
        )


def _read_config(path) -> dict:
    """Line-oriented key=value file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (expected key=value): {raw.strip()!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _read_bits(path) -> np.ndarray:
    with open(path) as fh:
        text = fh.read()
    chars = [c for c in text if c in "01"]
    if not chars:
        raise ValueError(f"no 0/1 bits found in {path}")
    return np.array([int(c) for c in chars], dtype=np.uint8)


def _write_bits(path, bits) -> None:
    with open(path, "w") as fh:
        fh.write("".join(str(int(b)) for b in bits) + "\n")


def _cmd_encode(args) -> int:
    _require_builtin_crc(args.crc_len)
    cb = load(args.codebook, crc_len=args.crc_len)
    p = cb.params
    info = _read_bits(args.infile)
    if info.size != p.info_bits:
        raise ValueError(f"expected {p.info_bits} info bits, got {info.size}")
    word = crc_append(info)
    signal = to_complex(encode(bits_to_indices(word, p), cb))
    with open(args.out, "w") as fh:
        for zv in signal:
            fh.write(f"{float(zv.real)!r},{float(zv.imag)!r}\n")
    print(f"encoded {p.info_bits} info bits (+{p.crc_len} crc) -> {args.out}")
    return 0


def _read_signal(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            re_s, im_s = line.split(",")
            rows.append(complex(float(re_s), float(im_s)))
    if not rows:
        raise ValueError(f"no signal samples found in {path}")
    return np.array(rows, dtype=np.complex128)


def _cmd_decode(args) -> int:
    _require_builtin_crc(args.crc_len)
    cb = load(args.codebook, crc_len=args.crc_len)
    p = cb.params
    signal = _read_signal(args.infile)
    if signal.size != p.D // 2:
        raise ValueError(f"expected {p.D // 2} complex samples, got {signal.size}")
    n0 = args.n0 if args.n0 is not None else ebn0_to_n0(args.ebn0, p, args.eb_convention)
    if n0 <= 0:
        n0 = 1.0  # decisions do not depend on the assumed noise power
    logprobs = map_marginals(to_real(signal), cb, n0)
    if args.mode == "one-shot":
        word = indices_to_bits(hard_decision(logprobs), p)
        ok = crc_check(word)
        _write_bits(args.out, word[: p.info_bits])
        print(f"one-shot decode -> {args.out} (crc {'ok' if ok else 'FAILED'})")
        return 0 if ok else 1
    result = crc_assisted_decode(logprobs, args.k, p)
    if result.status != "success":
        print(f"decode failed: no candidate in the top-{args.k} list passed the CRC",
              file=sys.stderr)
        return 1
    _write_bits(args.out, result.bits[: p.info_bits])
    print(f"decoded at list rank {result.candidate_rank} -> {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    suites = {
        "map": oracles.run_map_suite,
        "kbest": oracles.run_kbest_suite,
        "crc": oracles.run_crc_suite,
        "grad": oracles.run_gradient_suite,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        ok, detail = suites[name](seed=args.seed)
        print(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})")
        failed = failed or not ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
