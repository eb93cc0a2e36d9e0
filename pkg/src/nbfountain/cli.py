"""Command-line interface.

Subcommands:

* ``de-table``     -- asymptotic-overhead table as CSV (m x d_c grid).
* ``de-threshold`` -- one density-evolution threshold.
* ``histogram``    -- achieved-overhead trials across information sizes.
* ``bler``         -- block-error-rate sweep on a fixed overhead grid.
* ``encode``       -- build a code, encode info symbols, optionally emit
                      stream packets and dump the code to a file.
* ``decode``       -- load a code, read collected packets, decode.

Outputs are UTF-8 CSV with '#' metadata lines.  Exit code 0 on success,
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .channel import BEC, BIAWGN, solve_sigma_for_capacity
from .deanalysis import DE_MAX_DEGREE, DensityEvolution
from .fountain import StreamSpec, triples_at, emit_bits
from .harness import (RetrySchedule, TrialConfig, bler_sweep, de_table,
                      overhead_histogram)
from .precode import CodeParams, ParityCheckCode, construct, encode, syndrome
from .spdecoder import CollectedOutputs, SumProductDecoder

PACKET_HEADER = "i,v,w,h_hex,y"


class ConfigError(ValueError):
    pass


def _write_lines(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _channel_from_args(args) -> BEC | BIAWGN:
    if args.channel == "bec":
        if getattr(args, "sigma", None) is not None:
            raise ConfigError("--sigma applies to the biawgn channel only")
        if args.capacity is not None:
            return BEC(1.0 - args.capacity)
        return BEC(args.erasure if args.erasure is not None else 0.0)
    if args.erasure is not None:
        raise ConfigError("--erasure applies to the bec channel only")
    if args.sigma is not None:
        return BIAWGN(args.sigma)
    if args.capacity is not None:
        return BIAWGN(solve_sigma_for_capacity(args.capacity))
    raise ConfigError("biawgn channel needs --sigma or --capacity")


def _add_channel_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", choices=("bec", "biawgn"), default="bec")
    p.add_argument("--capacity", type=float, default=None,
                   help="channel capacity (bec: erasure 1-C; biawgn: solves sigma)")
    p.add_argument("--erasure", type=float, default=None, help="bec erasure probability")
    p.add_argument("--sigma", type=float, default=None, help="biawgn noise std")


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, default=8, help="field extension degree")
    p.add_argument("--dc", type=int, default=3, help="check-node degree")
    p.add_argument("--field-poly", type=lambda s: int(s, 16), default=None,
                   metavar="HEX", help="primitive polynomial override (hex mask)")


def _parse_eps_grid(values: list[str]) -> list[float]:
    if len(values) == 1 and ":" in values[0]:
        start_s, stop_s, step_s = values[0].split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
        if step <= 0:
            raise ConfigError("eps grid step must be positive")
        grid = []
        x = start
        while x <= stop + 1e-12:
            grid.append(round(x, 12))
            x += step
        return grid
    return [float(v) for v in values]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nbfountain",
        description="Fountain coding with a multiplicatively repeated non-binary LDPC pre-code",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("de-table", help="asymptotic-overhead table (CSV)")
    p.add_argument("--m-min", type=int, default=1)
    p.add_argument("--m-max", type=int, default=DE_MAX_DEGREE)
    p.add_argument("--dc", type=int, nargs="+", default=[3, 4, 5, 6])
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("de-threshold", help="single density-evolution threshold")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dc", type=int, required=True)

    p = sub.add_parser("histogram", help="achieved-overhead trials")
    p.add_argument("--k", type=int, nargs="+", required=True, help="information bits")
    p.add_argument("--trials", type=int, default=1000)
    _add_code_args(p)
    _add_channel_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps0", type=float, default=0.0)
    p.add_argument("--deps", type=float, default=0.01)
    p.add_argument("--eps-max", type=float, default=2.0)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("bler", help="block-error-rate sweep (biawgn)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--capacity", type=float, nargs="+", required=True)
    p.add_argument("--eps-grid", nargs="+", required=True,
                   metavar="EPS|START:STOP:STEP")
    p.add_argument("--trials", type=int, default=100)
    _add_code_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("encode", help="construct a code and encode info symbols")
    _add_code_args(p)
    p.add_argument("--k-bits", type=int, required=True)
    p.add_argument("--code-seed", type=int, default=0)
    p.add_argument("--info-hex", default=None,
                   help="K info symbols as hex, comma separated (default: zeros)")
    p.add_argument("--dump-code", default=None, metavar="FILE")
    p.add_argument("--emit", type=int, default=0, metavar="N",
                   help="also emit N noiseless stream packets as CSV")
    p.add_argument("--stream-seed", type=int, default=1)
    p.add_argument("--packets", default=None, metavar="FILE",
                   help="packet CSV destination (default stdout)")

    p = sub.add_parser("decode", help="decode collected packets")
    p.add_argument("--load-code", required=True, metavar="FILE")
    p.add_argument("--packets", required=True, metavar="FILE")
    _add_channel_args(p)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--info-only", action="store_true",
                   help="print only the information symbols")
    return ap


def _cmd_de_table(args) -> int:
    _write_lines(args.output, de_table(range(args.m_min, args.m_max + 1), args.dc))
    return 0


def _cmd_de_threshold(args) -> int:
    print(f"{DensityEvolution(args.m, args.dc).threshold():.4f}")
    return 0


def _cmd_histogram(args) -> int:
    cfg = TrialConfig(
        k_bits=args.k[0], m=args.m, d_c=args.dc, channel=_channel_from_args(args),
        seed=args.seed,
        schedule=RetrySchedule(eps0=args.eps0, d_eps=args.deps, eps_max=args.eps_max),
        max_iter=args.max_iter, field_poly=args.field_poly,
    )
    _write_lines(args.output, overhead_histogram(args.k, args.trials, cfg, args.workers))
    return 0


def _cmd_bler(args) -> int:
    cfg = TrialConfig(
        k_bits=args.k, m=args.m, d_c=args.dc, seed=args.seed,
        max_iter=args.max_iter, field_poly=args.field_poly,
    )
    grid = _parse_eps_grid(args.eps_grid)
    _write_lines(args.output, bler_sweep(grid, args.capacity, args.k, args.trials, cfg, args.workers))
    return 0


def _parse_info(text: str | None, params: CodeParams) -> list[int]:
    if text is None:
        return [0] * params.K
    vals = [int(t, 16) for t in text.split(",") if t.strip()]
    if len(vals) != params.K:
        raise ConfigError(f"expected {params.K} info symbols, got {len(vals)}")
    if any(not 0 <= v < (1 << params.m) for v in vals):
        raise ConfigError("info symbol out of field range")
    return vals


def _cmd_encode(args) -> int:
    params = CodeParams(m=args.m, d_c=args.dc, k_bits=args.k_bits,
                        seed=args.code_seed, primitive_poly=args.field_poly)
    code = construct(params)
    info = _parse_info(args.info_hex, params)
    codeword = encode(code, info)
    if args.dump_code:
        with open(args.dump_code, "w", encoding="utf-8") as fh:
            fh.write(code.serialize())
    print("codeword," + ",".join(f"{x:x}" for x in codeword))
    if args.emit > 0:
        fld = code.field()
        spec = StreamSpec(seed=args.stream_seed, n_symbols=params.N, m=params.m)
        idx = np.arange(1, args.emit + 1, dtype=np.uint64)
        v, w, h = triples_at(spec, idx)
        bits = emit_bits(fld, np.array(codeword), v, w, h)
        lines = [PACKET_HEADER]
        lines += [f"{i},{vi},{wi},{hi:x},{bi}" for i, vi, wi, hi, bi in
                  zip(idx.tolist(), v.tolist(), w.tolist(), h.tolist(), bits.tolist())]
        _write_lines(args.packets, lines)
    return 0


def _read_packets(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
    v, w, h, ys = [], [], [], []
    with open(path, encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#") or ln == PACKET_HEADER:
                continue
            _i, vs, ws, hs, y = ln.split(",")
            v.append(int(vs))
            w.append(int(ws))
            h.append(int(hs, 16))
            ys.append(y)
    return np.array(v), np.array(w), np.array(h), ys


def _cmd_decode(args) -> int:
    with open(args.load_code, encoding="utf-8") as fh:
        code = ParityCheckCode.deserialize(fh.read())
    channel = _channel_from_args(args)
    v, w, h, ys = _read_packets(args.packets)
    if isinstance(channel, BEC):
        obs = np.array([np.nan if y in ("e", "nan", "") else float(y) for y in ys])
    else:
        obs = np.array([float(y) for y in ys])
    q0, q1 = channel.posteriors_many(obs)
    outputs = CollectedOutputs(v - 1, w, h, q0, q1)
    decoder = SumProductDecoder(code)
    result = decoder.decode(outputs, max_iter=args.max_iter)
    if not result.success:
        print(f"failure,iterations={result.iterations}")
        return 1
    xhat = result.codeword
    assert not any(syndrome(code, xhat.tolist()))
    symbols = xhat[: code.K] if args.info_only else xhat
    label = "info" if args.info_only else "codeword"
    print(f"success,iterations={result.iterations}")
    print(f"{label}," + ",".join(f"{x:x}" for x in symbols.tolist()))
    return 0


_COMMANDS = {
    "de-table": _cmd_de_table,
    "de-threshold": _cmd_de_threshold,
    "histogram": _cmd_histogram,
    "bler": _cmd_bler,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
