"""Command-line front end.

Polynomials travel as JSON arrays of numbers; spectra as JSON objects
{"order": ..., "values": [[re, im], ...]}.  All outputs are
deterministic for fixed inputs, flags, and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrics
from .banksim import Simulator
from .scheduler import (
    TRACE_CSV_HEADER,
    ScheduleConfig,
    build_schedule,
    trace_csv_rows,
)
from .transform import (
    Direction,
    OrderTag,
    Spectrum,
    fft_inplace,
    fft_ref,
    ifft_inplace,
    ifft_ref,
    polymul_negacyclic_oracle,
    polymul_via_fft,
    validate_polynomial,
)
from .twiddles import S_MAX, build_rom_set, dump_rom
from .verify import run_verification


class CliError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read {path}: {e}")


def _load_polynomial(path: str) -> list[float]:
    data = _read_json(path)
    if not isinstance(data, list):
        raise CliError(f"{path}: expected a JSON array of coefficients")
    try:
        return validate_polynomial(data)
    except (TypeError, ValueError) as e:
        raise CliError(f"{path}: {e}")


def _load_spectrum(path: str) -> Spectrum:
    data = _read_json(path)
    try:
        order = OrderTag(data["order"])
        values = tuple(complex(re, im) for re, im in data["values"])
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"{path}: malformed spectrum file ({e})")
    return Spectrum(values=values, order_tag=order)


def _spectrum_json(s: Spectrum) -> str:
    return json.dumps(
        {"order": s.order_tag.value,
         "values": [[z.real, z.imag] for z in s.values]})


def _poly_json(a) -> str:
    return json.dumps([float(x) for x in a])


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _sim_run_forward(a, n_pe, dump_path=None):
    if len(a) == 2:
        # the packed word already is the transform; no compute cycles
        return fft_inplace(a), 0
    cfg = ScheduleConfig(n=len(a), n_pe=n_pe, direction=Direction.FORWARD)
    _, _, roms = build_rom_set(S_MAX, n_pe)
    sim = Simulator(cfg, roms)
    sim.load_polynomial(a)
    dump_lines = ["stage,cycle,bank,offset,re,im"] if dump_path else None

    def hook(stage, cycle):
        for b, o, z in sim.mem.snapshot(cfg.s_m):
            dump_lines.append(f"{stage},{cycle},{b},{o},{z.real!r},{z.imag!r}")

    cycles = sim.run(stage_hook=hook if dump_path else None)
    if dump_path:
        Path(dump_path).write_text("\n".join(dump_lines) + "\n")
    return sim.read_result(), cycles


def _sim_run_inverse(s: Spectrum, n_pe):
    if len(s.values) == 1:
        return ifft_inplace(s), 0
    cfg = ScheduleConfig(n=2 * len(s.values), n_pe=n_pe,
                         direction=Direction.INVERSE)
    _, _, roms = build_rom_set(S_MAX, n_pe)
    sim = Simulator(cfg, roms)
    sim.load_spectrum(s)
    cycles = sim.run()
    return sim.read_result(), cycles


def cmd_fft(args) -> int:
    a = _load_polynomial(args.input)
    if args.engine == "reference":
        out = fft_ref(a)
    elif args.engine == "inplace":
        out = fft_inplace(a)
    else:
        out, cycles = _sim_run_forward(a, args.npe, args.dump_stages)
        print(f"cycles={cycles}")
    _emit(_spectrum_json(out), args.out)
    return 0


def cmd_ifft(args) -> int:
    s = _load_spectrum(args.input)
    if args.engine == "reference":
        if s.order_tag is not OrderTag.NATURAL_EVAL:
            raise CliError("reference engine needs a natural_eval spectrum")
        out = ifft_ref(s)
    elif args.engine == "inplace":
        if s.order_tag is not OrderTag.FALCON_INTERNAL:
            raise CliError("inplace engine needs a falcon_internal spectrum")
        out = ifft_inplace(s)
    else:
        if s.order_tag is not OrderTag.FALCON_INTERNAL:
            raise CliError("simulator engine needs a falcon_internal spectrum")
        out, cycles = _sim_run_inverse(s, args.npe)
        print(f"cycles={cycles}")
    _emit(_poly_json(out), args.out)
    return 0


def cmd_polymul(args) -> int:
    a = _load_polynomial(args.a)
    b = _load_polynomial(args.b)
    if len(a) != len(b):
        raise CliError(f"length mismatch: {len(a)} vs {len(b)}")
    c = polymul_via_fft(a, b)
    if args.check:
        ref = polymul_negacyclic_oracle(a, b)
        dev = max(abs(x - y) for x, y in zip(c, ref))
        print(f"max_deviation={dev:.3e} bound={1e-9 * len(a):.3e}")
        if dev > 1e-9 * len(a):
            raise CliError("product deviates from the schoolbook oracle")
    _emit(_poly_json(c), args.out)
    return 0


def cmd_schedule(args) -> int:
    cfg = ScheduleConfig(n=args.n, n_pe=args.npe)
    trace = build_schedule(cfg)
    lines = [TRACE_CSV_HEADER]
    lines += [",".join(str(v) for v in row) for row in trace_csv_rows(trace)]
    _emit("\n".join(lines), args.out)
    return 0


def cmd_rom(args) -> int:
    table, images, roms = build_rom_set(S_MAX, args.npe)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    total = 0
    for rom in roms:
        data = outdir / f"rom_pe{rom.pe_index}.bin"
        sidecar = outdir / f"rom_pe{rom.pe_index}.txt"
        dump_rom(rom, data, sidecar)
        total += len(rom.stored)
        print(f"pe{rom.pe_index}: {len(rom.stored)} stored entries "
              f"({16 * len(rom.stored)} bytes) -> {data}")
    print(f"total stored entries={total} bytes={16 * total}")
    return 0


def cmd_cycles(args) -> int:
    rows = metrics.cycles_table()
    if args.format == "csv":
        lines = ["n,cycles,time_ns,a72_cycles,a72_time_ns"]
        lines += [f"{n},{c},{t:.0f},{rc},{rt}" for n, c, t, rc, rt in rows]
        _emit("\n".join(lines), args.out)
    elif args.format == "json":
        _emit(json.dumps([{"n": n, "cycles": c, "time_ns": t,
                           "a72_cycles": rc, "a72_time_ns": rt}
                          for n, c, t, rc, rt in rows]), args.out)
    else:
        lines = [f"{'n':>6} {'cycles':>8} {'time[ns]':>10} "
                 f"{'A72 cycles':>12} {'A72 time[ns]':>13}"]
        for n, c, t, rc, rt in rows:
            lines.append(f"{n:>6} {c:>8} {t:>10.0f} {rc:>12} {rt:>13.1f}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_metrics(args) -> int:
    recs = metrics.all_records()
    if args.format == "csv":
        lines = ["label,area_mm2,power_mw,exec_time_us,fft_size,channel_nm,"
                 "supply_v,word_bits,norm_area,norm_power,norm_energy,source"]
        for r in recs:
            a, p, e = metrics.normalized_row(r)
            lines.append(f"{r.label},{r.area_mm2},{r.power_mw},"
                         f"{r.exec_time_us},{r.fft_size},{r.channel_nm},"
                         f"{r.supply_v},{r.word_bits},"
                         f"{a:.3f},{p:.1f},{e:.0f},\"{r.source}\"")
        _emit("\n".join(lines), args.out)
    elif args.format == "json":
        out = []
        for r in recs:
            a, p, e = metrics.normalized_row(r)
            out.append({"label": r.label, "area_mm2": r.area_mm2,
                        "power_mw": r.power_mw,
                        "exec_time_us": r.exec_time_us,
                        "fft_size": r.fft_size,
                        "norm_area": round(a, 3), "norm_power": round(p, 1),
                        "norm_energy": round(e), "source": r.source})
        _emit(json.dumps(out), args.out)
    else:
        lines = [f"{'label':<18} {'norm area':>10} {'norm power':>11} "
                 f"{'norm energy':>12}"]
        for r in recs:
            a, p, e = metrics.normalized_row(r)
            lines.append(f"{r.label:<18} {a:>10.3f} {p:>11.1f} {e:>12.0f}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_verify(args) -> int:
    ok = run_verification(seed=args.seed, quick=args.quick, echo=print)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ringfft",
        description="FFT/IFFT over Q[x]/(x^n+1): transforms, conflict-free "
                    "schedules, ROM images, cycle tables, verification")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write result to this file")

    p = sub.add_parser("fft", help="forward transform of a coefficient file")
    p.add_argument("input")
    p.add_argument("--engine", choices=("reference", "inplace", "simulator"),
                   default="inplace")
    p.add_argument("--npe", type=int, default=2)
    p.add_argument("--dump-stages",
                   help="simulator only: stage-boundary memory CSV")
    add_common(p)
    p.set_defaults(func=cmd_fft)

    p = sub.add_parser("ifft", help="inverse transform of a spectrum file")
    p.add_argument("input")
    p.add_argument("--engine", choices=("reference", "inplace", "simulator"),
                   default="inplace")
    p.add_argument("--npe", type=int, default=2)
    add_common(p)
    p.set_defaults(func=cmd_ifft)

    p = sub.add_parser("polymul", help="negacyclic product of two files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--check", action="store_true",
                   help="also run the schoolbook oracle and report deviation")
    add_common(p)
    p.set_defaults(func=cmd_polymul)

    p = sub.add_parser("schedule", help="dispatch trace CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--npe", type=int, default=2)
    add_common(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("rom", help="dump per-PE compressed ROM images")
    p.add_argument("--npe", type=int, default=2)
    p.add_argument("--out-dir", default="rom_images")
    p.set_defaults(func=cmd_rom)

    p = sub.add_parser("cycles", help="cycle-count and execution-time table")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    add_common(p)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("metrics", help="normalized comparison table")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    add_common(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("verify", help="run the full invariant suite")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--quick", action="store_true",
                   help="smaller randomized corpora")
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
