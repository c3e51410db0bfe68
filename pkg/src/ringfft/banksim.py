"""Cycle-accurate execution of a schedule on single-port banked memory.

The model mirrors the processor datapath: M = 2*n_PE complex-word banks
(each complex bank standing for a real/imaginary SRAM pair, which is how
the port accounting is done in hardware), an array of reconfigurable
butterfly units, and one twiddle ROM per PE.  Each dispatch batch costs
two cycles: all operand reads land in one ledger epoch and all result
writes in the next, and a second access to any bank within an epoch
aborts the run with a conflict report.  There is no pipelining, so
epochs never overlap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scheduler import ScheduleConfig, ScheduleTrace, build_schedule
from .transform import (
    Direction,
    DomainError,
    OrderTag,
    Spectrum,
    pack,
    slot_eval_map,
    validate_polynomial,
)
from .twiddles import S_MAX, CompressedRom, RomImage, fetch_twiddle, stage0_constant


class BankConflictError(RuntimeError):
    """A bank was accessed twice in one cycle."""

    def __init__(self, cycle, bank, pes):
        self.cycle = cycle
        self.bank = bank
        self.pes = tuple(pes)
        super().__init__(
            f"bank {bank} accessed twice in cycle {cycle} (PEs {self.pes})")


def pe_butterfly(u: complex, v: complex, w: complex,
                 mode: Direction) -> tuple[complex, complex]:
    """One reconfigurable butterfly.

    Forward is the multiply-then-add kernel x = u + w*v, y = u - w*v;
    inverse is add-then-multiply x = u + v, y = (u - v)*w, with w already
    conjugated by the twiddle fetch.
    """
    if mode is Direction.FORWARD:
        t = w * v
        return u + t, u - t
    return u + v, (u - v) * w


class BankedMemory:
    """M single-port banks of complex words with per-cycle port ledger."""

    def __init__(self, n_banks: int, s_max: int = S_MAX):
        self.n_banks = n_banks
        self.capacity = s_max // (2 * n_banks)
        self.banks = [[0j] * self.capacity for _ in range(n_banks)]
        self._epoch = None
        self._epoch_users: dict[int, int] = {}
        self.port_accesses = 0

    def _claim(self, bank: int, cycle: int, pe: int) -> None:
        if cycle != self._epoch:
            self._epoch = cycle
            self._epoch_users = {}
        if bank in self._epoch_users:
            raise BankConflictError(cycle, bank, (self._epoch_users[bank], pe))
        self._epoch_users[bank] = pe
        self.port_accesses += 1

    def read(self, bank: int, addr: int, cycle: int, pe: int) -> complex:
        self._claim(bank, cycle, pe)
        return self.banks[bank][addr]

    def write(self, bank: int, addr: int, value: complex,
              cycle: int, pe: int) -> None:
        self._claim(bank, cycle, pe)
        self.banks[bank][addr] = value

    def poke(self, bank: int, addr: int, value: complex) -> None:
        """Out-of-band store (initial load; no port accounting)."""
        self.banks[bank][addr] = value

    def peek(self, bank: int, addr: int) -> complex:
        return self.banks[bank][addr]

    def snapshot(self, s_m: int):
        """(bank, offset, value) over the run-effective region."""
        return [(b, o, self.banks[b][o])
                for b in range(self.n_banks) for o in range(s_m)]


class _RomFetcher:
    """Uniform twiddle access over compressed or uncompressed ROMs."""

    def __init__(self, roms):
        self.roms = roms
        self._wired = stage0_constant()

    def fetch(self, pe: int, rom_addr: int, forward: bool) -> complex:
        if rom_addr < 0:
            w = self._wired
            return w if forward else complex(w.real, -w.imag)
        rom = self.roms[pe]
        if isinstance(rom, CompressedRom):
            return fetch_twiddle(rom, rom_addr, forward)
        if isinstance(rom, RomImage):
            if rom_addr >= len(rom.entries):
                raise DomainError(
                    f"ROM address {rom_addr} out of range for PE {pe}")
            w = rom.entries[rom_addr]
            return w if forward else complex(w.real, -w.imag)
        raise TypeError(f"unsupported ROM object {type(rom)!r}")


def load_natural(a, mem: BankedMemory, s_m: int) -> None:
    """Pack a polynomial and place word k at bank k//S_M, offset k%S_M."""
    words = pack(a)
    if len(words) > mem.n_banks * s_m or s_m > mem.capacity:
        raise DomainError("polynomial does not fit the configured memory")
    for k, w in enumerate(words):
        mem.poke(k // s_m, k % s_m, w)


def execute(trace: ScheduleTrace, mem: BankedMemory, roms,
            stage_hook=None) -> int:
    """Run every dispatch batch; returns the cycle total.

    `roms` is the per-PE list of CompressedRom or RomImage objects.
    `stage_hook(stage, cycle)` fires after the last batch of each stage
    (used for boundary memory dumps).
    """
    fetcher = _RomFetcher(roms)
    mode = trace.config.direction
    forward = mode is Direction.FORWARD
    cycle = 0
    prev_stage = None
    for batch in trace.batches:
        if stage_hook and prev_stage is not None and batch[0].stage != prev_stage:
            stage_hook(prev_stage, cycle)
        prev_stage = batch[0].stage
        read_cycle, write_cycle = cycle, cycle + 1
        results = []
        for d in batch:
            prim = mem.read(d.bank0, d.addr0, read_cycle, d.pe)
            sec = mem.read(d.bank1, d.addr1, read_cycle, d.pe)
            u, v = (sec, prim) if d.input_exchanged else (prim, sec)
            w = fetcher.fetch(d.pe, d.rom_addr, forward)
            x, y = pe_butterfly(u, v, w, mode)
            results.append((d, x, y))
        for d, x, y in results:
            if d.input_exchanged:
                lo = (d.bank1, d.addr1)
                hi = (d.bank0, d.addr0)
            else:
                lo = (d.bank0, d.addr0)
                hi = (d.bank1, d.addr1)
            if d.output_exchanged:
                lo, hi = hi, lo
            mem.write(lo[0], lo[1], x, write_cycle, d.pe)
            mem.write(hi[0], hi[1], y, write_cycle, d.pe)
        cycle += 2
    if stage_hook and prev_stage is not None:
        stage_hook(prev_stage, cycle)
    return cycle


class Simulator:
    """One transform run: load, execute, read back, count cycles."""

    def __init__(self, cfg: ScheduleConfig, roms):
        self.cfg = cfg
        self.trace = build_schedule(cfg)
        self.roms = roms
        self.mem = BankedMemory(cfg.banks)
        self.measured_cycles: int | None = None

    def load_polynomial(self, a) -> None:
        if self.cfg.direction is not Direction.FORWARD:
            raise DomainError("polynomial input is for forward runs")
        coeffs = validate_polynomial(a)
        if len(coeffs) != self.cfg.n:
            raise DomainError(
                f"expected {self.cfg.n} coefficients, got {len(coeffs)}")
        load_natural(coeffs, self.mem, self.cfg.s_m)

    def load_spectrum(self, s: Spectrum) -> None:
        """Place an internal-order spectrum at the forward-final layout
        (undoing the readout conjugation)."""
        if self.cfg.direction is not Direction.INVERSE:
            raise DomainError("spectrum input is for inverse runs")
        if s.order_tag is not OrderTag.FALCON_INTERNAL:
            raise DomainError("simulator inverse expects FALCON_INTERNAL order")
        hn = self.cfg.n // 2
        if len(s.values) != hn:
            raise DomainError(f"expected {hn} spectrum values")
        s_m = self.cfg.s_m
        for w, (z, (_k, conj)) in enumerate(zip(s.values, slot_eval_map(hn))):
            slot = self.trace.initial_slots[w]
            self.mem.poke(slot // s_m, slot % s_m,
                          z.conjugate() if conj else z)

    def run(self, stage_hook=None) -> int:
        self.measured_cycles = execute(self.trace, self.mem, self.roms,
                                       stage_hook)
        return self.measured_cycles

    def read_result(self):
        """Forward -> internal-order Spectrum; inverse -> coefficients."""
        if self.measured_cycles is None:
            raise RuntimeError("run() the simulator before reading results")
        n = self.cfg.n
        hn = n // 2
        s_m = self.cfg.s_m
        if self.cfg.direction is Direction.FORWARD:
            vals = []
            for w, (_k, conj) in zip(range(hn), slot_eval_map(hn)):
                slot = self.trace.final_slots[w]
                z = self.mem.peek(slot // s_m, slot % s_m)
                vals.append(z.conjugate() if conj else z)
            return Spectrum(values=tuple(vals),
                            order_tag=OrderTag.FALCON_INTERNAL)
        if tuple(self.trace.final_slots) != tuple(range(hn)):
            raise RuntimeError("inverse run did not restore natural order")
        scale = 2.0 / n
        out = [0.0] * n
        for k in range(hn):
            z = self.mem.peek(k // s_m, k % s_m)
            out[k] = z.real * scale
            out[k + hn] = z.imag * scale
        return out
