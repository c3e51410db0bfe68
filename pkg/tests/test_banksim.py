import pytest

from ringfft.banksim import (
    BankConflictError,
    BankedMemory,
    Simulator,
    load_natural,
    pe_butterfly,
)
from ringfft.scheduler import ScheduleConfig, cycle_count
from ringfft.transform import Direction, fft_inplace
from ringfft.twiddles import build_rom_set

ROMS = {npe: build_rom_set(1024, npe) for npe in (1, 2, 4)}


def test_pe_butterfly_forward():
    x, y = pe_butterfly(1 + 0j, 1 + 0j, 1j, Direction.FORWARD)
    assert (x, y) == (1 + 1j, 1 - 1j)
    x, y = pe_butterfly(2 + 3j, 4 - 1j, 1 + 0j, Direction.FORWARD)
    assert (x, y) == (6 + 2j, -2 + 4j)


def test_pe_butterfly_inverse_undoes_forward():
    u, v, w = 1 + 1j, 1 - 1j, -1j
    x, y = pe_butterfly(u, v, w, Direction.INVERSE)
    assert (x, y) == (2 + 0j, 2 + 0j)
    # forward with w, then inverse with conj(w), recovers 2x the inputs
    a, b = 0.3 + 0.7j, -1.1 + 0.2j
    tw = pe_butterfly(a, b, 0.6 + 0.8j, Direction.FORWARD)
    back = pe_butterfly(tw[0], tw[1], 0.6 - 0.8j, Direction.INVERSE)
    assert abs(back[0] - 2 * a) < 1e-15 and abs(back[1] - 2 * b) < 1e-15


def test_banked_memory_single_port_ledger():
    mem = BankedMemory(4)
    mem.write(0, 0, 1 + 0j, cycle=0, pe=0)
    mem.write(1, 0, 2 + 0j, cycle=0, pe=1)
    with pytest.raises(BankConflictError) as exc:
        mem.read(0, 0, cycle=0, pe=1)
    assert exc.value.bank == 0 and exc.value.cycle == 0
    assert exc.value.pes == (0, 1)
    # a new cycle opens the port again
    assert mem.read(0, 0, cycle=1, pe=1) == 1 + 0j


def test_load_natural_placement():
    mem = BankedMemory(4)
    load_natural(list(range(8)), mem, s_m=1)
    for b in range(4):
        assert mem.peek(b, 0) == complex(b, b + 4)

    mem = BankedMemory(4)
    load_natural(list(range(16)), mem, s_m=2)
    assert mem.peek(0, 0) == complex(0, 8)
    assert mem.peek(0, 1) == complex(1, 9)

    mem = BankedMemory(4)
    load_natural([0.0] * 16, mem, s_m=2)
    assert all(mem.peek(b, o) == 0j for b in range(4) for o in range(2))


@pytest.mark.parametrize("npe", [1, 2, 4])
@pytest.mark.parametrize("n", [8, 32, 256, 1024])
def test_forward_matches_inplace_bit_exact(n, npe, rng):
    if npe > n // 4:
        pytest.skip("more PEs than butterflies")
    _, _, roms = ROMS[npe]
    a = rng.uniform(-1, 1, n).tolist()
    sim = Simulator(ScheduleConfig(n=n, n_pe=npe), roms)
    sim.load_polynomial(a)
    sim.run()
    assert sim.read_result().values == fft_inplace(a).values


def test_compressed_equals_uncompressed_bit_exact(rng):
    _, images, roms = ROMS[2]
    a = rng.uniform(-1, 1, 1024).tolist()
    out = []
    for source in (roms, images):
        sim = Simulator(ScheduleConfig(n=1024, n_pe=2), source)
        sim.load_polynomial(a)
        sim.run()
        out.append(sim.read_result().values)
    assert out[0] == out[1]


@pytest.mark.parametrize("npe", [1, 2, 4])
@pytest.mark.parametrize("n", [8, 64, 1024])
def test_roundtrip_through_simulator(n, npe, rng):
    if npe > n // 4:
        pytest.skip("more PEs than butterflies")
    _, _, roms = ROMS[npe]
    a = rng.uniform(-1, 1, n).tolist()
    fwd = Simulator(ScheduleConfig(n=n, n_pe=npe), roms)
    fwd.load_polynomial(a)
    assert fwd.run() == cycle_count(n, npe)
    spec = fwd.read_result()

    inv = Simulator(ScheduleConfig(n=n, n_pe=npe,
                                   direction=Direction.INVERSE), roms)
    inv.load_spectrum(spec)
    assert inv.run() == cycle_count(n, npe)
    back = inv.read_result()
    tol = 1e-9 * max(1.0, max(abs(x) for x in a))
    assert max(abs(x - y) for x, y in zip(back, a)) <= tol


def test_memory_restored_up_to_scaling(rng):
    # after forward+inverse the raw memory holds n/2 times the load image
    n, npe = 64, 2
    _, _, roms = ROMS[npe]
    a = rng.uniform(-1, 1, n).tolist()
    fwd = Simulator(ScheduleConfig(n=n, n_pe=npe), roms)
    fwd.load_polynomial(a)
    fwd.run()
    inv = Simulator(ScheduleConfig(n=n, n_pe=npe,
                                   direction=Direction.INVERSE), roms)
    inv.load_spectrum(fwd.read_result())
    inv.run()
    ref = BankedMemory(inv.cfg.banks)
    load_natural(a, ref, inv.cfg.s_m)
    scale = n / 2
    for b in range(inv.cfg.banks):
        for o in range(inv.cfg.s_m):
            assert abs(inv.mem.peek(b, o) - scale * ref.peek(b, o)) \
                <= 1e-9 * scale


def test_constant_input_forward():
    _, _, roms = ROMS[2]
    for n in (8, 64):
        sim = Simulator(ScheduleConfig(n=n, n_pe=2), roms)
        sim.load_polynomial([3.5] + [0.0] * (n - 1))
        sim.run()
        assert all(abs(z - 3.5) < 1e-12 for z in sim.read_result().values)


def test_measured_cycles_all_configs():
    for n in (8, 16, 32, 64, 128, 256, 512, 1024):
        for npe in (1, 2, 4):
            if npe > n // 4:
                continue
            _, _, roms = ROMS[npe]
            sim = Simulator(ScheduleConfig(n=n, n_pe=npe), roms)
            sim.load_polynomial([0.0] * n)
            assert sim.run() == cycle_count(n, npe)


def test_port_access_accounting():
    # every butterfly costs exactly four port grants: two reads, two writes
    _, _, roms = ROMS[2]
    sim = Simulator(ScheduleConfig(n=32, n_pe=2), roms)
    sim.load_polynomial([1.0] * 32)
    sim.run()
    assert sim.mem.port_accesses == 4 * sim.trace.dispatch_count


def test_stage_hook_snapshots():
    _, _, roms = ROMS[2]
    sim = Simulator(ScheduleConfig(n=32, n_pe=2), roms)
    sim.load_polynomial(list(range(32)))
    seen = []
    sim.run(stage_hook=lambda stage, cycle: seen.append((stage, cycle)))
    assert [s for s, _ in seen] == [0, 1, 2, 3]
    assert seen[-1][1] == sim.measured_cycles
    snap = sim.mem.snapshot(sim.cfg.s_m)
    assert len(snap) == 16  # banks x run-effective offsets


def test_simulator_input_validation():
    _, _, roms = ROMS[2]
    sim = Simulator(ScheduleConfig(n=8, n_pe=2), roms)
    with pytest.raises(ValueError):
        sim.load_polynomial([1.0] * 16)
    with pytest.raises(RuntimeError):
        sim.read_result()
    inv = Simulator(ScheduleConfig(n=8, n_pe=2,
                                   direction=Direction.INVERSE), roms)
    with pytest.raises(ValueError):
        inv.load_polynomial([1.0] * 8)
