"""Transforms over Q[x]/(x^n + 1) and FFT-domain polynomial arithmetic.

A real polynomial of power-of-two length n is represented in the FFT
domain by n/2 complex values: evaluating at the roots w(k) =
exp(i*pi*(2k+1)/n) is redundant for real inputs (the second half of the
roots are conjugates of the first), so only half the evaluations are
kept and the inverse normalizes by n/2 instead of n.

Two implementations are provided.  `fft_ref`/`ifft_ref` are O(n^2)
direct summations, used as oracles.  `fft_inplace`/`ifft_inplace` run
the iterative bit-reversal-free network the hardware model executes:
the input is packed as words a_k + i*a_{k+n/2}, then log2(n)-1
Cooley-Tukey stages of n/4 butterflies each (Gentleman-Sande with
conjugated twiddles for the inverse).  That packing makes the raw
network emit conj(a(w(k))) rather than a(w(k)) for odd k, so spectra
are conjugate-normalized on a fixed slot mask at readout; the resulting
order is a fixed permutation of the natural evaluation order, pinned by
tests rather than by a closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .twiddles import S_MAX, TwiddleTable, bit_reverse, build_twiddle_table


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class OrderTag(enum.Enum):
    NATURAL_EVAL = "natural_eval"
    FALCON_INTERNAL = "falcon_internal"


class DomainError(ValueError):
    """An argument is outside the supported domain."""


class OrderTagError(ValueError):
    """A spectrum with the wrong ordering was passed to an operation."""


class PointwiseDivideError(ZeroDivisionError):
    """Pointwise division hit zero denominators; `indices` lists them."""

    def __init__(self, indices):
        self.indices = tuple(indices)
        super().__init__(f"zero denominator at indices {self.indices}")


@dataclass(frozen=True)
class Spectrum:
    """Half-size FFT-domain representation: n/2 complex values."""
    values: tuple
    order_tag: OrderTag

    def __len__(self) -> int:
        return len(self.values)


_table: TwiddleTable | None = None

_butterflies_executed = 0


def _twiddle_table() -> TwiddleTable:
    global _table
    if _table is None:
        _table = build_twiddle_table(S_MAX)
    return _table


def butterflies_executed() -> int:
    """Instrumentation counter over all in-place transforms."""
    return _butterflies_executed


def reset_butterfly_counter() -> None:
    global _butterflies_executed
    _butterflies_executed = 0


def validate_polynomial(a: Sequence[float]) -> list[float]:
    coeffs = [float(x) for x in a]
    n = len(coeffs)
    if n < 2 or n > S_MAX or n & (n - 1):
        raise DomainError(
            f"polynomial length must be a power of two in 2..{S_MAX}, got {n}")
    if not all(math.isfinite(x) for x in coeffs):
        raise DomainError("polynomial coefficients must be finite")
    return coeffs


def omega(k: int, n: int) -> complex:
    """k-th complex root of x^n + 1: exp(i*pi*(2k+1)/n)."""
    if n < 2 or n & (n - 1):
        raise DomainError(f"n must be a power of two >= 2, got {n}")
    if not 0 <= k < n:
        raise DomainError(f"root index {k} out of range 0..{n - 1}")
    theta = math.pi * (2 * k + 1) / n
    return complex(math.cos(theta), math.sin(theta))


@lru_cache(maxsize=16)
def _ref_forward_matrix(n: int) -> np.ndarray:
    k = np.arange(n // 2)[:, None]
    j = np.arange(n)[None, :]
    return np.exp(1j * np.pi * j * (2 * k + 1) / n)


@lru_cache(maxsize=16)
def _ref_inverse_matrix(n: int) -> np.ndarray:
    j = np.arange(n)[:, None]
    k = np.arange(n // 2)[None, :]
    return np.exp(-1j * np.pi * j * (2 * k + 1) / n)


def fft_ref(a: Sequence[float]) -> Spectrum:
    """Brute-force oracle: values[k] = sum_j a_j exp(i*pi*j*(2k+1)/n)."""
    coeffs = validate_polynomial(a)
    n = len(coeffs)
    vals = _ref_forward_matrix(n) @ np.asarray(coeffs, dtype=np.float64)
    return Spectrum(values=tuple(complex(z) for z in vals),
                    order_tag=OrderTag.NATURAL_EVAL)


def ifft_ref(s: Spectrum) -> list[float]:
    """Inverse of fft_ref via the conjugate-symmetric half sum.

    Folding the conjugate half of the full n-point inverse sum into the
    stored half gives a_j = (2/n) * sum_{k<n/2} Re[s_k exp(-i*pi*j*(2k+1)/n)],
    i.e. the normalization runs over n/2.
    """
    if s.order_tag is not OrderTag.NATURAL_EVAL:
        raise OrderTagError("ifft_ref expects a NATURAL_EVAL spectrum")
    hn = len(s.values)
    n = 2 * hn
    vals = np.asarray(s.values, dtype=np.complex128)
    out = (2.0 / n) * (_ref_inverse_matrix(n) @ vals).real
    return [float(x) for x in out]


def slot_eval_map(hn: int) -> list[tuple[int, bool]]:
    """Per-slot (evaluation index k, conjugated?) of the raw network.

    Output slot 2m of the packed network holds a(w(2*rev(m))) directly
    and slot 2m+1 holds conj(a(w(hn-1-2*rev(m)))); conjugation lands
    exactly on the odd evaluation indices.
    """
    if hn == 1:
        return [(0, False)]
    w = hn.bit_length() - 2
    out = []
    for m in range(hn // 2):
        k = 2 * bit_reverse(m, w)
        out.append((k, False))
        out.append((hn - 1 - k, True))
    return out


def pack(a: Sequence[float]) -> list[complex]:
    """First-stage-free input packing: word k = a_k + i*a_{k+n/2}."""
    coeffs = validate_polynomial(a)
    hn = len(coeffs) // 2
    return [complex(coeffs[k], coeffs[k + hn]) for k in range(hn)]


def _run_forward_network(vals: list[complex], table: TwiddleTable) -> None:
    global _butterflies_executed
    hn = len(vals)
    n_stages = hn.bit_length() - 1
    for sg in range(n_stages):
        sg_r = n_stages - sg - 1
        ht = 1 << sg_r
        for g in range(1 << sg):
            tw = table.lookup(sg, g)
            base = g << (sg_r + 1)
            for j in range(base, base + ht):
                u = vals[j]
                t = tw * vals[j + ht]
                vals[j] = u + t
                vals[j + ht] = u - t
        _butterflies_executed += ht << sg


def _run_inverse_network(vals: list[complex], table: TwiddleTable) -> None:
    global _butterflies_executed
    hn = len(vals)
    n_stages = hn.bit_length() - 1
    for sg in range(n_stages - 1, -1, -1):
        sg_r = n_stages - sg - 1
        ht = 1 << sg_r
        for g in range(1 << sg):
            tw = table.lookup(sg, g).conjugate()
            base = g << (sg_r + 1)
            for j in range(base, base + ht):
                u = vals[j]
                v = vals[j + ht]
                vals[j] = u + v
                vals[j + ht] = (u - v) * tw
        _butterflies_executed += ht << sg


def fft_inplace(a: Sequence[float]) -> Spectrum:
    """Iterative in-place transform in the internal (scrambled) order."""
    vals = pack(a)
    _run_forward_network(vals, _twiddle_table())
    out = [z.conjugate() if conj else z
           for z, (_k, conj) in zip(vals, slot_eval_map(len(vals)))]
    return Spectrum(values=tuple(out), order_tag=OrderTag.FALCON_INTERNAL)


def ifft_inplace(s: Spectrum) -> list[float]:
    """Inverse of fft_inplace: Gentleman-Sande stages with conjugated
    twiddles, division by n/2, then unpacking to real coefficients."""
    if s.order_tag is not OrderTag.FALCON_INTERNAL:
        raise OrderTagError("ifft_inplace expects a FALCON_INTERNAL spectrum")
    hn = len(s.values)
    n = 2 * hn
    if hn & (hn - 1) or n > S_MAX:
        raise DomainError(f"unsupported spectrum length {hn}")
    vals = [z.conjugate() if conj else z
            for z, (_k, conj) in zip(s.values, slot_eval_map(hn))]
    _run_inverse_network(vals, _twiddle_table())
    scale = 2.0 / n
    out = [0.0] * n
    for k, z in enumerate(vals):
        out[k] = z.real * scale
        out[k + hn] = z.imag * scale
    return out


_POINTWISE_OPS = ("add", "sub", "mul", "div")


def pointwise_op(s1: Spectrum, s2: Spectrum, op: str) -> Spectrum:
    """Coefficient-wise complex arithmetic in the FFT domain."""
    if op not in _POINTWISE_OPS:
        raise DomainError(f"op must be one of {_POINTWISE_OPS}, got {op!r}")
    if len(s1.values) != len(s2.values):
        raise DomainError("spectra must have equal length")
    if s1.order_tag is not s2.order_tag:
        raise OrderTagError("spectra must share the same ordering")
    x, y = s1.values, s2.values
    if op == "add":
        vals = tuple(a + b for a, b in zip(x, y))
    elif op == "sub":
        vals = tuple(a - b for a, b in zip(x, y))
    elif op == "mul":
        vals = tuple(a * b for a, b in zip(x, y))
    else:
        zeros = [i for i, b in enumerate(y) if b == 0]
        if zeros:
            raise PointwiseDivideError(zeros)
        vals = tuple(a / b for a, b in zip(x, y))
    return Spectrum(values=vals, order_tag=s1.order_tag)


def polymul_negacyclic_oracle(a: Sequence[float], b: Sequence[float]) -> list[float]:
    """Schoolbook product reduced mod x^n + 1 (the wrap-around terms
    enter with negated sign)."""
    ca = validate_polynomial(a)
    cb = validate_polynomial(b)
    if len(ca) != len(cb):
        raise DomainError("polynomials must have equal length")
    n = len(ca)
    conv = np.convolve(np.asarray(ca), np.asarray(cb))
    out = np.empty(n)
    out[:] = conv[:n]
    out[:n - 1] -= conv[n:]
    return [float(x) for x in out]


def polymul_via_fft(a: Sequence[float], b: Sequence[float]) -> list[float]:
    """Negacyclic product through the half-size transform pipeline."""
    sa = fft_inplace(a)
    sb = fft_inplace(b)
    if len(sa) != len(sb):
        raise DomainError("polynomials must have equal length")
    return ifft_inplace(pointwise_op(sa, sb, "mul"))
