"""Complex DFTs on the supported length set, composite transforms, and
DFT-based polynomial multiplication.

A polynomial is a 1-d array of complex coefficients, index = power of x.
Transforms evaluate with the convention ``values[j] = p(w**j)``,
``w = exp(2*pi*i/L)``; the inverse carries the 1/L factor.  Every public
transform reports a DFT event to the ledger it is handed (the leaf kernels
themselves do not record anything).

Supported lengths are ``2**a * 3**b`` with ``b <= 1``, which keeps the
granted/requested overshoot at 3/2 or better and directly provides the
orders k, 2k and 3k the block algorithms need.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import KindMismatchError, UnsupportedLengthError


def is_supported_length(L: int) -> bool:
    if L < 1:
        return False
    while L % 2 == 0:
        L //= 2
    return L in (1, 3)


def _pow2_at_least(x: int) -> int:
    return 1 << max(0, (x - 1).bit_length())


def granted_length(n: int) -> int:
    """Smallest supported transform length >= n."""
    if n <= 1:
        return 1
    p2 = _pow2_at_least(n)
    p3 = 3 * _pow2_at_least((n + 2) // 3)
    return min(c for c in (p2, p3) if c >= n)


@dataclass(frozen=True)
class TransformSize:
    """A requested length together with the smallest supported one covering it."""

    requested: int
    granted: int

    @classmethod
    def for_length(cls, n: int) -> "TransformSize":
        return cls(requested=n, granted=granted_length(n))


def zeta_for(k: int) -> complex:
    """Rotation used on the second segment of a double spectrum; zeta**k = i."""
    return complex(np.exp(1j * np.pi / (2 * k)))


# Root tables are computed once per length and reused; building them is not
# counted as arithmetic.
@functools.lru_cache(maxsize=256)
def _zeta_table(k: int, sign: int):
    table = zeta_for(k) ** (sign * np.arange(k))
    table.setflags(write=False)
    return table


@functools.lru_cache(maxsize=256)
def _outer3_table(k: int):
    j = np.arange(3 * k)
    w = np.exp(2j * np.pi / (3 * k))
    rows = tuple((w ** (t * j)).copy() for t in range(3))
    for row in rows:
        row.setflags(write=False)
    return rows


@dataclass
class Spectrum:
    """DFT image of a polynomial block.

    kind "plain":  values[j] = p(w_L**j), length L.
    kind "double": first l values are the order-l DFT, the last k are the
                   order-k DFT of p(zeta*x); total length l + k.
    kind "triple": an ordinary order-3k DFT computed through the outer
                   order-3 / inner order-k decomposition.

    Pointwise products of two spectra of identical kind represent the
    polynomial product as long as its degree fits the transform capacity
    (L, l + k, or 3k respectively).
    """

    values: np.ndarray
    kind: str
    l: int = 0
    k: int = 0
    zeta: complex = 0j

    @property
    def length(self) -> int:
        return len(self.values)

    def _signature(self):
        return (self.kind, self.l, self.k, len(self.values))

    def pointwise(self, other: "Spectrum", ledger=None) -> "Spectrum":
        if self._signature() != other._signature():
            raise KindMismatchError(
                f"cannot combine {self._signature()} with {other._signature()}"
            )
        if ledger is not None:
            ledger.add_scalar("cmul", len(self.values))
        return Spectrum(self.values * other.values, self.kind, self.l, self.k, self.zeta)


# -- leaf kernels (no recording) ------------------------------------------

def _forward(coeffs, L: int) -> np.ndarray:
    buf = np.zeros(L, dtype=np.complex128)
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if c.size:
        buf[: c.size] = c
    return np.fft.ifft(buf) * L


def _backward(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.complex128)
    return np.fft.fft(v) / len(v)


def _check_length(L: int):
    if not is_supported_length(L):
        raise UnsupportedLengthError(f"transform length {L} not of the form 2^a*3^b, b<=1")


def _record(ledger, order, stage, label):
    if ledger is not None:
        ledger.record_dft(order, stage=stage, label=label)


# -- public transforms -----------------------------------------------------

def dft(p, L: int, ledger=None, stage=None, label=None) -> Spectrum:
    """Order-L DFT of a polynomial with deg p < L.  Empty input is zero."""
    _check_length(L)
    c = np.asarray(p, dtype=np.complex128).reshape(-1)
    if c.size > L:
        raise UnsupportedLengthError(f"polynomial with {c.size} coefficients exceeds order {L}")
    _record(ledger, L, stage, label)
    return Spectrum(_forward(c, L), "plain")


def inverse_dft(s: Spectrum, ledger=None, stage=None, label=None) -> np.ndarray:
    """Recover the coefficients of a plain spectrum."""
    if s.kind != "plain":
        raise KindMismatchError(f"inverse_dft needs a plain spectrum, got {s.kind}")
    L = s.length
    _record(ledger, L, stage, label)
    return _backward(s.values)


def double_dft(p, l: int, k: int, ledger=None, stage=None, label=None) -> Spectrum:
    """Double DFT of order (l, k) of a polynomial with deg p < l + k.

    Costs one order-l and one order-k transform plus O(l+k) scalar work: the
    two segments are the residues of p modulo x**l - 1 and modulo x**k - i
    (the latter carried as the plain DFT of the zeta-rotated residue).
    """
    _check_length(l)
    _check_length(k)
    c = np.asarray(p, dtype=np.complex128).reshape(-1)
    if c.size > l + k:
        raise UnsupportedLengthError(
            f"polynomial with {c.size} coefficients exceeds double order ({l},{k})"
        )
    zeta = zeta_for(k)
    fold_l = np.zeros(l, dtype=np.complex128)
    for t in range(0, c.size, l):
        chunk = c[t : t + l]
        fold_l[: chunk.size] += chunk
    fold_k = np.zeros(k, dtype=np.complex128)
    tw = 1.0 + 0j  # i**t twist because zeta**k = i
    for t in range(0, c.size, k):
        chunk = c[t : t + k]
        fold_k[: chunk.size] += tw * chunk
        tw *= 1j
    fold_k *= _zeta_table(k, 1)
    if ledger is not None:
        ledger.add_scalar("cmul", l + 2 * k)
        ledger.add_scalar("cadd", c.size)
    _record(ledger, l, stage, label)
    _record(ledger, k, stage, label)
    values = np.concatenate([_forward(fold_l, l), _forward(fold_k, k)])
    return Spectrum(values, "double", l=l, k=k, zeta=zeta)


def inverse_double_dft(s: Spectrum, ledger=None, stage=None, label=None) -> np.ndarray:
    """Recover a degree < l + k polynomial from its double spectrum.

    Implemented for l = 2k by residue recombination: with x**2k = -1 modulo
    x**k - i, the top block is t = -(r2 - r1)/2 reduced modulo x**k - i,
    where r1, r2 are the two recovered residues.
    """
    if s.kind != "double":
        raise KindMismatchError(f"inverse_double_dft needs a double spectrum, got {s.kind}")
    l, k = s.l, s.k
    if l != 2 * k:
        raise KindMismatchError("double reconstruction is defined for l = 2k")
    _record(ledger, l, stage, label)
    _record(ledger, k, stage, label)
    r1 = _backward(s.values[:l])
    q = _backward(s.values[l:])
    r2 = q * _zeta_table(k, -1)
    r1_mod = r1[:k] + 1j * r1[k:]  # r1 modulo x**k - i
    top = -(r2 - r1_mod) / 2
    low = r1.copy()
    low[:k] -= top
    if ledger is not None:
        ledger.add_scalar("cmul", 2 * k)
        ledger.add_scalar("cadd", 3 * k)
    return np.concatenate([low, top])


def dft_3k(p, k: int, ledger=None, stage=None, label=None) -> Spectrum:
    """Order-3k DFT decomposed into three inner order-k DFTs plus order-3
    butterflies; equals dft(p, 3k) up to round-off."""
    _check_length(k)
    c = np.asarray(p, dtype=np.complex128).reshape(-1)
    if c.size > 3 * k:
        raise UnsupportedLengthError(
            f"polynomial with {c.size} coefficients exceeds order {3 * k}"
        )
    inner = [_forward(c[t::3], k) for t in range(3)]
    for _ in range(3):
        _record(ledger, k, stage, label)
    j = np.arange(3 * k)
    twiddles = _outer3_table(k)
    values = np.zeros(3 * k, dtype=np.complex128)
    for t in range(3):
        values += twiddles[t] * inner[t][j % k]
    if ledger is not None:
        ledger.add_scalar("cmul", 6 * k)
        ledger.add_scalar("cadd", 6 * k)
    return Spectrum(values, "triple", k=k)


def multiply(p, q, ledger=None, stage=None, label=None) -> np.ndarray:
    """Exact polynomial product via forward/forward/pointwise/inverse at the
    granted length; records exactly three DFT events of that one order."""
    a = np.asarray(p, dtype=np.complex128).reshape(-1)
    b = np.asarray(q, dtype=np.complex128).reshape(-1)
    if a.size == 0 or b.size == 0:
        return np.zeros(max(a.size + b.size - 1, 0), dtype=np.complex128)
    out_len = a.size + b.size - 1
    L = granted_length(out_len)
    sa = dft(a, L, ledger=ledger, stage=stage, label=label)
    sb = dft(b, L, ledger=ledger, stage=stage, label=label)
    prod = sa.pointwise(sb, ledger=ledger)
    full = inverse_dft(prod, ledger=ledger, stage=stage, label=label)
    return full[:out_len]
