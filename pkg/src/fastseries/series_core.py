"""The truncated-series data type, formal operators, block split/assemble,
and elementary arithmetic modulo x**n.

Values are immutable after construction and safe to share across threads.
Coefficient storage is dense complex128.
"""

from __future__ import annotations

import functools

import numpy as np

from . import fft_core
from .errors import DomainError, FormatError


class TruncatedSeries:
    """A power series known modulo x**order; coeffs[i] is the x**i coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        arr = np.array(coeffs, dtype=np.complex128).reshape(-1)
        self.coeffs = arr

    @property
    def order(self) -> int:
        return self.coeffs.size

    def __len__(self) -> int:
        return self.coeffs.size

    def __repr__(self):
        head = ", ".join(format(c, ".4g") for c in self.coeffs[:4])
        tail = ", ..." if self.order > 4 else ""
        return f"TruncatedSeries(order={self.order}, [{head}{tail}])"

    def copy(self) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs)


def coeffs_of(f) -> np.ndarray:
    """Coefficient array of a TruncatedSeries or any array-like."""
    if isinstance(f, TruncatedSeries):
        return f.coeffs
    return np.asarray(f, dtype=np.complex128).reshape(-1)


def truncate(f, n: int) -> TruncatedSeries:
    """First n coefficients.  Requesting more than are known is an error;
    contexts that really mean zero extension use zero_extend."""
    c = coeffs_of(f)
    if n < 0:
        raise DomainError("truncation order must be nonnegative")
    if n > c.size:
        raise DomainError(f"cannot truncate order-{c.size} series to larger order {n}")
    return TruncatedSeries(c[:n])


def zero_extend(f, n: int) -> TruncatedSeries:
    c = coeffs_of(f)
    if n < c.size:
        raise DomainError("zero_extend cannot shrink; use truncate")
    out = np.zeros(n, dtype=np.complex128)
    out[: c.size] = c
    return TruncatedSeries(out)


def floor_div_xn(f, n: int) -> TruncatedSeries:
    """Coefficients from index n upward, shifted down by n."""
    c = coeffs_of(f)
    if n < 0 or n > c.size:
        raise DomainError(f"shift {n} outside [0, {c.size}]")
    return TruncatedSeries(c[n:])


def derivative(f) -> TruncatedSeries:
    c = coeffs_of(f)
    if c.size < 1:
        raise DomainError("derivative needs order >= 1")
    return TruncatedSeries(np.arange(1, c.size) * c[1:])


@functools.lru_cache(maxsize=64)
def _recip_table(n: int):
    # Reciprocals 1/1 .. 1/n, precomputed so integration costs one scalar
    # multiplication per coefficient.
    return 1.0 / np.arange(1, n + 1)


def integral(f, ledger=None) -> TruncatedSeries:
    c = coeffs_of(f)
    out = np.zeros(c.size + 1, dtype=np.complex128)
    if c.size:
        out[1:] = c * _recip_table(c.size)
    if ledger is not None:
        ledger.add_scalar("smul", c.size)
    return TruncatedSeries(out)


def add(f, g) -> TruncatedSeries:
    a, b = coeffs_of(f), coeffs_of(g)
    if a.size != b.size:
        raise DomainError(f"order mismatch {a.size} != {b.size}; truncate explicitly")
    return TruncatedSeries(a + b)


def sub(f, g) -> TruncatedSeries:
    a, b = coeffs_of(f), coeffs_of(g)
    if a.size != b.size:
        raise DomainError(f"order mismatch {a.size} != {b.size}; truncate explicitly")
    return TruncatedSeries(a - b)


def scale(f, c) -> TruncatedSeries:
    return TruncatedSeries(coeffs_of(f) * complex(c))


def mul_mod(f, g, n: int, ledger=None, stage=None, label=None) -> TruncatedSeries:
    """(f*g) mod x**n through the transform engine."""
    a, b = coeffs_of(f)[:n], coeffs_of(g)[:n]
    if a.size == 0 or b.size == 0:
        return TruncatedSeries(np.zeros(n, dtype=np.complex128))
    prod = fft_core.multiply(a, b, ledger=ledger, stage=stage, label=label)
    out = np.zeros(n, dtype=np.complex128)
    take = min(n, prod.size)
    out[:take] = prod[:take]
    return TruncatedSeries(out)


def split_blocks(f, k: int) -> list[np.ndarray]:
    """Cut into ceil(order/k) size-k coefficient blocks, last one zero-padded."""
    if k < 1:
        raise DomainError("block size must be positive")
    c = coeffs_of(f)
    count = -(-c.size // k)
    blocks = []
    for i in range(count):
        blk = np.zeros(k, dtype=np.complex128)
        chunk = c[i * k : (i + 1) * k]
        blk[: chunk.size] = chunk
        blocks.append(blk)
    return blocks


def overlap_add(blocks, k: int, n: int) -> TruncatedSeries:
    """Sum block_i * x**(i*k) truncated to order n; overlapping parts add."""
    out = np.zeros(n, dtype=np.complex128)
    for i, blk in enumerate(blocks):
        b = np.asarray(blk, dtype=np.complex128).reshape(-1)
        lo = i * k
        if lo >= n:
            continue
        hi = min(n, lo + b.size)
        out[lo:hi] += b[: hi - lo]
    return TruncatedSeries(out)


# -- coefficient text format -------------------------------------------------
#
# One coefficient per line, ascending index:
#     #order n
#     index<TAB>re<TAB>im
# Floats are written with 17 significant digits, which round-trips float64
# exactly.


def write_series(f, fp):
    c = coeffs_of(f)
    fp.write(f"#order {c.size}\n")
    for i, v in enumerate(c):
        fp.write(f"{i}\t{format(v.real, '.17g')}\t{format(v.imag, '.17g')}\n")


def read_series(fp) -> TruncatedSeries:
    lines = fp.read().splitlines()
    if not lines:
        raise FormatError("empty file; expected '#order n' header", line=1)
    header = lines[0].strip()
    if not header.startswith("#order"):
        raise FormatError("expected '#order n' header", line=1)
    try:
        order = int(header.split()[1])
    except (IndexError, ValueError):
        raise FormatError("malformed '#order n' header", line=1) from None
    if order < 0:
        raise FormatError("negative order", line=1)
    out = np.zeros(order, dtype=np.complex128)
    seen = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split("\t")
        if len(parts) != 3:
            raise FormatError("expected 'index<TAB>re<TAB>im'", line=lineno)
        try:
            idx = int(parts[0])
            re, im = float(parts[1]), float(parts[2])
        except ValueError:
            raise FormatError("unparsable coefficient fields", line=lineno) from None
        if idx != seen:
            raise FormatError(f"expected index {seen}, got {idx}", line=lineno)
        if idx >= order:
            raise FormatError(f"index {idx} beyond declared order {order}", line=lineno)
        out[idx] = complex(re, im)
        seen += 1
    if seen != order:
        raise FormatError(f"declared order {order} but found {seen} coefficients", line=len(lines))
    return TruncatedSeries(out)


def dump_series(f, path):
    with open(path, "w") as fp:
        write_series(f, fp)


def load_series(path) -> TruncatedSeries:
    with open(path) as fp:
        return read_series(fp)
