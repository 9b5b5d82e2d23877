"""Blockwise middle products in DFT-image space with a shared spectrum cache.

Series are cut into size-k blocks.  Each block is transformed once into a
double spectrum of order (2k, k): 3k values that multiply pointwise like an
order-3k transform while also exposing a plain order-2k DFT as their first
segment for reuse in short products.  A completed block is never transformed
again.  The head block of a still-growing series may be transformed while
some of its tail coefficients are unknown; once it grows it is a different
polynomial and is transformed afresh (the only recomputation allowed, an
asymptotically vanishing share of the work).

The middle product q = f * floor(g*h / x**shift) mod x**n runs entirely on
cached block spectra: pairwise image convolutions produce the u-vectors, the
single straddling u is inverted once to extract the flooring correction
theta and the boundary coefficient, theta is transformed forward, and each
output block costs one inverse transform.  Excluding the cached block
transforms, that is 3*(n/k + 2) order-k units.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import numpy as np

from . import fft_core
from .errors import DomainError, PlanError
from .series_core import TruncatedSeries, overlap_add


@dataclass(frozen=True)
class BlockPlan:
    """Parameter triple (k, n, m) plus the final order the run aims for.

    k is the block size, n the bootstrap/extension order, m the first-half
    frontier; extension steps grow a series by n, so k | n and n | m.
    """

    k: int
    n: int
    m: int
    target: int = 0
    fallback: bool = False

    def __post_init__(self):
        if self.fallback:
            return
        if self.k < 1:
            raise PlanError("block size must be positive")
        if self.n % self.k:
            raise PlanError(f"block size {self.k} must divide bootstrap order {self.n}")
        if self.m % self.n:
            raise PlanError(f"bootstrap order {self.n} must divide frontier {self.m}")
        if self.m < 2 * self.n:
            raise PlanError("frontier must be at least twice the bootstrap order")
        if self.target == 0:
            object.__setattr__(self, "target", 2 * self.m)

    @property
    def blocks_per_step(self) -> int:
        return self.n // self.k

    @property
    def ratio(self) -> int:
        """m/k, the normalization all stage budgets are quoted in."""
        return self.m // self.k


@dataclass
class MiddleScratch:
    """Intermediates of one block middle product, kept for inspection."""

    u_images: dict = field(default_factory=dict)
    boundary_poly: np.ndarray | None = None  # straddling block, coefficient form
    theta: np.ndarray | None = None
    d_polys: list = field(default_factory=list)


class _Slot:
    """Spectrum values of one block plus how many of its coefficients were
    known at transform time (== block size once the block is complete)."""

    __slots__ = ("values", "known")

    def __init__(self, values, known):
        self.values = values
        self.known = known


class BlockCache:
    """Per-label lists of block spectra over registered coefficient arrays.

    Single writer; readers may share it once a frontier is published.  The
    2k lane stores plain order-2k spectra for short products; when a double
    spectrum of the same block state exists, its first segment is reused at
    no transform cost.
    """

    def __init__(self, k: int):
        if k < 1:
            raise PlanError("block size must be positive")
        self.k = k
        self._arrays: dict[str, np.ndarray] = {}
        self._known: dict[str, int] = {}
        self._block: dict[str, int] = {}
        self._slots: dict[str, list] = {}
        self._lane2k: dict[str, list] = {}

    # -- series registration --------------------------------------------------

    def register(self, label: str, array, known: int | None = None, block: int | None = None):
        arr = np.asarray(array, dtype=np.complex128).reshape(-1)
        self._arrays[label] = arr
        self._known[label] = arr.size if known is None else int(known)
        self._block[label] = self.k if block is None else int(block)
        self._slots[label] = []
        self._lane2k[label] = []

    def has(self, label: str) -> bool:
        return label in self._arrays

    def extend_known(self, label: str, known: int):
        if known < self._known[label]:
            raise DomainError("known coefficient count cannot shrink")
        if known > self._arrays[label].size:
            raise DomainError("known count beyond backing array")
        self._known[label] = known

    def series_array(self, label: str) -> np.ndarray:
        return self._arrays[label]

    def known(self, label: str) -> int:
        return self._known[label]

    def alias(self, dst: str, src: str, upto: int):
        """Share src's slots 0..upto with dst (content must agree there)."""
        slots = self._slots[src]
        if upto >= len(slots):
            raise DomainError(f"alias range 0..{upto} beyond {src}'s {len(slots)} slots")
        self._slots[dst] = list(slots[: upto + 1])

    # -- spectra ----------------------------------------------------------------

    def _block_state(self, label: str, i: int, allow_partial: bool) -> int:
        size = self._block[label]
        total = self._known[label]
        known = total - i * size
        if known >= size:
            return size
        if known < 1:
            raise DomainError(f"series '{label}' has no coefficients in block {i}")
        if total == self._arrays[label].size:
            # fixed series: the short final block's zero padding is final
            return size
        if not allow_partial:
            raise DomainError(f"series '{label}' shorter than requested block range")
        return known

    def ensure(self, label: str, upto: int, ledger=None, stage=None, allow_partial=False) -> int:
        """Make double spectra for blocks 0..upto current; returns the number
        of transforms performed (3 order-k units each).

        The label's block size only controls slicing; every spectrum lives in
        the same order-(2k, k) space so blocks of different sizes can be
        combined pointwise (a double-sized block still fits: its degree is
        below 2k while the space holds degrees below 3k).
        """
        size = self._block[label]
        if size > 2 * self.k:
            raise PlanError("blocks larger than 2k do not fit the image space")
        arr = self._arrays[label]
        slots = self._slots[label]
        states = [self._block_state(label, i, allow_partial) for i in range(upto + 1)]
        while len(slots) <= upto:
            slots.append(None)
        fresh = 0
        for i, blk_known in enumerate(states):
            slot = slots[i]
            if slot is not None and slot.known == blk_known:
                continue
            blk = np.zeros(size, dtype=np.complex128)
            avail = min(blk_known, arr.size - i * size)
            blk[:avail] = arr[i * size : i * size + avail]
            spec = fft_core.double_dft(blk, 2 * self.k, self.k, ledger=ledger, stage=stage, label=label)
            slots[i] = _Slot(spec.values, blk_known)
            fresh += 1
        return fresh

    def ensure_2k(self, label: str, upto: int, ledger=None, stage=None, allow_partial=False) -> int:
        """Plain order-2k spectra for blocks 0..upto, reusing the first segment
        of a matching double spectrum when one exists."""
        size = self._block[label]
        if size != self.k:
            raise DomainError("the 2k lane is only kept for size-k blocks")
        arr = self._arrays[label]
        lane = self._lane2k[label]
        slots = self._slots[label]
        states = [self._block_state(label, i, allow_partial) for i in range(upto + 1)]
        while len(lane) <= upto:
            lane.append(None)
        fresh = 0
        for i, blk_known in enumerate(states):
            cur = lane[i]
            if cur is not None and cur.known == blk_known:
                continue
            if i < len(slots) and slots[i] is not None and slots[i].known == blk_known:
                lane[i] = _Slot(slots[i].values[: 2 * size], blk_known)
                continue
            blk = np.zeros(size, dtype=np.complex128)
            avail = min(blk_known, arr.size - i * size)
            blk[:avail] = arr[i * size : i * size + avail]
            spec = fft_core.dft(blk, 2 * size, ledger=ledger, stage=stage, label=label)
            lane[i] = _Slot(spec.values, blk_known)
            fresh += 1
        return fresh

    def high_water(self, label: str) -> int:
        """Index of the last transformed block, -1 when none."""
        hw = -1
        for i, slot in enumerate(self._slots[label]):
            if slot is None:
                break
            hw = i
        return hw

    def high_water_2k(self, label: str) -> int:
        hw = -1
        for i, slot in enumerate(self._lane2k[label]):
            if slot is None:
                break
            hw = i
        return hw

    def spec3k(self, label: str, i: int) -> np.ndarray:
        slots = self._slots[label]
        if i >= len(slots) or slots[i] is None:
            raise DomainError(f"missing spectrum for '{label}' block {i}")
        return slots[i].values

    def spec2k(self, label: str, i: int) -> np.ndarray:
        lane = self._lane2k[label]
        if i < len(lane) and lane[i] is not None:
            return lane[i].values
        slots = self._slots[label]
        if i < len(slots) and slots[i] is not None:
            return slots[i].values[: 2 * self._block[label]]
        raise DomainError(f"missing 2k spectrum for '{label}' block {i}")


def ensure_block_spectra(cache: BlockCache, label: str, upto: int, ledger=None, stage=None) -> int:
    """Transform any not-yet-cached blocks 0..upto of a series; idempotent.
    Each new block costs one combined transform worth 3 order-k units."""
    return cache.ensure(label, upto, ledger=ledger, stage=stage)


def _image_convolution(cache: BlockCache, b_label: str, c_label: str, j: int, ledger=None):
    """Image of the j-th size-k coefficient block of the product b*c, summed
    over all cached block pairs; None when no pair contributes."""
    hw_b = cache.high_water(b_label)
    hw_c = cache.high_water(c_label)
    lo = max(0, j - hw_c)
    hi = min(hw_b, j)
    if lo > hi:
        return None
    acc = None
    for mu in range(lo, hi + 1):
        term = cache.spec3k(b_label, mu) * cache.spec3k(c_label, j - mu)
        acc = term if acc is None else acc + term
    if ledger is not None:
        pairs = hi - lo + 1
        ledger.add_scalar("cmul", pairs * acc.size)
        ledger.add_scalar("cadd", (pairs - 1) * acc.size)
    return acc


def _aligned_middle(cache, a_label, b_label, c_label, block_shift, out_len,
                    ledger=None, linear=None):
    """Core of q = a * floor(residual / x**(block_shift*k)) mod x**out_len on
    cached spectra, where residual = b*c, or coef*(series in double-sized
    blocks) - b*c when ``linear=(coef, label2)`` is given.  The double-sized
    blocks of label2 sit on the even k-grid, so a folded linear term needs an
    even block shift.

    Returns (q, straddle_poly, scratch); straddle_poly is the residual's
    straddling block in coefficient form, whose coefficient k-1 is the single
    boundary value shifted products need.
    """
    k = cache.k
    zeta = fft_core.zeta_for(k)
    n_blocks = -(-out_len // k) if out_len > 0 else 0
    scratch = MiddleScratch()

    lin_coef, lin_label = linear if linear is not None else (None, None)
    if linear is not None and block_shift % 2:
        raise PlanError("a folded linear term needs an even block shift")

    def residual_image(i):
        u = _image_convolution(cache, b_label, c_label, block_shift + i, ledger)
        scratch.u_images[i] = u
        if linear is None:
            return u
        e = None if u is None else -u
        if (block_shift + i) % 2 == 0:
            jj = (block_shift + i) // 2
            if 0 <= jj <= cache.high_water(lin_label):
                lin = lin_coef * cache.spec3k(lin_label, jj)
                e = lin if e is None else e + lin
                if ledger is not None:
                    ledger.add_scalar("cmul", lin.size)
        return e

    # Straddling block: one inverse to read theta and the boundary value.
    img = residual_image(-1)
    if img is None:
        straddle = np.zeros(3 * k, dtype=np.complex128)
    else:
        spec = fft_core.Spectrum(img, "double", l=2 * k, k=k, zeta=zeta)
        straddle = fft_core.inverse_double_dft(spec, ledger=ledger, label="u-boundary")
    scratch.boundary_poly = straddle
    theta = straddle[k : 2 * k]
    scratch.theta = theta

    out_blocks = []
    if n_blocks > 0:
        theta_spec = fft_core.double_dft(theta, 2 * k, k, ledger=ledger, label="theta").values
        hw_a = cache.high_water(a_label)
        images = [residual_image(i) for i in range(n_blocks)]
        for t in range(n_blocks):
            acc = None
            if t <= hw_a:
                acc = cache.spec3k(a_label, t) * theta_spec
                if ledger is not None:
                    ledger.add_scalar("cmul", acc.size)
            for lam in range(0, min(t, hw_a) + 1):
                img_u = images[t - lam]
                if img_u is None:
                    continue
                term = cache.spec3k(a_label, lam) * img_u
                acc = term if acc is None else acc + term
                if ledger is not None:
                    ledger.add_scalar("cmul", term.size)
            if acc is None:
                out_blocks.append(np.zeros(3 * k, dtype=np.complex128))
                continue
            spec = fft_core.Spectrum(acc, "double", l=2 * k, k=k, zeta=zeta)
            out_blocks.append(fft_core.inverse_double_dft(spec, ledger=ledger, label="mp-restore"))
    scratch.d_polys = out_blocks
    if out_len > 0:
        q = overlap_add(out_blocks, k, out_len).coeffs
    else:
        q = np.zeros(0, dtype=np.complex128)
    return q, straddle, scratch


def triple_middle_product(cache: BlockCache, a_label: str, b_label: str, c_label: str,
                          shift: int, n: int, ledger=None, stage=None,
                          return_scratch=False):
    """q = a * floor(b*c / x**shift) mod x**n for a block-aligned shift.

    All block spectra must already be cached (see ensure_block_spectra); the
    incremental cost recorded here is one inverse for the straddling block,
    one forward for theta, and one inverse per output block.
    """
    k = cache.k
    if shift < 0 or shift % k:
        raise DomainError(f"shift {shift} is not a nonnegative multiple of block size {k}")
    if n % k:
        raise DomainError(f"output order {n} is not a multiple of block size {k}")
    ctx = ledger.stage(stage) if (ledger is not None and stage) else contextlib.nullcontext()
    with ctx:
        q, _, scratch = _aligned_middle(cache, a_label, b_label, c_label, shift // k, n, ledger)
    result = TruncatedSeries(q)
    if return_scratch:
        return result, scratch
    return result


def shifted_middle_product(cache: BlockCache, a_label: str, b_label: str, c_label: str,
                           shift: int, n: int, ledger=None, stage=None):
    """q = a * floor(b*c / x**shift) mod x**n for shift = (multiple of k) - 1.

    Splitting off the single coefficient below the aligned cut,
    floor(v/x**s) = v_s + x*floor(v/x**(s+1)), reduces this to the aligned
    product of order n-1 plus one scalar-times-vector term; the boundary
    value v_s is read from the straddling block at no extra transform cost.
    """
    k = cache.k
    if shift < 1 or (shift + 1) % k:
        raise DomainError(f"shift {shift} must be one below a multiple of {k}")
    if n < 1:
        raise DomainError("output order must be positive")
    ctx = ledger.stage(stage) if (ledger is not None and stage) else contextlib.nullcontext()
    with ctx:
        q_aligned, straddle, _ = _aligned_middle(
            cache, a_label, b_label, c_label, (shift + 1) // k, n - 1, ledger
        )
        v = straddle[k - 1]
        a_arr = cache.series_array(a_label)
        out = np.zeros(n, dtype=np.complex128)
        take = min(n, cache.known(a_label))
        out[:take] = v * a_arr[:take]
        out[1:] += q_aligned
        if ledger is not None:
            ledger.add_scalar("cmul", take)
            ledger.add_scalar("cadd", n - 1)
    return TruncatedSeries(out)
