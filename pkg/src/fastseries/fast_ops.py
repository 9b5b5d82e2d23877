"""Fast inverse, exponential and constant-power of truncated series.

The exponential of h (h[0] = 0) up to order 2m runs in three stages over a
shared block cache:

  stage one    bootstrap a short prefix, then repeatedly extend the frontier
               by n through the update
                   f += f_n * J(x**(m'-1) * r_n * floor(dh * f / x**(m'-1)))
               with every block product done on cached spectra;
  log stage    extend the logarithmic derivative of the computed prefix to
               order 2m-1 with the same middle-product machinery;
  final stage  one blockwise short product f * (h - log f) using the
               order-2k segments the cache already holds.

Powers h**C (h[0] = 1) follow the same shape with an extra series
s = C*h'/h computed first: its lower half folds the linear C*h' term into
the flooring pass (with h' held in double-sized blocks), its upper half runs
on plain order-2k products.  All budgets are recorded per stage in the
ledger; bootstrap work is tagged separately and excluded from budget bands.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import block_engine, fft_core
from .block_engine import BlockCache, BlockPlan, shifted_middle_product
from .cost_ledger import CostLedger
from .errors import DomainError, PlanError
from .oracle import oracle_exp, oracle_inverse, oracle_pow
from .series_core import TruncatedSeries, coeffs_of, mul_mod

FAST_MIN_ORDER = 32


@dataclass(frozen=True)
class PowExponent:
    """The constant exponent of a power run; 0 and 1 are legal fast paths."""

    value: complex

    def __post_init__(self):
        if not cmath.isfinite(complex(self.value)):
            raise DomainError("exponent must be finite")


def _as_exponent(C) -> complex:
    if isinstance(C, PowExponent):
        return complex(C.value)
    return complex(C)


# -- plan selection -----------------------------------------------------------

def _pick_bootstrap(m: int, k: int, r: int):
    cands = [d for d in range(2 * k, m // 2 + 1, 2 * k) if m % d == 0]
    if not cands:
        return None
    geq = [d for d in cands if d >= k * r]
    return min(geq) if geq else max(cands)


def choose_plan(N: int, k: int | None = None, n: int | None = None) -> BlockPlan:
    """Block plan for a final order N: frontier m = granted(ceil(N/2)), block
    size near m divided by the square root of log2(m), bootstrap order the
    closest divisor of m covering that block size times the same root.
    Overrides are honored verbatim when the divisibility constraints hold;
    below the minimum order the plan flags the quadratic fallback path.
    """
    if N < 1:
        raise DomainError("order must be positive")
    if N < FAST_MIN_ORDER and k is None and n is None:
        return BlockPlan(k=0, n=0, m=0, target=N, fallback=True)
    m = fft_core.granted_length(max(8, (N + 1) // 2))
    if k is not None and n is not None:
        return BlockPlan(k=k, n=n, m=m)
    lb = m.bit_length() - 1
    r = math.isqrt(lb)
    if r * r < lb:
        r += 1
    r = max(r, 2)
    if k is not None:
        nn = _pick_bootstrap(m, k, r)
        if nn is None:
            raise PlanError(f"no valid bootstrap order for k={k}, m={m}")
        return BlockPlan(k=k, n=nn, m=m)
    if n is not None:
        kk = 1 << max(0, min(m // r, n // 2).bit_length() - 1)
        while kk >= 1:
            try:
                return BlockPlan(k=kk, n=n, m=m)
            except PlanError:
                kk //= 2
        raise PlanError(f"no valid block size for n={n}, m={m}")
    kk = 1 << max(0, (max(1, m // r)).bit_length() - 1)
    while kk >= 1:
        nn = _pick_bootstrap(m, kk, r)
        if nn is not None:
            return BlockPlan(k=kk, n=nn, m=m)
        kk //= 2
    return BlockPlan(k=0, n=0, m=0, target=N, fallback=True)


# -- shared machinery --------------------------------------------------------

def _split_k(y: np.ndarray, k: int) -> list[np.ndarray]:
    count = -(-y.size // k)
    return [y[i * k : (i + 1) * k] for i in range(count)]


def _window_product_2k(cache, x_label, x_count, y, out_len, ledger,
                       y_label, out_label):
    """Short product (x * y) mod x**out_len where x is given by the order-2k
    segments of cached blocks 0..x_count-1 and y is a fresh coefficient
    window, transformed here block by block."""
    k = cache.k
    y = np.asarray(y, dtype=np.complex128)
    y_specs = [
        fft_core.dft(blk, 2 * k, ledger=ledger, label=y_label).values
        for blk in _split_k(y, k)
    ]
    out = np.zeros(out_len, dtype=np.complex128)
    t_max = -(-out_len // k)
    for t in range(t_max):
        acc = None
        for lam in range(0, min(t, x_count - 1) + 1):
            j = t - lam
            if j >= len(y_specs):
                continue
            term = cache.spec2k(x_label, lam) * y_specs[j]
            acc = term if acc is None else acc + term
            if ledger is not None:
                ledger.add_scalar("cmul", term.size)
        if acc is None:
            continue
        block = fft_core.inverse_dft(
            fft_core.Spectrum(acc, "plain"), ledger=ledger, label=out_label
        )
        lo = t * k
        hi = min(out_len, lo + block.size)
        out[lo:hi] += block[: hi - lo]
    return out


def _ode_update(cache, b_label, frontier, plan, ledger):
    """One extension step of the first-half update formula: the shifted
    middle product against the cached derivative-like series, integrated and
    multiplied back by the fixed prefix."""
    n, k = plan.n, plan.k
    q = shifted_middle_product(cache, "r", b_label, "f", frontier - 1, n, ledger=ledger)
    tail = q.coeffs / np.arange(frontier, frontier + n)
    if ledger is not None:
        ledger.add_scalar("smul", n)
    return _window_product_2k(
        cache, "f", n // k, tail, n, ledger, y_label="j-blocks", out_label="update-restore"
    )


# -- inverse ------------------------------------------------------------------

def fast_inverse(f, N: int, ledger=None) -> TruncatedSeries:
    """1/f mod x**N by quadratic Newton doubling r <- r*(2 - f*r)."""
    c = coeffs_of(f)
    if N < 1:
        raise DomainError("order must be positive")
    if c.size == 0 or c[0] == 0:
        raise DomainError("series with zero constant term is not invertible")
    led = ledger if ledger is not None else CostLedger()
    with led.stage("inverse"):
        r = np.array([1.0 / c[0]], dtype=np.complex128)
        t = 1
        while t < N:
            t = min(2 * t, N)
            fr = mul_mod(c[:t], r, t, ledger=led, label="newton").coeffs
            corr = -fr
            corr[0] += 2.0
            r = mul_mod(r, corr, t, ledger=led, label="newton").coeffs
    return TruncatedSeries(r)


# -- exponential --------------------------------------------------------------

def exp_first_half(h, m: int, plan: BlockPlan | None = None, ledger=None):
    """exp(h) mod x**m plus the populated block caches the second half reuses.

    Returns (f, cache); the cache holds double spectra for all blocks of f,
    for the blocks of h' consumed so far, and for the bootstrap reciprocal.
    """
    h_arr = coeffs_of(h)
    if h_arr.size and h_arr[0] != 0:
        raise DomainError("exp needs a zero constant term")
    if plan is None:
        plan = choose_plan(2 * m)
    if plan.fallback or plan.m != m:
        raise PlanError(f"plan frontier {plan.m} does not match requested {m}")
    if h_arr.size < m:
        raise DomainError(f"need at least {m} coefficients of the argument")
    led = ledger if ledger is not None else CostLedger()
    n, k = plan.n, plan.k
    a = n // k

    hh = h_arr[: 2 * m]
    dh = np.arange(1, hh.size) * hh[1:]
    with led.stage("bootstrap.E"):
        f_n = oracle_exp(hh[:n], n).coeffs
    with led.stage("bootstrap.I"):
        r_n = oracle_inverse(f_n, n).coeffs

    f_arr = np.zeros(m, dtype=np.complex128)
    f_arr[:n] = f_n
    cache = BlockCache(k)
    cache.register("f", f_arr, known=n)
    cache.register("dh", dh)
    cache.register("r", r_n)

    with led.stage("exp.stage1"):
        cache.ensure("r", a - 1, ledger=led)
        for fr in range(n, m, n):
            cache.ensure("dh", (fr + n) // k - 1, ledger=led)
            cache.ensure("f", fr // k - 1, ledger=led)
            f_arr[fr : fr + n] = _ode_update(cache, "dh", fr, plan, led)
            cache.extend_known("f", fr + n)
        cache.ensure("f", m // k - 1, ledger=led)
    return TruncatedSeries(f_arr), cache


def log_extend(f_m, r_n, cache: BlockCache, target: int, plan: BlockPlan,
               ledger=None, stage="exp.log", label="s", seed_label="dh",
               alias_upto=None):
    """Logarithmic derivative of the order-m prefix, extended to order
    target-1 = 2m-1; its integral is log(f mod x**m) up to order 2m.

    Seeded from the cached derivative-like series, whose block spectra are
    shared instead of recomputed; only blocks past the seed are transformed.
    """
    led = ledger if ledger is not None else CostLedger()
    m, n, k = plan.m, plan.n, plan.k
    if target != 2 * m:
        raise PlanError("extension target must double the frontier")
    if cache.high_water("f") < m // k - 1:
        raise DomainError("missing cached block spectra for the computed prefix")
    if not cache.has("r"):
        cache.register("r", coeffs_of(r_n))

    s_arr = np.zeros(2 * m - 1, dtype=np.complex128)
    s_arr[: m - 1] = cache.series_array(seed_label)[: m - 1]
    cache.register(label, s_arr, known=m - 1)
    cache.alias(label, seed_label, m // k - 2 if alias_upto is None else alias_upto)

    with led.stage(stage):
        cache.ensure("r", n // k - 1, ledger=led)
        for fr in range(m, 2 * m, n):
            cache.ensure(label, fr // k - 1, ledger=led, allow_partial=True)
            q = shifted_middle_product(cache, "r", label, "f", fr - 1, n, ledger=led)
            s_arr[fr - 1 : fr + n - 1] = -q.coeffs
            cache.extend_known(label, fr + n - 1)
    return TruncatedSeries(s_arr)


def fast_exp(h, N: int, plan: BlockPlan | None = None, ledger=None) -> TruncatedSeries:
    """exp(h) mod x**N for h[0] = 0."""
    h_arr = coeffs_of(h)
    if N < 1:
        raise DomainError("order must be positive")
    if h_arr.size and h_arr[0] != 0:
        raise DomainError("exp needs a zero constant term")
    led = ledger if ledger is not None else CostLedger()
    if plan is None:
        plan = choose_plan(N)
    if plan.fallback:
        with led.stage("bootstrap.E"):
            return oracle_exp(h_arr, N)
    m, k = plan.m, plan.k
    h2 = np.zeros(2 * m, dtype=np.complex128)
    take = min(h_arr.size, 2 * m)
    h2[:take] = h_arr[:take]

    f_m, cache = exp_first_half(h2, m, plan=plan, ledger=led)
    s = log_extend(f_m, cache.series_array("r"), cache, 2 * m, plan, ledger=led)
    with led.stage("exp.final"):
        idx = np.arange(m, 2 * m)
        w_tail = h2[m:] - s.coeffs[m - 1 :] / idx
        led.add_scalar("smul", m)
        led.add_scalar("cadd", m)
        upper = _window_product_2k(
            cache, "f", m // k, w_tail, m, led, y_label="w-blocks", out_label="final-restore"
        )
    out = np.concatenate([f_m.coeffs, upper])[:N]
    return TruncatedSeries(out)


# -- constant powers ----------------------------------------------------------

def _s_first_step(cache, dh, C, frontier, plan, ledger):
    """One lower-half extension of s = C*h'/h: the flooring pass runs on the
    residual C*h' - s*h, with h' folded in as double-sized blocks."""
    n, k = plan.n, plan.k
    q_al, straddle, _ = block_engine._aligned_middle(
        cache, "rho", "s", "h", frontier // k, n - 1, ledger, linear=(C, "dh2")
    )
    v = C * dh[frontier - 1] + straddle[k - 1]
    out = v * cache.series_array("rho")[:n]
    out[1:] += q_al
    if ledger is not None:
        ledger.add_scalar("cmul", n)
        ledger.add_scalar("cadd", n - 1)
    return out


def _image_conv_2k(cache, b_label, c_label, j, ledger):
    hw_b = cache.high_water_2k(b_label)
    hw_c = cache.high_water_2k(c_label)
    lo = max(0, j - hw_c)
    hi = min(hw_b, j)
    if lo > hi:
        return None
    acc = None
    for mu in range(lo, hi + 1):
        term = cache.spec2k(b_label, mu) * cache.spec2k(c_label, j - mu)
        acc = term if acc is None else acc + term
    if ledger is not None:
        pairs = hi - lo + 1
        ledger.add_scalar("cmul", pairs * acc.size)
        ledger.add_scalar("cadd", (pairs - 1) * acc.size)
    return acc


def _s_second_half(cache, s_arr, dh, C, plan, ledger):
    """Upper half of s = C*h'/h: each extension is two plain order-2k short
    products (the s*h window and the reciprocal correction)."""
    m, n, k = plan.m, plan.n, plan.k
    a = n // k
    for fr in range(m, 2 * m, n):
        cache.ensure_2k("h", (fr + n) // k - 1, ledger=ledger)
        cache.ensure_2k("s", fr // k - 1, ledger=ledger, allow_partial=True)
        M = fr // k
        u = {}
        for i in range(-1, a):
            img = _image_conv_2k(cache, "s", "h", M + i, ledger)
            if img is None:
                u[i] = None
            else:
                u[i] = fft_core.inverse_dft(
                    fft_core.Spectrum(img, "plain"), ledger=ledger, label="u2k-restore"
                )
        boundary = u[-1] if u[-1] is not None else np.zeros(2 * k, dtype=np.complex128)
        window = np.zeros(n - 1, dtype=np.complex128)
        theta = boundary[k:]
        window[: min(k, n - 1)] += theta[: min(k, n - 1)]
        for i in range(a):
            if u[i] is None:
                continue
            lo = i * k
            if lo >= n - 1:
                continue
            hi = min(n - 1, lo + 2 * k)
            window[lo:hi] += u[i][: hi - lo]
        G = np.zeros(n, dtype=np.complex128)
        G[0] = C * dh[fr - 1] - boundary[k - 1]
        G[1:] = C * dh[fr : fr + n - 1] - window
        if ledger is not None:
            ledger.add_scalar("cmul", n)
            ledger.add_scalar("cadd", 2 * n)
        q = _window_product_2k(
            cache, "rho", a, G, n, ledger, y_label="g-blocks", out_label="s2-restore"
        )
        s_arr[fr - 1 : fr + n - 1] = q
        cache.extend_known("s", fr + n - 1)


def s_iteration(h, rho_n, s_seed, cache: BlockCache, target: int, C, plan: BlockPlan,
                ledger=None) -> TruncatedSeries:
    """Extend s = C*h'/h from its seed (order n-1) to order target = 2m-1.

    The lower half uses the folded flooring pass on cached block spectra;
    the upper half switches to plain order-2k products.  Registers h, h'
    (double-sized blocks) and the reciprocal prefix in the cache when they
    are not present yet.
    """
    led = ledger if ledger is not None else CostLedger()
    C = _as_exponent(C)
    m, n, k = plan.m, plan.n, plan.k
    if n % (2 * k):
        raise PlanError("power runs need the extension order to span double blocks")
    if target != 2 * m - 1:
        raise PlanError("s extends to one below twice the frontier")
    h_arr = coeffs_of(h)
    if h_arr.size == 0 or h_arr[0] != 1:
        raise DomainError("power runs need constant term 1")
    h2 = np.zeros(2 * m, dtype=np.complex128)
    take = min(h_arr.size, 2 * m)
    h2[:take] = h_arr[:take]
    dh = np.arange(1, 2 * m) * h2[1:]

    if not cache.has("h"):
        cache.register("h", h2)
    if not cache.has("dh2"):
        cache.register("dh2", dh, block=2 * k)
    if not cache.has("rho"):
        cache.register("rho", coeffs_of(rho_n))
    s_arr = np.zeros(2 * m - 1, dtype=np.complex128)
    seed = coeffs_of(s_seed)
    if seed.size < n - 1:
        raise DomainError("seed must cover the bootstrap order")
    s_arr[: n - 1] = seed[: n - 1]
    cache.register("s", s_arr, known=n - 1)

    with led.stage("pow.s.first"):
        cache.ensure("rho", n // k - 1, ledger=led)
        for fr in range(n, m, n):
            cache.ensure("h", (fr + n) // k - 1, ledger=led)
            cache.ensure("dh2", (fr + n) // (2 * k) - 1, ledger=led)
            cache.ensure("s", fr // k - 1, ledger=led, allow_partial=True)
            s_arr[fr - 1 : fr + n - 1] = _s_first_step(cache, dh, C, fr, plan, led)
            cache.extend_known("s", fr + n - 1)
    with led.stage("pow.s.second"):
        _s_second_half(cache, s_arr, dh, C, plan, led)
    return TruncatedSeries(s_arr)


def fast_pow(h, C, N: int, plan: BlockPlan | None = None, ledger=None) -> TruncatedSeries:
    """h**C mod x**N for h[0] = 1 and a finite complex exponent."""
    Cc = _as_exponent(C)
    h_arr = coeffs_of(h)
    if N < 1:
        raise DomainError("order must be positive")
    if h_arr.size == 0 or h_arr[0] != 1:
        raise DomainError("power runs need constant term 1")
    led = ledger if ledger is not None else CostLedger()
    if Cc == 0:
        out = np.zeros(N, dtype=np.complex128)
        out[0] = 1.0
        return TruncatedSeries(out)
    if Cc == 1:
        out = np.zeros(N, dtype=np.complex128)
        take = min(N, h_arr.size)
        out[:take] = h_arr[:take]
        return TruncatedSeries(out)
    if plan is None:
        plan = choose_plan(N)
    if plan.fallback:
        with led.stage("bootstrap.P"):
            return oracle_pow(h_arr, Cc, N)
    m, n, k = plan.m, plan.n, plan.k
    if n % (2 * k):
        raise PlanError("power runs need the extension order to span double blocks")
    a = n // k

    h2 = np.zeros(2 * m, dtype=np.complex128)
    take = min(h_arr.size, 2 * m)
    h2[:take] = h_arr[:take]

    with led.stage("bootstrap.P"):
        f_n = oracle_pow(h2[:n], Cc, n).coeffs
    with led.stage("bootstrap.I"):
        r_n = oracle_inverse(f_n, n).coeffs
    with led.stage("bootstrap.rho"):
        rho_n = oracle_inverse(h2[:n], n).coeffs
    with led.stage("bootstrap.s"):
        dh_head = np.arange(1, n) * h2[1:n]
        seed = Cc * np.convolve(dh_head, rho_n)[: n - 1] if n > 1 else np.zeros(0)

    cache = BlockCache(k)
    s_arr = s_iteration(h2, rho_n, seed, cache, 2 * m - 1, Cc, plan, ledger=led).coeffs

    f_arr = np.zeros(m, dtype=np.complex128)
    f_arr[:n] = f_n
    cache.register("f", f_arr, known=n)
    cache.register("r", r_n)
    with led.stage("pow.f"):
        cache.ensure("r", a - 1, ledger=led)
        for fr in range(n, m, n):
            cache.ensure("s", (fr + n) // k - 1, ledger=led, stage="pow.s.first",
                         allow_partial=True)
            cache.ensure("f", fr // k - 1, ledger=led)
            f_arr[fr : fr + n] = _ode_update(cache, "s", fr, plan, led)
            cache.extend_known("f", fr + n)
        cache.ensure("f", m // k - 1, ledger=led)

    sf = log_extend(TruncatedSeries(f_arr), r_n, cache, 2 * m, plan, ledger=led,
                    stage="pow.log", label="sf", seed_label="s", alias_upto=m // k - 1)

    with led.stage("pow.final"):
        idx = np.arange(m, 2 * m)
        w_tail = (s_arr[m - 1 :] - sf.coeffs[m - 1 :]) / idx
        led.add_scalar("smul", m)
        led.add_scalar("cadd", m)
        upper = _window_product_2k(
            cache, "f", m // k, w_tail, m, led, y_label="w-blocks", out_label="final-restore"
        )
    out = np.concatenate([f_arr, upper])[:N]
    return TruncatedSeries(out)


def fast_log(f, N: int, ledger=None) -> TruncatedSeries:
    """log(f) mod x**N for f[0] = 1, as the integral of f'/f with the
    reciprocal computed by Newton doubling."""
    c = coeffs_of(f)
    if N < 1:
        raise DomainError("order must be positive")
    if c.size == 0 or c[0] != 1:
        raise DomainError("log needs constant term 1")
    led = ledger if ledger is not None else CostLedger()
    out = np.zeros(N, dtype=np.complex128)
    if N == 1:
        return TruncatedSeries(out)
    cc = np.zeros(N, dtype=np.complex128)
    take = min(N, c.size)
    cc[:take] = c[:take]
    df = np.arange(1, N) * cc[1:]
    inv = fast_inverse(cc[: N - 1], N - 1, ledger=led)
    prod = mul_mod(df, inv, N - 1, ledger=led, label="log")
    out[1:] = prod.coeffs / np.arange(1, N)
    return TruncatedSeries(out)
