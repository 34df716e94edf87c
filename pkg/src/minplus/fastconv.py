"""Exact integer convolution, Boolean convolution, and extreme-witness
computation for Boolean convolutions.

The integer convolution is exact: a number-theoretic transform modulo a
single FFT-friendly prime carries large inputs, and a direct summation
kernel handles small ones where it is faster.  A precision-window guard
rejects inputs whose true coefficients could reach the modulus.

Extreme witnesses use square-root blocking: positions of the first vector
are split into contiguous blocks, each block slice is convolved with the
second vector to find, per output position, the first (minimum) or last
(maximum) block containing a witness, and that block is then scanned
directly.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    NO_WITNESS,
    BoolVector,
    IntVector,
    LengthMismatch,
    OpCounters,
    PrecisionWindowExceeded,
    WitnessArray,
)

#: Prime modulus 119 * 2^23 + 1 with primitive root 3; supports transforms
#: of length up to 2^23.
NTT_MOD = 998244353
NTT_ROOT = 3

#: Below this length the direct summation kernel beats the transform.
_DIRECT_CUTOFF = 512


def _mod_powers(base: int, count: int) -> np.ndarray:
    """base^0 .. base^{count-1} modulo NTT_MOD."""
    out = np.ones(count, dtype=np.int64)
    exps = np.arange(count)
    bit, cur = 1, base % NTT_MOD
    while bit < count:
        mask = (exps & bit) != 0
        out[mask] = (out[mask] * cur) % NTT_MOD
        cur = (cur * cur) % NTT_MOD
        bit <<= 1
    return out


def _bit_reverse_permutation(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for i in range(bits):
        rev |= ((idx >> i) & 1) << (bits - 1 - i)
    return rev


def _ntt(a: np.ndarray, invert: bool) -> np.ndarray:
    """Iterative radix-2 transform of a length-2^k int64 array (< MOD)."""
    n = a.shape[0]
    a = a[_bit_reverse_permutation(n)]
    length = 2
    while length <= n:
        half = length // 2
        root = pow(NTT_ROOT, (NTT_MOD - 1) // length, NTT_MOD)
        if invert:
            root = pow(root, NTT_MOD - 2, NTT_MOD)
        ws = _mod_powers(root, half)
        blocks = a.reshape(-1, length)
        lo = blocks[:, :half].copy()  # blocks is a view; keep lo stable
        hi = (blocks[:, half:] * ws) % NTT_MOD
        blocks[:, :half] = (lo + hi) % NTT_MOD
        blocks[:, half:] = (lo - hi) % NTT_MOD
        length <<= 1
    if invert:
        a = (a * pow(n, NTT_MOD - 2, NTT_MOD)) % NTT_MOD
    return a


def _conv_ntt(pa: np.ndarray, qa: np.ndarray) -> np.ndarray:
    out_len = pa.shape[0] + qa.shape[0] - 1
    size = 1 << max(1, (out_len - 1).bit_length())
    fa = np.zeros(size, dtype=np.int64)
    fb = np.zeros(size, dtype=np.int64)
    fa[: pa.shape[0]] = pa % NTT_MOD
    fb[: qa.shape[0]] = qa % NTT_MOD
    fa = _ntt(fa, invert=False)
    fb = _ntt(fb, invert=False)
    fa = (fa * fb) % NTT_MOD
    return _ntt(fa, invert=True)[:out_len]


def _check_window(pa: np.ndarray, qa: np.ndarray) -> None:
    if pa.size == 0 or qa.size == 0:
        return
    if np.any(pa < 0) or np.any(qa < 0):
        raise ValueError("convolution inputs must be non-negative")
    worst = int(pa.max()) * int(qa.max()) * min(pa.shape[0], qa.shape[0])
    if worst >= NTT_MOD:
        raise PrecisionWindowExceeded(
            f"coefficient bound {worst} reaches the modulus {NTT_MOD}"
        )


def _conv_exact(pa: np.ndarray, qa: np.ndarray, method: str = "auto") -> np.ndarray:
    """Exact convolution of non-negative int64 arrays inside the window."""
    _check_window(pa, qa)
    if method == "auto":
        method = "direct" if max(pa.shape[0], qa.shape[0]) <= _DIRECT_CUTOFF else "ntt"
    if method == "direct":
        return np.convolve(pa, qa)
    if method == "ntt":
        return _conv_ntt(pa, qa)
    raise ValueError(f"unknown convolution method {method!r}")


def int_convolution(p: IntVector, q: IntVector, *, method: str = "auto") -> IntVector:
    """Exact arithmetic convolution c_i = sum_l p_l * q_{i-l}, length 2n-1.

    Inputs must be non-negative and small enough that every coefficient
    stays below the transform modulus (raises PrecisionWindowExceeded
    otherwise).  ``method`` forces the "ntt" or "direct" kernel; "auto"
    picks by size.
    """
    if p.n != q.n:
        raise LengthMismatch(f"vector lengths differ: {p.n} vs {q.n}")
    return IntVector(_conv_exact(p.coords, q.coords, method))


def bool_convolution(
    p: BoolVector, q: BoolVector, counters: OpCounters | None = None
) -> BoolVector:
    """Boolean convolution: bit k set iff some l has p_l and q_{k-l} set."""
    if p.n != q.n:
        raise LengthMismatch(f"vector lengths differ: {p.n} vs {q.n}")
    counts = _conv_exact(p.bits.astype(np.int64), q.bits.astype(np.int64))
    if counters is not None:
        counters.bool_convolutions += 1
    return BoolVector(counts > 0)


def _normalize_kind(kind: str) -> str:
    if kind not in ("min", "max"):
        raise ValueError(f"witness kind must be 'min' or 'max', got {kind!r}")
    return kind


def _checked_block_size(n: int, block_size: int | None) -> int:
    s = math.isqrt(n - 1) + 1 if block_size is None else block_size
    if not 1 <= s <= n:
        raise ValueError(f"block size {s} outside [1, {n}]")
    return s


def conv_extreme_witness(
    p: BoolVector,
    q: BoolVector,
    kind: str,
    *,
    block_size: int | None = None,
    counters: OpCounters | None = None,
) -> WitnessArray:
    """Extreme witnesses of the Boolean convolution of ``p`` and ``q``.

    Returns, for each k in 0..2n-2 with convolution bit 1, the least
    ("min") or greatest ("max") l in the legal window with p_l and q_{k-l}
    both set; NO_WITNESS where the bit is 0.  ``block_size`` tunes the
    blocking (default ceil(sqrt(n))); the output is independent of it.
    """
    if p.n != q.n:
        raise LengthMismatch(f"vector lengths differ: {p.n} vs {q.n}")
    kind = _normalize_kind(kind)
    n = p.n
    s = _checked_block_size(n, block_size)
    nblocks = -(-n // s)
    qi = q.bits.astype(np.int64)

    # Per output position, the extreme block holding a witness.  Convolving
    # just the block slice of p gives the same counts as convolving the
    # full-length masked vector, shifted by the block offset.
    extreme_block = np.full(2 * n - 1, -1, dtype=np.int64)
    order = range(nblocks) if kind == "min" else range(nblocks - 1, -1, -1)
    for t in order:
        lo, hi = t * s, min(t * s + s, n)
        counts = _conv_exact(p.bits[lo:hi].astype(np.int64), qi)
        ks = lo + np.flatnonzero(counts)
        fresh = ks[extreme_block[ks] < 0]
        extreme_block[fresh] = t

    wit = np.full(2 * n - 1, NO_WITNESS, dtype=np.int64)
    for t in range(nblocks):
        kk = np.flatnonzero(extreme_block == t)
        if kk.size == 0:
            continue
        lo, hi = t * s, min(t * s + s, n)
        ls = np.arange(lo, hi)
        diff = kk[:, None] - ls[None, :]
        hits = np.zeros(diff.shape, dtype=bool)
        valid = (diff >= 0) & (diff < n)
        hits[valid] = q.bits[diff[valid]]
        hits &= p.bits[ls][None, :]
        if kind == "min":
            off = np.argmax(hits, axis=1)
        else:
            off = hits.shape[1] - 1 - np.argmax(hits[:, ::-1], axis=1)
        wit[kk] = ls[off]
    if counters is not None:
        counters.witness_conv_calls += 1
    return WitnessArray(wit)
