"""Range-minimum queries over a fixed real array.

Sparse table: level k stores the minimum of every length-2^k window, so a
query covers its range with two overlapping windows.  Build is O(n log n),
queries are O(1).  A linear-build structure exists but buys nothing here:
every caller in this package already spends O(n log n) elsewhere.

Positions are 1-based, matching vertex indexing in the rest of the package.
Values may contain +inf sentinels; they pass through untouched.
"""

from __future__ import annotations

import numpy as np


class RangeMinIndex:
    """Immutable after construction; `build_ops` and `queries` count work."""

    def __init__(self, values) -> None:
        v = np.array(values, dtype=np.float64, copy=True)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("values must be a non-empty 1-d array")
        if np.any(np.isnan(v)):
            raise ValueError("values must not contain NaN")
        self.values = v
        self.values.setflags(write=False)
        m = v.size
        levels = 1
        while (1 << levels) <= m:
            levels += 1
        # Level k is meaningful only in columns [0, m - 2^k]; neither the
        # build nor the queries ever read past that, so the tail stays
        # uninitialized instead of paying for an inf fill.
        table = np.empty((levels, m), dtype=np.float64)
        table[0] = v
        for k in range(1, levels):
            half = 1 << (k - 1)
            width = m - (1 << k) + 1
            np.minimum(table[k - 1, :width], table[k - 1, half:half + width],
                       out=table[k, :width])
        self._table = table
        # logtab[L] = floor(log2 L) for window lengths 1..m; frexp yields
        # the exponent e with L = f * 2^e, 1/2 <= f < 1, hence e - 1.
        logtab = np.zeros(m + 1, dtype=np.int64)
        if m >= 1:
            _, exponents = np.frexp(np.arange(1, m + 1, dtype=np.float64))
            logtab[1:] = exponents.astype(np.int64) - 1
        self._logtab = logtab
        self.build_ops = m * levels
        self.queries = 0

    def __len__(self) -> int:
        return int(self.values.size)

    def query(self, l: int, r: int) -> float:
        """Minimum of values[l..r], inclusive, 1-based."""
        m = self.values.size
        if not (isinstance(l, (int, np.integer)) and isinstance(r, (int, np.integer))):
            raise ValueError("positions must be integers")
        if not (1 <= l <= r <= m):
            raise ValueError(f"need 1 <= l <= r <= {m}, got ({l}, {r})")
        self.queries += 1
        k = self._logtab[r - l + 1]
        span = 1 << k
        return float(min(self._table[k, l - 1], self._table[k, r - span]))

    def min_batch(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Vectorized query over parallel 1-based inclusive bounds.

        Produces exactly the floats that per-element query() calls would.
        """
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        m = self.values.size
        if lo.shape != hi.shape:
            raise ValueError("lo and hi must have the same shape")
        if lo.size and (np.any(lo < 1) or np.any(hi > m) or np.any(lo > hi)):
            raise ValueError(f"need 1 <= lo <= hi <= {m} elementwise")
        self.queries += int(lo.size)
        k = self._logtab[hi - lo + 1]
        span = np.int64(1) << k
        return np.minimum(self._table[k, lo - 1], self._table[k, hi - span])
