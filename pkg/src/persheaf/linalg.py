"""Exact linear algebra over prime fields.

Matrices are dense numpy int64 arrays with entries reduced mod p; a
0 x n or n x 0 array is a legitimate zero map.  Every elimination walks
columns left to right and pivots on the lowest nonzero row (ties broken
by column order), so equal inputs always produce equal bases.  All the
fixture matrices downstream depend on that determinism.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Field", "matrix", "zeros", "identity"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def matrix(rows, p: int | None = None) -> np.ndarray:
    """Build an int64 matrix from nested lists, reduced mod p when given."""
    if isinstance(rows, np.ndarray):
        a = rows.astype(np.int64)
    else:
        rows = [list(r) for r in rows]
        if not rows:
            return np.zeros((0, 0), dtype=np.int64)
        a = np.array(rows, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("expected a rectangular list of rows")
    if p is not None:
        a = a % p
    return a


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


class Field:
    """The prime field F_p, 2 <= p < 2**31.

    Carries the elimination routines used everywhere else: rank, kernel
    and image bases via column reduction, and linear solving via row
    reduction.  No floating point is involved at any stage.
    """

    def __init__(self, p: int):
        p = int(p)
        if not 2 <= p < 2 ** 31:
            raise ValueError(f"field order must satisfy 2 <= p < 2^31, got {p}")
        if not _is_prime(p):
            raise ValueError(f"field order must be prime, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.p})"

    def normalize(self, m) -> np.ndarray:
        return np.asarray(m, dtype=np.int64) % self.p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def matmul(self, a, b) -> np.ndarray:
        """a @ b mod p, with a bignum fallback when int64 could overflow."""
        a = self.normalize(a)
        b = self.normalize(b)
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
        inner = a.shape[1]
        if inner == 0 or a.shape[0] == 0 or b.shape[1] == 0:
            return zeros(a.shape[0], b.shape[1])
        # entries sit in [0, p), so the largest dot product is inner*(p-1)^2
        if inner * (self.p - 1) ** 2 < 2 ** 63:
            return (a @ b) % self.p
        prod = a.astype(object) @ b.astype(object)
        return np.array(prod % self.p, dtype=np.int64)

    def _column_echelon(self, m, track: bool = False):
        """Column reduction; returns (reduced, ops, pivot_row_to_column).

        ops is unipotent with m @ ops = reduced (None unless track).  A
        column's pivot is its lowest nonzero row; a later column whose
        low collides with an owned row gets a multiple of the owning
        column added until it finds a fresh low or empties out.
        """
        p = self.p
        r = self.normalize(m).copy()
        n_cols = r.shape[1]
        v = identity(n_cols) if track else None
        owner: dict[int, int] = {}
        for j in range(n_cols):
            while True:
                nz = np.nonzero(r[:, j])[0]
                if nz.size == 0:
                    break
                low = int(nz[-1])
                l = owner.get(low)
                if l is None:
                    owner[low] = j
                    break
                coef = (int(r[low, j]) * self.inv(r[low, l])) % p
                r[:, j] = (r[:, j] - coef * r[:, l]) % p
                if track:
                    v[:, j] = (v[:, j] - coef * v[:, l]) % p
        return r, v, owner

    def rank(self, m) -> int:
        _, _, owner = self._column_echelon(m)
        return len(owner)

    def kernel_basis(self, m) -> np.ndarray:
        """Columns spanning ker(m); count is cols - rank, m @ result = 0."""
        r, v, _ = self._column_echelon(m, track=True)
        zero_cols = [j for j in range(r.shape[1]) if not r[:, j].any()]
        return v[:, zero_cols]

    def image_basis(self, m) -> np.ndarray:
        """Columns spanning the column space of m, from the echelon form."""
        r, _, _ = self._column_echelon(m)
        cols = [j for j in range(r.shape[1]) if r[:, j].any()]
        return r[:, cols]

    def solve(self, a, b):
        """One solution x of a @ x = b per column of b, or None.

        Free variables are set to 0; pivots are taken top to bottom,
        left to right, so the particular solution is deterministic.
        """
        p = self.p
        a = self.normalize(a)
        b = self.normalize(b)
        single = b.ndim == 1
        if single:
            b = b.reshape(-1, 1)
        rows, cols = a.shape
        if b.shape[0] != rows:
            raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
        aug = np.hstack([a, b]).copy()
        pivots = []
        prow = 0
        for c in range(cols):
            if prow >= rows:
                break
            nz = np.nonzero(aug[prow:, c])[0]
            if nz.size == 0:
                continue
            r0 = prow + int(nz[0])
            if r0 != prow:
                aug[[prow, r0]] = aug[[r0, prow]]
            aug[prow] = (aug[prow] * self.inv(aug[prow, c])) % p
            for r in range(rows):
                if r != prow and aug[r, c]:
                    aug[r] = (aug[r] - aug[r, c] * aug[prow]) % p
            pivots.append((prow, c))
            prow += 1
        if prow < rows and np.any(aug[prow:, cols:]):
            return None
        x = zeros(cols, b.shape[1])
        for r, c in pivots:
            x[c] = aug[r, cols:]
        return x[:, 0] if single else x

    def express(self, b, span, modulo=None):
        """Write the columns of b as span @ c + modulo @ d.

        Returns (c, d), or None when b is outside the combined span.
        """
        span = self.normalize(span)
        if modulo is None:
            modulo = zeros(span.shape[0], 0)
        else:
            modulo = self.normalize(modulo)
        x = self.solve(np.hstack([span, modulo]), b)
        if x is None:
            return None
        k = span.shape[1]
        return x[:k], x[k:]

    def is_invertible(self, m) -> bool:
        m = self.normalize(m)
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]
