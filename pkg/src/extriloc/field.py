"""Exact dense linear algebra over prime fields F_p (p <= 97).

Matrices are numpy int64 arrays holding representatives in [0, p).  All
routines return fresh arrays and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_P = 97


class DimensionError(ValueError):
    """Raised when operands live in ambient spaces of different dimension."""


def as_rows(v, n: int) -> np.ndarray:
    """Reshape to rows of length n (also when n == 0)."""
    a = np.asarray(v, dtype=np.int64)
    if n == 0:
        return a.reshape(a.shape[0] if a.ndim > 1 else 0, 0)
    return a.reshape(-1, n)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@lru_cache(maxsize=None)
def field(p: int) -> "PrimeField":
    return PrimeField(p)


class PrimeField:
    """The field F_p together with Gaussian-elimination based routines."""

    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p) or p > MAX_P:
            raise ValueError(f"p must be a prime <= {MAX_P}, got {p}")
        self.p = p
        inv = np.zeros(p, dtype=np.int64)
        for a in range(1, p):
            inv[a] = pow(a, p - 2, p)
        self._inv = inv

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    # -- scalars -----------------------------------------------------------
    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self._inv[a])

    def mat(self, a) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) % self.p

    # -- elimination -------------------------------------------------------
    def rref(self, a) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns."""
        p = self.p
        m = np.array(a, dtype=np.int64) % p
        if m.ndim != 2:
            raise DimensionError("rref expects a 2-d array")
        rows, cols = m.shape
        piv: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(m[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                m[[r, k]] = m[[k, r]]
            m[r] = (m[r] * self._inv[m[r, c]]) % p
            col = m[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
            piv.append(c)
            r += 1
        return m, piv

    def rank(self, a) -> int:
        a = np.asarray(a)
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def kernel(self, a) -> np.ndarray:
        """Rows form a basis of {v : a @ v = 0}."""
        a = np.asarray(a, dtype=np.int64)
        rows, cols = a.shape
        if cols == 0:
            return np.zeros((0, 0), dtype=np.int64)
        if rows == 0:
            return np.eye(cols, dtype=np.int64)
        r, piv = self.rref(a)
        free = [c for c in range(cols) if c not in set(piv)]
        out = np.zeros((len(free), cols), dtype=np.int64)
        for i, f in enumerate(free):
            out[i, f] = 1
            for j, pc in enumerate(piv):
                out[i, pc] = (-r[j, f]) % self.p
        return out

    def solve(self, a, b) -> np.ndarray | None:
        """Some x with a @ x = b, or None when the system is inconsistent."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64) % self.p
        rows, cols = a.shape
        if b.shape[0] != rows:
            raise DimensionError(f"rhs length {b.shape[0]} != {rows} rows")
        if rows == 0:
            return np.zeros(cols, dtype=np.int64)
        aug = np.concatenate([a % self.p, b.reshape(rows, 1)], axis=1)
        r, piv = self.rref(aug)
        if piv and piv[-1] == cols:
            return None
        x = np.zeros(cols, dtype=np.int64)
        for j, pc in enumerate(piv):
            x[pc] = r[j, cols]
        return x

    def solve_matrix(self, a, b) -> np.ndarray | None:
        """Some X with a @ X = b (b may have several columns)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64) % self.p
        rows, cols = a.shape
        k = b.shape[1]
        if rows == 0:
            return np.zeros((cols, k), dtype=np.int64)
        aug = np.concatenate([a % self.p, b], axis=1)
        r, piv = self.rref(aug)
        if any(pc >= cols for pc in piv):
            return None
        x = np.zeros((cols, k), dtype=np.int64)
        for j, pc in enumerate(piv):
            x[pc] = r[j, cols:]
        return x

    def inverse(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        n = a.shape[0]
        if a.shape != (n, n):
            raise DimensionError("inverse of a non-square matrix")
        if n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        r, piv = self.rref(np.concatenate([a % self.p, np.eye(n, dtype=np.int64)], axis=1))
        if piv[:n] != list(range(n)):
            raise np.linalg.LinAlgError("matrix is singular mod p")
        return r[:, n:].copy()

    def is_invertible(self, a) -> bool:
        a = np.asarray(a)
        return a.shape[0] == a.shape[1] and self.rank(a) == a.shape[0]

    def matmul(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % self.p

    def complement_basis(self, rows, ambient: int) -> np.ndarray:
        """Standard basis vectors completing span(rows) to the ambient space."""
        rows = as_rows(rows, ambient)
        piv = set(self.rref(rows)[1]) if rows.shape[0] else set()
        free = [c for c in range(ambient) if c not in piv]
        out = np.zeros((len(free), ambient), dtype=np.int64)
        out[np.arange(len(free)), free] = 1
        return out


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^n stored by a reduced row echelon basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray  # rows, reduced echelon

    @staticmethod
    def span(p: int, vectors, ambient_dim: int) -> "Subspace":
        v = as_rows(vectors, ambient_dim) % p
        if v.shape[0] == 0:
            return Subspace(p, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64))
        r, piv = field(p).rref(v)
        return Subspace(p, ambient_dim, r[: len(piv)].copy())

    @staticmethod
    def zero(p: int, n: int) -> "Subspace":
        return Subspace(p, n, np.zeros((0, n), dtype=np.int64))

    @staticmethod
    def full(p: int, n: int) -> "Subspace":
        return Subspace(p, n, np.eye(n, dtype=np.int64))

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def _check(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim or other.p != self.p:
            raise DimensionError(
                f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        if not v.any():
            return True
        if self.dim == 0:
            return False
        return field(self.p).rank(np.vstack([self.basis, v])) == self.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.p, np.vstack([self.basis, other.basis]), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.p, self.ambient_dim)
        # a U = b V  <=>  (a, b) in ker [U^T | -V^T]
        m = np.concatenate([self.basis.T, (-other.basis.T) % self.p], axis=1)
        k = field(self.p).kernel(m)
        vecs = field(self.p).matmul(k[:, : self.dim], self.basis)
        return Subspace.span(self.p, vecs, self.ambient_dim)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and other.p == self.p
                and other.ambient_dim == self.ambient_dim
                and np.array_equal(other.basis, self.basis))

    def __hash__(self) -> int:
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


class CoordSolver:
    """Coordinates of vectors with respect to a fixed list of independent columns.

    Extra "null" columns may be appended; their coefficients are dropped,
    which computes coordinates in a quotient by their span.
    """

    def __init__(self, p: int, basis, ambient: int, null=None):
        self.p = p
        b = as_rows(basis, ambient)
        nl = (np.zeros((0, ambient), dtype=np.int64) if null is None
              else as_rows(null, ambient))
        F = field(p)
        self.k = b.shape[0]
        if nl.shape[0]:
            nl = Subspace.span(p, nl, ambient).basis
        cols = np.vstack([b, nl]).T % p  # ambient x (k + n)
        self.ncols = cols.shape[1]
        self.ambient = ambient
        if self.ncols == 0:
            self._rows = []
            self._inv = np.zeros((0, 0), dtype=np.int64)
            self._cols = cols
            return
        _, piv = F.rref(cols.T)
        if len(piv) != self.ncols:
            raise ValueError("basis and null vectors are not independent")
        self._rows = piv
        self._inv = F.inverse(cols[piv])
        self._cols = cols

    def coords(self, v, check: bool = True) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if self.ncols == 0:
            if check and v.any():
                raise ValueError("vector outside the span")
            return np.zeros(0, dtype=np.int64)
        x = (self._inv @ v[self._rows]) % self.p
        if check and not np.array_equal((self._cols @ x) % self.p, v):
            raise ValueError("vector outside the span")
        return x[: self.k]

    def coords_many(self, vs, check: bool = True) -> np.ndarray:
        """Rows of vs mapped to coordinate rows."""
        vs = as_rows(vs, self.ambient) % self.p
        if self.ncols == 0:
            if check and vs.any():
                raise ValueError("vector outside the span")
            return np.zeros((vs.shape[0], 0), dtype=np.int64)
        x = (vs[:, self._rows] @ self._inv.T) % self.p
        if check and not np.array_equal((x @ self._cols.T) % self.p, vs):
            raise ValueError("vector outside the span")
        return x[:, : self.k]


def kernel_basis(a, p: int) -> Subspace:
    a = np.asarray(a, dtype=np.int64)
    return Subspace.span(p, field(p).kernel(a), a.shape[1])


def solve(a, b, p: int) -> np.ndarray | None:
    return field(p).solve(a, b)
