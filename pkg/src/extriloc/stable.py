"""The stable module category of k[x]/(x^n).

Indecomposables are J_1, ..., J_{n-1} (J_a = k[x]/(x^a)); J_n is projective
and vanishes stably.  A map J_a -> J_b is determined by the image of the
generator e_0; the stable basis is e_0 |-> e_i for max(0, b-a) <= i <
min(b, n-a), larger i factoring through J_n.  The shift is the cosyzygy
J_a |-> J_{n-a}.
"""

from __future__ import annotations

import numpy as np

from .category import Category, Mor, Obj, WindowExceeded
from .quiver import Quiver, Rep, RepMap, cokernel, decompose, direct_sum


def _nilpotent(a: int) -> np.ndarray:
    m = np.zeros((a, a), dtype=np.int64)
    for i in range(a - 1):
        m[i + 1, i] = 1
    return m


class StableNakayama(Category):
    def __init__(self, n: int, p: int):
        if n < 2:
            raise ValueError("block bound n must be at least 2")
        super().__init__(p)
        self.n = n
        self.labels = list(range(1, n))  # block sizes
        self.window_labels = list(range(n - 1))
        self.loop = Quiver.loop()
        self._models = [Rep.make(self.loop, p, [a], [_nilpotent(a)]) for a in range(1, n + 1)]

    def __repr__(self) -> str:
        return f"StableNakayama(n={self.n}, p={self.p})"

    def descriptor(self) -> dict:
        return {"kind": "stable_nakayama", "n": self.n, "p": self.p}

    # -- labels -------------------------------------------------------------------
    def size(self, i: int) -> int:
        return i + 1

    def label_name(self, i: int) -> str:
        return f"J{i + 1}"

    def parse_label(self, text: str) -> int:
        t = str(text).strip()
        if not t.startswith("J") or not t[1:].isdigit():
            raise ValueError(f"not a stable label: {text!r}")
        a = int(t[1:])
        if not 1 <= a < self.n:
            raise ValueError(f"J{a} is not a stable indecomposable for n={self.n}")
        return a - 1

    def _range(self, i: int, j: int) -> tuple[int, int]:
        a, b = i + 1, j + 1
        return max(0, b - a), min(b, self.n - a)

    def hom_dim(self, i: int, j: int) -> int:
        lo, hi = self._range(i, j)
        return max(0, hi - lo)

    def _tensor(self, i: int, j: int, k: int) -> np.ndarray:
        lo1, hi1 = self._range(i, j)
        lo2, hi2 = self._range(j, k)
        lo3, hi3 = self._range(i, k)
        T = np.zeros((max(0, hi2 - lo2), max(0, hi1 - lo1), max(0, hi3 - lo3)), dtype=np.int64)
        for s in range(T.shape[0]):
            for t in range(T.shape[1]):
                e = (lo1 + t) + (lo2 + s)
                if lo3 <= e < hi3:
                    T[s, t, e - lo3] = 1
        return T

    def shift_label(self, i: int, k: int) -> int:
        return (self.n - (i + 1)) - 1 if k % 2 else i

    def _shift_matrix(self, i: int, j: int, k: int) -> np.ndarray:
        d = self.hom_dim(i, j)
        if k % 2 == 0:
            return np.eye(d, dtype=np.int64)
        a, b = i + 1, j + 1
        lo, _ = self._range(i, j)
        lo2, _ = self._range(self.shift_label(i, 1), self.shift_label(j, 1))
        M = np.zeros((d, d), dtype=np.int64)
        for t in range(d):
            M[lo + t + a - b - lo2, t] = 1
        return M

    # -- module-level realization -------------------------------------------------
    def module(self, a: int) -> Rep:
        """J_a as a representation of the loop quiver (1 <= a <= n)."""
        return self._models[a - 1]

    def block_matrix(self, i: int, j: int, coords) -> np.ndarray:
        """Module map J_a -> J_b (sizes i+1, j+1) representing stable coords."""
        a, b = i + 1, j + 1
        lo, _ = self._range(i, j)
        M = np.zeros((b, a), dtype=np.int64)
        for t, c in enumerate(np.asarray(coords, dtype=np.int64)):
            if c:
                for k in range(a):
                    if lo + t + k < b:
                        M[lo + t + k, k] += c
        return M % self.p

    def module_map(self, f: Mor) -> np.ndarray:
        rows = [j + 1 for j in f.cod]
        cols = [i + 1 for i in f.dom]
        M = np.zeros((sum(rows), sum(cols)), dtype=np.int64)
        ro = np.concatenate([[0], np.cumsum(rows)]).astype(int)
        co = np.concatenate([[0], np.cumsum(cols)]).astype(int)
        for r, j in enumerate(f.cod):
            for c, i in enumerate(f.dom):
                M[ro[r]:ro[r + 1], co[c]:co[c + 1]] = self.block_matrix(i, j, f.block(r, c))
        return M % self.p

    def coords_of_generator_image(self, i: int, j: int, v) -> np.ndarray:
        """Stable coordinates of the map J_{i+1} -> J_{j+1} sending e_0 to v."""
        lo, hi = self._range(i, j)
        v = np.asarray(v, dtype=np.int64) % self.p
        if v[:lo].any():
            raise ValueError("vector is not the image of a generator")
        return v[lo:hi].copy()

    def _cone(self, f: Mor) -> tuple[Obj, Mor, Mor]:
        n, p = self.n, self.p
        X, Y = f.dom, f.cod
        Xs = [i + 1 for i in X]
        Ys = [j + 1 for j in Y]
        # (f; iota): X -> Y + I(X), iota the literal hull J_a -> J_n, e_0 -> e_{n-a}
        top = self.module_map(f)
        iota = np.zeros((n * len(Xs), sum(Xs)), dtype=np.int64)
        co = 0
        for c, a in enumerate(Xs):
            for k in range(a):
                iota[c * n + n - a + k, co + k] = 1
            co += a
        src = direct_sum([self.module(a) for a in Xs], self.loop, p)
        tgt = direct_sum([self.module(b) for b in Ys] + [self.module(n)] * len(Xs), self.loop, p)
        m = RepMap(src.rep, tgt.rep, (np.concatenate([top, iota], axis=0) % p,))
        if not m.commutes():
            raise AssertionError("cone input is not a module map")
        q = cokernel(m)
        dec = decompose(q.rep, self._models)
        keep = [s for s, lab in enumerate(dec.labels) if lab < n - 1]
        C = Obj(tuple(dec.labels[s] for s in keep))
        inv = dec.iso_inv.mats[0]  # C -> sum of models
        iso = dec.iso.mats[0]
        ysz = sum(Ys)
        # g: Y -> C
        gmat = (inv @ q.proj.mats[0][:, :ysz]) % p
        g = self.zero(Y, C)
        gv = g.vec.copy()
        lay = self.layout(Y, C)
        yo = np.concatenate([[0], np.cumsum(Ys)]).astype(int)
        for r, s in enumerate(keep):
            blk = dec.ds.block(s, 0)
            for c, j in enumerate(Y):
                v = gmat[blk, yo[c]]
                gv[lay.sl(r, c)] = self.coords_of_generator_image(j, C[r], v)
        g = Mor(self, Y, C, gv % p)
        # h: C -> X[1], class of (y, i) |-> -(i mod iota X)
        X1 = self.shift_obj(X, 1)
        lay = self.layout(C, X1)
        hv = np.zeros(lay.total, dtype=np.int64)
        sec = q.section[0]
        for c, s in enumerate(keep):
            gen = iso[:, dec.ds.block(s, 0).start]
            lift = (sec @ gen) % p
            for r, a in enumerate(Xs):
                part = lift[ysz + r * n: ysz + r * n + n - a]
                hv[lay.sl(r, c)] = self.coords_of_generator_image(C[c], X1[r], -part)
        h = Mor(self, C, X1, hv % p)
        return C, g, h

    def in_window(self, i: int) -> bool:
        return 0 <= i < self.n - 1

    def check_label(self, i: int) -> None:
        if not self.in_window(i):
            raise WindowExceeded(f"label {i} outside 0..{self.n - 2}")
