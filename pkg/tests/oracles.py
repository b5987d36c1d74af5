"""Brute-force oracles that never call the package's linear algebra.

Everything here enumerates vectors over F_p and counts; dimensions are
recovered as log_p of a cardinality.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def log_p(count: int, p: int) -> int:
    d = round(math.log(count, p))
    assert p ** d == count, (count, p)
    return d


def span_size(rows, p: int) -> int:
    """Number of distinct vectors in the row span, grown one row at a time."""
    span = None
    for r in rows:
        r = tuple(int(x) % p for x in r)
        if span is None:
            span = {tuple(0 for _ in r)}
        if r in span:
            continue
        span = {tuple((a + c * b) % p for a, b in zip(s, r)) for s in span for c in range(p)}
    return 1 if span is None else len(span)


def span_dim(rows, p: int) -> int:
    return log_p(span_size(rows, p), p)


def all_vectors(p: int, n: int):
    for v in itertools.product(range(p), repeat=n):
        yield np.asarray(v, dtype=np.int64)


def kernel_size(a, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    return sum(1 for v in all_vectors(p, a.shape[1]) if not ((a @ v) % p).any())


def all_matrices(p: int, rows: int, cols: int):
    for v in all_vectors(p, rows * cols):
        yield v.reshape(rows, cols)


def rep_hom_dim(dims_m, mats_m, dims_n, mats_n, arrows, p: int) -> int:
    """dim Hom between quiver representations by enumerating vertex maps."""
    shapes = [(dims_n[v], dims_m[v]) for v in range(len(dims_m))]
    sizes = [r * c for r, c in shapes]
    count = 0
    for v in all_vectors(p, sum(sizes)):
        phis, k = [], 0
        for (r, c), s in zip(shapes, sizes):
            phis.append(v[k:k + s].reshape(r, c))
            k += s
        if all(not ((mats_n[a] @ phis[s] - phis[t] @ mats_m[a]) % p).any()
               for a, (s, t) in enumerate(arrows)):
            count += 1
    return log_p(count, p)


def euler_form(dm, dn, arrows) -> int:
    return sum(a * b for a, b in zip(dm, dn)) - sum(dm[s] * dn[t] for s, t in arrows)


# -- truncated polynomial ring k[x]/(x^n) ---------------------------------------------------------
def jordan(a: int) -> np.ndarray:
    """Nilpotent Jordan block of size a (x acts by the shift)."""
    return np.eye(a, k=-1, dtype=np.int64)


def rank_mod2_many(mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of 0/1 matrices over F_2 by batched elimination."""
    m = mats.copy() % 2
    B, R, C = m.shape
    rank = np.zeros(B, dtype=np.int64)
    row = np.zeros(B, dtype=np.int64)
    idx = np.arange(B)
    for c in range(C):
        col = m[:, :, c]
        mask = (np.arange(R)[None, :] >= row[:, None]) & (col == 1)
        has = mask.any(axis=1)
        piv = np.argmax(mask, axis=1)
        b = idx[has]
        if b.size == 0:
            continue
        r0, pv = row[b], piv[has]
        tmp = m[b, r0].copy()
        m[b, r0] = m[b, pv]
        m[b, pv] = tmp
        prow = m[b, r0]
        elim = m[b, :, c].copy()
        elim[np.arange(b.size), r0] = 0
        m[b] = (m[b] + elim[:, :, None] * prow[:, None, :]) % 2
        row[b] += 1
        rank[b] += 1
    return rank


def jordan_types_mod2(mats: np.ndarray, n: int) -> list[tuple[int, ...]]:
    """Block sizes of nilpotent F_2 matrices with x^n = 0 (from ranks of powers)."""
    B, d, _ = mats.shape
    ranks = [np.full(B, d)]
    pw = np.broadcast_to(np.eye(d, dtype=np.int64), mats.shape).copy()
    for _ in range(n):
        pw = np.einsum("bij,bjk->bik", pw, mats) % 2
        ranks.append(rank_mod2_many(pw))
    # number of blocks of size >= k is rank(x^{k-1}) - rank(x^k)
    out = []
    for b in range(B):
        ge = [int(ranks[k - 1][b] - ranks[k][b]) for k in range(1, n + 1)]
        ge.append(0)
        out.append(tuple(s for k in range(1, n + 1) for s in [k] * (ge[k - 1] - ge[k])))
    return out


def nakayama_extension_middles(a_sizes, c_sizes, n: int) -> set[tuple[int, ...]]:
    """Non-projective Jordan types of all E in 0 -> A -> E -> C -> 0 over F_2[x]/(x^n).

    E carries x = [[x_A, D], [0, x_C]] for every D with x^n = 0; every
    extension of C by A arises this way.
    """
    xa = _blockdiag([jordan(a) for a in a_sizes])
    xc = _blockdiag([jordan(c) for c in c_sizes])
    da, dc = xa.shape[0], xc.shape[0]
    Ds = np.array(list(itertools.product((0, 1), repeat=da * dc)), dtype=np.int64)
    Ds = Ds.reshape(-1, da, dc)
    E = np.zeros((Ds.shape[0], da + dc, da + dc), dtype=np.int64)
    E[:, :da, :da] = xa
    E[:, da:, da:] = xc
    E[:, :da, da:] = Ds
    pw = E.copy()
    for _ in range(n - 1):
        pw = np.einsum("bij,bjk->bik", pw, E) % 2
    ok = ~pw.reshape(pw.shape[0], -1).any(axis=1)
    out = set()
    for t in jordan_types_mod2(E[ok], n):
        out.add(tuple(s for s in t if s < n))
    return out


def _blockdiag(blocks) -> np.ndarray:
    d = sum(b.shape[0] for b in blocks)
    out = np.zeros((d, d), dtype=np.int64)
    k = 0
    for b in blocks:
        s = b.shape[0]
        out[k:k + s, k:k + s] = b
        k += s
    return out


# -- modules over End(T) --------------------------------------------------------------------------------
def end_module(cat, T, X):
    """Hom(T, X) as a right End(T)-module, T = sum of labels.

    Returns the basis of Hom(T, X) (as morphisms) and, for every basis
    element e of End(T), the matrix of m |-> m o e in that basis (structure
    constants obtained by composing and reading off coordinates)."""
    from extriloc.category import Obj
    TT = Obj(tuple(T))
    basis = cat.basis(TT, X)
    ends = cat.basis(TT, TT)
    n = len(basis)
    coords = {}
    for v in all_vectors(cat.p, n):
        m = sum((int(c) * b.vec for c, b in zip(v, basis)), np.zeros(cat.hom_dim_obj(TT, X),
                                                                     dtype=np.int64))
        coords[tuple(int(x) % cat.p for x in m)] = v
    acts = []
    for e in ends:
        cols = [coords[tuple(int(x) for x in (b @ e).vec)] for b in basis]
        acts.append(np.array(cols, dtype=np.int64).T.reshape(n, n))
    return n, acts


def end_module_hom_dim(cat, T, X, Y) -> int:
    """dim Hom_End(T)(Hom(T, X), Hom(T, Y)) by enumerating all linear maps."""
    nx, ax = end_module(cat, T, X)
    ny, ay = end_module(cat, T, Y)
    if nx == 0 or ny == 0:
        return 0
    count = 0
    for phi in all_matrices(cat.p, ny, nx):
        if all(not ((phi @ a - b @ phi) % cat.p).any() for a, b in zip(ax, ay)):
            count += 1
    return log_p(count, cat.p)
