"""Bounded complexes of projective kQ-modules and their splitting.

Terms are standard projective sums (so maps out of them are determined by
generator images); differentials and chain maps are module maps stored per
degree.  Over a hereditary algebra every such complex splits as a sum of
projective presentations of its homology modules, which is what
``split_complex`` constructs explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import field
from .quiver import (ProjSum, Quiver, Rep, RepMap, cokernel, decompose, image, kernel,
                     proj_sum, projective_cover)


def lift(P: ProjSum, x: RepMap, q: RepMap) -> RepMap:
    """Some y: P -> q.src with q y = x (x: P -> q.tgt must land in the image of q)."""
    F = field(q.p)
    A = q.src
    imgs = []
    for i, v in enumerate(P.verts):
        b = x.mats[v][:, P.gen_index(i)]
        if A.dims[v] == 0:
            if b.any():
                raise ValueError("lift: target element outside the image")
            imgs.append(np.zeros(0, dtype=np.int64))
            continue
        y = F.solve(q.mats[v], b)
        if y is None:
            raise ValueError("lift: target element outside the image")
        imgs.append(y)
    return P.from_images(A, imgs)


def psum(Q: Quiver, p: int, parts: list[ProjSum]) -> ProjSum:
    verts: list[int] = []
    for P in parts:
        verts.extend(P.verts)
    return proj_sum(Q, p, verts)


def part_slices(parts: list[Rep], n: int) -> list[list[slice]]:
    """slices[k][u]: rows of part k inside the stacked sum at vertex u."""
    out, run = [], [0] * n
    for P in parts:
        out.append([slice(run[u], run[u] + P.dims[u]) for u in range(n)])
        run = [run[u] + P.dims[u] for u in range(n)]
    return out


def block_map(src: Rep, src_parts: list[Rep], tgt: Rep, tgt_parts: list[Rep],
              blocks: dict) -> RepMap:
    """Module map assembled from blocks[(tgt part, src part)] (RepMaps)."""
    n = src.quiver.n
    ss, ts = part_slices(src_parts, n), part_slices(tgt_parts, n)
    mats = [np.zeros((tgt.dims[u], src.dims[u]), dtype=np.int64) for u in range(n)]
    for (r, c), m in blocks.items():
        for u in range(n):
            mats[u][ts[r][u], ss[c][u]] += m.mats[u]
    p = src.p
    return RepMap(src, tgt, tuple(x % p for x in mats))


def sub_block(m: RepMap, src_parts: list[Rep], tgt_parts: list[Rep], r: int, c: int) -> RepMap:
    n = m.src.quiver.n
    ss, ts = part_slices(src_parts, n), part_slices(tgt_parts, n)
    return RepMap(src_parts[c], tgt_parts[r],
                  tuple(m.mats[u][ts[r][u], ss[c][u]].copy() for u in range(n)))


@dataclass
class Complex:
    """Terms C^i (projective sums) with differentials d^i: C^i -> C^{i+1}."""

    quiver: Quiver
    p: int
    terms: dict[int, ProjSum]
    diffs: dict[int, RepMap] = dc_field(default_factory=dict)

    def term(self, i: int) -> ProjSum:
        t = self.terms.get(i)
        if t is None:
            t = proj_sum(self.quiver, self.p, ())
        return t

    def diff(self, i: int) -> RepMap:
        d = self.diffs.get(i)
        if d is None:
            d = RepMap.zero(self.term(i).rep, self.term(i + 1).rep)
        return d

    def degrees(self) -> list[int]:
        ks = [i for i, t in self.terms.items() if t.verts]
        return sorted(ks)

    def is_complex(self) -> bool:
        for i in self.degrees():
            if not (self.diff(i + 1) @ self.diff(i)).is_zero():
                return False
        return True


def chain_zero(X: Complex, Y: Complex, i: int) -> RepMap:
    return RepMap.zero(X.term(i).rep, Y.term(i).rep)


def is_chain_map(X: Complex, Y: Complex, f: dict[int, RepMap]) -> bool:
    degs = set(X.degrees()) | set(Y.degrees())
    for i in degs:
        fi = f.get(i, chain_zero(X, Y, i))
        fj = f.get(i + 1, chain_zero(X, Y, i + 1))
        if not (Y.diff(i) @ fi).equals(fj @ X.diff(i)):
            return False
    return True


def mapping_cone(X: Complex, Y: Complex, f: dict[int, RepMap]):
    """C^i = X^{i+1} + Y^i, d = [[-dX, 0], [f, dY]], with g: Y -> C and h: C -> X[1]."""
    Q, p = X.quiver, X.p
    degs = sorted({i - 1 for i in X.degrees()} | set(Y.degrees()))
    terms = {i: psum(Q, p, [X.term(i + 1), Y.term(i)]) for i in degs}
    C = Complex(Q, p, terms)
    for i in degs:
        if i + 1 not in terms:
            continue
        src_parts = [X.term(i + 1).rep, Y.term(i).rep]
        tgt_parts = [X.term(i + 2).rep, Y.term(i + 1).rep]
        fi = f.get(i + 1, chain_zero(X, Y, i + 1))
        C.diffs[i] = block_map(terms[i].rep, src_parts, terms[i + 1].rep, tgt_parts,
                               {(0, 0): X.diff(i + 1).scale(-1), (1, 0): fi, (1, 1): Y.diff(i)})
    g, h = {}, {}
    for i in degs:
        parts = [X.term(i + 1).rep, Y.term(i).rep]
        g[i] = block_map(Y.term(i).rep, [Y.term(i).rep], terms[i].rep, parts,
                         {(1, 0): Y.term(i).rep.identity()})
        h[i] = block_map(terms[i].rep, parts, X.term(i + 1).rep, [X.term(i + 1).rep],
                         {(0, 0): X.term(i + 1).rep.identity()})
    return C, g, h


@dataclass
class SplitPiece:
    """Homology H^i split into models: labels[k] indexes the model list."""

    degree: int
    labels: tuple[int, ...]
    # per summand k: mu0 P0_k -> C^i, mu1 P1_k -> C^{i-1}; lam0 C^i -> P0_k, lam1 C^{i-1} -> P1_k
    mu0: list[RepMap]
    mu1: list[RepMap]
    lam0: list[RepMap]
    lam1: list[RepMap]


def split_complex(C: Complex, models: list[Rep], presentations: list, sign) -> list[SplitPiece]:
    """Homotopy equivalence between C and a sum of model presentations.

    ``presentations[m]`` is the presentation (P1 -d-> P0 -pi-> M) of model m;
    ``sign(i)`` is the sign of the model differential when its homology sits
    in degree i.  Each degree splits as C^i = Z^i + s(B^{i+1}) with s a
    section of d^i, so C is the sum of the presentations B^i -> Z^i of its
    homology; these are compared with the models by lifting the
    decomposition isomorphisms of H^i.
    """
    Q, p = C.quiver, C.p
    degs = C.degrees()
    if not degs:
        return []
    lo, hi = degs[0], degs[-1]
    rng = range(lo - 1, hi + 2)
    G, beta, sec, PZ, zeta = {}, {}, {}, {}, {}
    for i in rng:
        d = C.diff(i)
        K, inc = kernel(d)
        Pz, zcov = projective_cover(K)
        if Pz.rep.dims != K.dims:
            raise ValueError("cycle module is not projective")
        PZ[i], zeta[i] = Pz, inc @ zcov
        B, binc = image(d)
        Gp, cov = projective_cover(B)
        if Gp.rep.dims != B.dims:
            raise ValueError("boundary module is not projective")
        G[i + 1], beta[i + 1] = Gp, binc @ cov
        sec[i] = lift(Gp, beta[i + 1], d)
    # projections of C^i onto its Z-part and its section part
    pz, pg = {}, {}
    F = field(p)
    for i in rng:
        n = Q.n
        a, b = [], []
        for u in range(n):
            m = np.concatenate([zeta[i].mats[u], sec[i].mats[u]], axis=1)
            inv = F.inverse(m) if m.shape[0] else np.zeros((m.shape[1], 0), dtype=np.int64)
            k = zeta[i].mats[u].shape[1]
            a.append(inv[:k].copy())
            b.append(inv[k:].copy())
        pz[i] = RepMap(C.term(i).rep, PZ[i].rep, tuple(a))
        pg[i + 1] = RepMap(C.term(i).rep, G[i + 1].rep, tuple(b))
    out = []
    for i in range(lo, hi + 1):
        Gi = G[i]
        e = lift(Gi, beta[i], zeta[i])          # G_i -> PZ_i, injective
        H = cokernel(e)
        if H.rep.total_dim == 0:
            continue
        dec = decompose(H.rep, models)
        mu0, mu1, lam0, lam1 = [], [], [], []
        s = sign(i)
        for k, lab in enumerate(dec.labels):
            pres = presentations[lab]
            dk = pres.d.scale(s)
            uk = dec.iso @ dec.ds.inj(k)        # M_k -> H
            m0 = lift(pres.P0, uk @ pres.pi, H.proj)
            m1 = lift(pres.P1, m0 @ dk, e)
            l0 = lift(PZ[i], dec.ds.proj(k) @ dec.iso_inv @ H.proj, pres.pi)
            l1 = lift(Gi, l0 @ e, dk)
            mu0.append(zeta[i] @ m0)
            mu1.append(sec[i - 1] @ m1)
            lam0.append(l0 @ pz[i])
            lam1.append(l1 @ pg[i])
        out.append(SplitPiece(i, tuple(dec.labels), mu0, mu1, lam0, lam1))
    return out
