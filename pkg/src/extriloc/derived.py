"""Bounded derived category of a Dynkin quiver, windowed in shift degree.

The label (M, d) is the module M placed so that its homology sits in degree
-d, modeled by its minimal presentation P1 -> P0 in degrees (-d-1, -d) with
differential (-1)^d times the presentation map.  With this sign the model of
(M, d+1) is literally the shifted complex of (M, d), so the shift acts as
the identity on coordinates.

Hom((M,d), (N,d)) = Hom(M, N) and Hom((M,d), (N,d+1)) = Ext^1(M, N); all
other homs between indecomposables vanish because kQ is hereditary.
"""

from __future__ import annotations

import numpy as np

from .category import Category, Mor, Obj, WindowExceeded
from .complexes import (Complex, block_map, lift, mapping_cone, psum, split_complex,
                        sub_block)
from .field import CoordSolver, as_rows
from .quiver import (Quiver, Rep, RepMap, dimvec_label, ext1, hom_basis, indecomposables,
                     injective, presentation, projective, simple)


class DerivedDynkin(Category):
    def __init__(self, quiver: Quiver, p: int, w: int, margin: int = 0):
        if w < 0 or margin < 0:
            raise ValueError("window and margin must be nonnegative")
        super().__init__(p)
        self.quiver = quiver
        self.w = w
        self.margin = margin
        self.W = w + margin
        self.mods: list[Rep] = indecomposables(quiver, p)
        self.nm = len(self.mods)
        self.labels = [(m, d) for d in range(-self.W, self.W + 1) for m in range(self.nm)]
        self.window_labels = [i for i, (m, d) in enumerate(self.labels) if abs(d) <= w]
        self.pres = [presentation(M) for M in self.mods]
        self._names = [dimvec_label(M.dims) for M in self.mods]
        self._precompute()

    def __repr__(self) -> str:
        return (f"DerivedDynkin({self.quiver.kind}, p={self.p}, w={self.w}"
                + (f", margin={self.margin})" if self.margin else ")"))

    def descriptor(self) -> dict:
        return {"kind": "derived_dynkin", "quiver": self.quiver.kind,
                "arrows": [[s + 1, t + 1] for s, t in self.quiver.arrows],
                "p": self.p, "window": self.w, "margin": self.margin}

    # -- module-level tables ----------------------------------------------------------
    def _precompute(self) -> None:
        nm, mods, pres = self.nm, self.mods, self.pres
        self.homs, self.hom_lifts, self.hom_solvers = {}, {}, {}
        self.exts, self.ext_lifts = {}, {}
        for a in range(nm):
            for b in range(nm):
                M, N = mods[a], mods[b]
                if a == b:
                    basis = [M.identity()]
                else:
                    basis = hom_basis(M, N)
                self.homs[a, b] = basis
                lifts = []
                for phi in basis:
                    a0 = lift(pres[a].P0, phi @ pres[a].pi, pres[b].pi)
                    a1 = lift(pres[a].P1, a0 @ pres[a].d, pres[b].d)
                    lifts.append((a0, a1))
                self.hom_lifts[a, b] = lifts
                # coordinates of maps P0(M) -> N of the form phi o pi_M
                amb = sum(N.dims[v] for v in pres[a].P0.verts)
                vecs = [pres[a].P0.eval_gens(phi @ pres[a].pi) for phi in basis]
                self.hom_solvers[a, b] = CoordSolver(self.p, as_rows(vecs, amb), amb)
                E = ext1(M, N, pres[a])
                self.exts[a, b] = E
                self.ext_lifts[a, b] = [lift(pres[a].P1, E.rep_map(k), pres[b].pi)
                                        for k in range(E.dim)]

    def hom_coords(self, a: int, b: int, phi: RepMap) -> np.ndarray:
        return self.hom_solvers[a, b].coords(self.pres[a].P0.eval_gens(phi @ self.pres[a].pi))

    # -- labels ----------------------------------------------------------------------------
    def index(self, m: int, d: int) -> int:
        if abs(d) > self.W:
            raise WindowExceeded(f"degree {d} outside window {self.W}")
        return (d + self.W) * self.nm + m

    def label_name(self, i: int) -> str:
        m, d = self.labels[i]
        return self._names[m] + (f"[{d}]" if d else "")

    def module_index(self, name: str) -> int:
        t = str(name).strip()
        if t in self._names:
            return self._names.index(t)
        kind, num = t[:1].upper(), t[1:].lstrip("_")
        if kind in "SPI" and num.isdigit():
            v = int(num) - 1
            if not 0 <= v < self.quiver.n:
                raise ValueError(f"no vertex {num}")
            ctor = {"S": simple, "P": projective, "I": injective}[kind]
            dims = ctor(self.quiver, v, self.p).dims
            return [M.dims for M in self.mods].index(dims)
        raise ValueError(f"unknown module label {name!r}")

    def parse_label(self, text: str) -> int:
        t = str(text).strip()
        d = 0
        if t.endswith("]") and "[" in t:
            t, sh = t[:-1].split("[", 1)
            d = int(sh)
        return self.index(self.module_index(t), d)

    def module(self, i: int) -> int:
        return self.labels[i][0]

    def degree(self, i: int) -> int:
        return self.labels[i][1]

    def key(self, i: int):
        return self.labels[i]

    def key_shift(self, key, k: int):
        return (key[0], key[1] + k)

    def in_window(self, i: int) -> bool:
        return abs(self.labels[i][1]) <= self.w

    def hom_dim(self, i: int, j: int) -> int:
        (a, d), (b, e) = self.labels[i], self.labels[j]
        if e == d:
            return len(self.homs[a, b])
        if e == d + 1:
            return self.exts[a, b].dim
        return 0

    def hom_dim_key(self, k1, k2) -> int:
        (a, d), (b, e) = k1, k2
        if e == d:
            return len(self.homs[a, b])
        if e == d + 1:
            return self.exts[a, b].dim
        return 0

    def _tensor(self, i: int, j: int, k: int) -> np.ndarray:
        (a, d), (b, e), (c, f) = self.labels[i], self.labels[j], self.labels[k]
        T = np.zeros((self.hom_dim(j, k), self.hom_dim(i, j), self.hom_dim(i, k)), dtype=np.int64)
        if T.size == 0:
            return T
        if e == d and f == d:
            for s, y in enumerate(self.homs[b, c]):
                for t, x in enumerate(self.homs[a, b]):
                    T[s, t] = self.hom_coords(a, c, y @ x)
        elif e == d and f == d + 1:
            E = self.exts[a, c]
            for s in range(self.exts[b, c].dim):
                eps = self.exts[b, c].rep_map(s)
                for t, (_, x1) in enumerate(self.hom_lifts[a, b]):
                    T[s, t] = E.coords(eps @ x1)
        elif e == d + 1 and f == e:
            E = self.exts[a, c]
            for s, y in enumerate(self.homs[b, c]):
                for t in range(self.exts[a, b].dim):
                    T[s, t] = E.coords(y @ self.exts[a, b].rep_map(t))
        return T

    def shift_label(self, i: int, k: int) -> int:
        m, d = self.labels[i]
        return self.index(m, d + k)

    def _shift_matrix(self, i: int, j: int, k: int) -> np.ndarray:
        return np.eye(self.hom_dim(i, j), dtype=np.int64)

    # -- chain-level realization -----------------------------------------------------------
    def complex_of(self, X: Obj) -> tuple[Complex, dict]:
        """Model complex of X and, per degree, the list of (summand, part) pieces."""
        Q, p = self.quiver, self.p
        pieces: dict[int, list] = {}
        for r, i in enumerate(X):
            m, d = self.labels[i]
            pieces.setdefault(-d - 1, []).append((r, 1, self.pres[m].P1))
            pieces.setdefault(-d, []).append((r, 0, self.pres[m].P0))
        terms = {}
        for t, ps in pieces.items():
            terms[t] = psum(Q, p, [P for _, _, P in ps])
        C = Complex(Q, p, terms)
        for t, ps in pieces.items():
            if t + 1 not in pieces:
                continue
            src_parts = [P.rep for _, _, P in ps]
            tgt = pieces[t + 1]
            tgt_parts = [P.rep for _, _, P in tgt]
            blocks = {}
            for c, (r, kind, _) in enumerate(ps):
                if kind != 1:
                    continue
                m, d = self.labels[X[r]]
                rr = next(k for k, (r2, kind2, _) in enumerate(tgt) if r2 == r and kind2 == 0)
                blocks[(rr, c)] = self.pres[m].d.scale((-1) ** (d % 2))
            C.diffs[t] = block_map(terms[t].rep, src_parts, terms[t + 1].rep, tgt_parts, blocks)
        return C, pieces

    def chain_map(self, f: Mor) -> tuple[Complex, Complex, dict, dict, dict]:
        X, Y = f.dom, f.cod
        CX, px = self.complex_of(X)
        CY, py = self.complex_of(Y)
        out = {}
        for t in set(px) & set(py):
            blocks = {}
            for c, (rc, kc, _) in enumerate(px[t]):
                a, d = self.labels[X[rc]]
                for r, (rr, kr, _) in enumerate(py[t]):
                    b, e = self.labels[Y[rr]]
                    coords = f.block(rr, rc)
                    if not coords.any():
                        continue
                    m = None
                    if e == d:
                        for s, cf in enumerate(coords):
                            if cf:
                                x = self.hom_lifts[a, b][s][kc] if kc == kr else None
                                if x is not None:
                                    m = x.scale(cf) if m is None else m + x.scale(cf)
                    elif e == d + 1 and kc == 1 and kr == 0:
                        for s, cf in enumerate(coords):
                            if cf:
                                x = self.ext_lifts[a, b][s]
                                m = x.scale(cf) if m is None else m + x.scale(cf)
                    if m is not None:
                        blocks[(r, c)] = m
            out[t] = block_map(CX.term(t).rep, [P.rep for _, _, P in px[t]],
                               CY.term(t).rep, [P.rep for _, _, P in py[t]], blocks)
        return CX, CY, px, py, out

    def extract(self, X: Obj, Y: Obj, px: dict, py: dict, phi: dict) -> Mor:
        """Coordinates of a chain map between the model complexes of X and Y."""
        lay = self.layout(X, Y)
        v = np.zeros(lay.total, dtype=np.int64)
        for r, j in enumerate(Y):
            b, e = self.labels[j]
            for c, i in enumerate(X):
                a, d = self.labels[i]
                if lay.dims[r, c] == 0:
                    continue
                if e == d:
                    t, kc = -d, 0
                else:
                    t, kc = -d - 1, 1
                if t not in phi:
                    continue
                cidx = next(k for k, (rc, kk, _) in enumerate(px[t]) if rc == c and kk == kc)
                ridx = next(k for k, (rr, kk, _) in enumerate(py[t]) if rr == r and kk == 0)
                blk = sub_block(phi[t], [P.rep for _, _, P in px[t]],
                                [P.rep for _, _, P in py[t]], ridx, cidx)
                x = self.pres[b].pi @ blk
                if e == d:
                    amb = self.pres[a].P0
                    v[lay.sl(r, c)] = self.hom_solvers[a, b].coords(amb.eval_gens(x))
                else:
                    v[lay.sl(r, c)] = self.exts[a, b].coords(x)
        return Mor(self, X, Y, v % self.p)

    def _cone(self, f: Mor) -> tuple[Obj, Mor, Mor]:
        CX, CY, px, py, fc = self.chain_map(f)
        C, g, h = mapping_cone(CX, CY, fc)
        pieces = split_complex(C, self.mods, self.pres, lambda i: (-1) ** ((-i) % 2))
        labels = []
        for pc in pieces:
            for lab in pc.labels:
                labels.append(self.index(lab, -pc.degree))
        Cobj = Obj(tuple(labels))
        CM, pm = self.complex_of(Cobj)
        # Lambda: C -> model and M: model -> C, per degree
        lam, mu = {}, {}
        r = 0
        for pc in pieces:
            for k in range(len(pc.labels)):
                i = pc.degree
                for t, kind, comp_l, comp_m in ((i, 0, pc.lam0[k], pc.mu0[k]),
                                               (i - 1, 1, pc.lam1[k], pc.mu1[k])):
                    lam.setdefault(t, {})[(r, kind)] = comp_l
                    mu.setdefault(t, {})[(r, kind)] = comp_m
                r += 1
        Lam, Mu = {}, {}
        for t, ps in pm.items():
            parts = [P.rep for _, _, P in ps]
            Ct = C.term(t).rep
            bl = {(k, 0): lam[t][(rr, kind)] for k, (rr, kind, _) in enumerate(ps)}
            Lam[t] = block_map(Ct, [Ct], CM.term(t).rep, parts, bl)
            bm = {(0, k): mu[t][(rr, kind)] for k, (rr, kind, _) in enumerate(ps)}
            Mu[t] = block_map(CM.term(t).rep, parts, Ct, [Ct], bm)
        gm = {t: Lam[t] @ g[t] for t in Lam if t in g}
        X1 = self.shift_obj(f.dom, 1)
        _, px1 = self.complex_of(X1)
        hm = {t: h[t] @ Mu[t] for t in Mu if t in h}
        gmor = self.extract(f.cod, Cobj, py, pm, gm)
        hmor = self.extract(Cobj, X1, pm, px1, hm)
        return Cobj, gmor, hmor

    # -- homology --------------------------------------------------------------------------
    def homology_degrees(self, X: Obj) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i in X:
            m, d = self.labels[i]
            out.setdefault(-d, []).append(m)
        return out
