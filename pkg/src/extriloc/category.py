"""Krull-Schmidt triangulated categories given by finite structure data.

A backend supplies indecomposable labels, hom dimensions between labels,
composition structure constants, the shift on labels and hom spaces, a
residue functional on each endomorphism ring, and a concrete cone
construction.  Everything else (objects, block morphisms, composition,
isomorphism tests, rotations, homotopy pullbacks/pushouts, octahedra) is
generic and lives here.

Objects are tuples of label indices.  A morphism X -> Y is one flat
coordinate vector whose blocks are indexed by (cod summand, dom summand)
in row-major order.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

import numpy as np

from .field import Subspace, as_rows, field


class WindowExceeded(RuntimeError):
    """A construction produced a summand outside the backend's shift window."""


class CompositionError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug, never expected."""


@dataclass(frozen=True)
class Obj:
    labels: tuple[int, ...]

    def __add__(self, other: "Obj") -> "Obj":
        return Obj(self.labels + other.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    @property
    def is_zero(self) -> bool:
        return not self.labels

    def sorted(self) -> "Obj":
        return Obj(tuple(sorted(self.labels)))


ZERO = Obj(())


@dataclass(frozen=True)
class Layout:
    dims: np.ndarray      # (len(cod), len(dom))
    offsets: np.ndarray   # same shape
    total: int

    def sl(self, r: int, c: int) -> slice:
        o = int(self.offsets[r, c])
        return slice(o, o + int(self.dims[r, c]))


@dataclass(frozen=True, eq=False)
class Mor:
    cat: "Category"
    dom: Obj
    cod: Obj
    vec: np.ndarray

    @property
    def layout(self) -> Layout:
        return self.cat.layout(self.dom, self.cod)

    def block(self, r: int, c: int) -> np.ndarray:
        return self.vec[self.layout.sl(r, c)]

    def __matmul__(self, other: "Mor") -> "Mor":
        return self.cat.compose(self, other)

    def __add__(self, other: "Mor") -> "Mor":
        self._same(other)
        return Mor(self.cat, self.dom, self.cod, (self.vec + other.vec) % self.cat.p)

    def __sub__(self, other: "Mor") -> "Mor":
        self._same(other)
        return Mor(self.cat, self.dom, self.cod, (self.vec - other.vec) % self.cat.p)

    def __neg__(self) -> "Mor":
        return Mor(self.cat, self.dom, self.cod, (-self.vec) % self.cat.p)

    def scale(self, c: int) -> "Mor":
        return Mor(self.cat, self.dom, self.cod, (self.vec * c) % self.cat.p)

    def _same(self, other: "Mor") -> None:
        if other.dom != self.dom or other.cod != self.cod:
            raise CompositionError("morphisms have different domain/codomain")

    def is_zero(self) -> bool:
        return not self.vec.any()

    def equals(self, other: "Mor") -> bool:
        return (other.dom == self.dom and other.cod == self.cod
                and np.array_equal(self.vec % self.cat.p, other.vec % self.cat.p))

    def shift(self, k: int = 1) -> "Mor":
        return self.cat.shift_mor(self, k)

    def key(self) -> tuple:
        return (self.dom.labels, self.cod.labels, self.vec.tobytes())

    def __repr__(self) -> str:
        c = self.cat
        return f"Mor({c.obj_name(self.dom)} -> {c.obj_name(self.cod)}, {self.vec.tolist()})"


@dataclass(frozen=True, eq=False)
class Triangle:
    """A -f-> B -g-> C -h-> A[1]."""

    f: Mor
    g: Mor
    h: Mor

    @property
    def A(self) -> Obj:
        return self.f.dom

    @property
    def B(self) -> Obj:
        return self.f.cod

    @property
    def C(self) -> Obj:
        return self.g.cod

    def composites_vanish(self) -> bool:
        cat = self.f.cat
        return ((self.g @ self.f).is_zero() and (self.h @ self.g).is_zero()
                and (cat.shift_mor(self.f, 1) @ self.h).is_zero())


def _affine_candidates(p: int, base: np.ndarray, kern: np.ndarray, budget: int,
                       rng: np.random.Generator):
    """Points of base + span(kern): all of them when few, else random samples."""
    k = kern.shape[0]
    yield base
    if k == 0:
        return
    if p ** k <= budget:
        for coeffs in itertools.product(range(p), repeat=k):
            if any(coeffs):
                yield (base + np.asarray(coeffs, dtype=np.int64) @ kern) % p
        return
    for _ in range(budget):
        c = rng.integers(0, p, size=k)
        yield (base + c @ kern) % p


class Category:
    """Generic machinery; subclasses implement the label-level data."""

    p: int
    labels: list          # label objects (hashable), indexed by int
    window_labels: list   # indices quantified over by verification code
    search_budget: int = 4096

    def __init__(self, p: int):
        self.p = p
        self.F = field(p)
        self._lock = threading.RLock()
        self._layouts: dict = {}
        self._tensors: dict = {}
        self._cones: dict = {}
        self._shift_mats: dict = {}

    # -- label level (backend) -----------------------------------------------
    def hom_dim(self, i: int, j: int) -> int:
        raise NotImplementedError

    def _tensor(self, i: int, j: int, k: int) -> np.ndarray:
        """T[a, b, :] = coords of (basis a of Hom(j,k)) o (basis b of Hom(i,j))."""
        raise NotImplementedError

    def shift_label(self, i: int, k: int) -> int:
        raise NotImplementedError

    def _shift_matrix(self, i: int, j: int, k: int) -> np.ndarray:
        raise NotImplementedError

    def residue(self, i: int) -> np.ndarray:
        """Functional on End(i) with phi = residue(phi) id + radical."""
        v = np.zeros(self.hom_dim(i, i), dtype=np.int64)
        v[0] = 1
        return v

    def _cone(self, f: Mor) -> tuple[Obj, Mor, Mor]:
        raise NotImplementedError

    def label_name(self, i: int) -> str:
        return str(self.labels[i])

    def parse_label(self, text: str) -> int:
        raise NotImplementedError

    def in_window(self, i: int) -> bool:
        return True

    # Virtual keys name indecomposables also outside the computed universe,
    # so that shifted subcategory predicates stay exact at the window edge.
    def key(self, i: int):
        return i

    def hom_dim_key(self, k1, k2) -> int:
        """Hom dimension between virtual keys, valid beyond the label universe."""
        return self.hom_dim(k1, k2)

    def key_shift(self, key, k: int):
        return self.shift_label(key, k)

    def all_labels(self) -> list[int]:
        return list(range(len(self.labels)))

    # -- objects -----------------------------------------------------------------
    def obj(self, *names) -> Obj:
        out = []
        for n in names:
            out.append(n if isinstance(n, int) else self.parse_label(n))
        return Obj(tuple(out))

    def obj_name(self, X: Obj) -> str:
        if X.is_zero:
            return "0"
        return "+".join(self.label_name(i) for i in X)

    def shift_obj(self, X: Obj, k: int = 1) -> Obj:
        return Obj(tuple(self.shift_label(i, k) for i in X))

    # -- layouts and tensors ------------------------------------------------------
    def layout(self, dom: Obj, cod: Obj) -> Layout:
        key = (dom.labels, cod.labels)
        lay = self._layouts.get(key)
        if lay is None:
            dims = np.array([[self.hom_dim(c, r) for c in dom] for r in cod],
                            dtype=np.int64).reshape(len(cod), len(dom))
            flat = dims.reshape(-1)
            offs = np.concatenate([[0], np.cumsum(flat)[:-1]]) if flat.size else flat
            lay = Layout(dims, offs.reshape(dims.shape).astype(np.int64), int(flat.sum()))
            with self._lock:
                self._layouts[key] = lay
        return lay

    def tensor(self, i: int, j: int, k: int) -> np.ndarray:
        key = (i, j, k)
        t = self._tensors.get(key)
        if t is None:
            t = np.asarray(self._tensor(i, j, k), dtype=np.int64) % self.p
            with self._lock:
                self._tensors[key] = t
        return t

    def hom_dim_obj(self, X: Obj, Y: Obj) -> int:
        return self.layout(X, Y).total

    # -- morphism constructors -------------------------------------------------------
    def mor(self, dom: Obj, cod: Obj, vec) -> Mor:
        v = np.asarray(vec, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.layout(dom, cod).total:
            raise CompositionError("coordinate vector has the wrong length")
        return Mor(self, dom, cod, v)

    def zero(self, dom: Obj, cod: Obj) -> Mor:
        return Mor(self, dom, cod, np.zeros(self.layout(dom, cod).total, dtype=np.int64))

    def from_blocks(self, dom: Obj, cod: Obj, blocks: dict) -> Mor:
        lay = self.layout(dom, cod)
        v = np.zeros(lay.total, dtype=np.int64)
        for (r, c), b in blocks.items():
            v[lay.sl(r, c)] = (v[lay.sl(r, c)] + np.asarray(b, dtype=np.int64)) % self.p
        return Mor(self, dom, cod, v)

    def identity(self, X: Obj) -> Mor:
        lay = self.layout(X, X)
        v = np.zeros(lay.total, dtype=np.int64)
        for r, i in enumerate(X):
            v[lay.sl(r, r)] = self.identity_coords(i)
        return Mor(self, X, X, v)

    def identity_coords(self, i: int) -> np.ndarray:
        v = np.zeros(self.hom_dim(i, i), dtype=np.int64)
        v[0] = 1
        return v

    def basis(self, X: Obj, Y: Obj) -> list[Mor]:
        n = self.layout(X, Y).total
        eye = np.eye(n, dtype=np.int64)
        return [Mor(self, X, Y, eye[k]) for k in range(n)]

    def label_basis(self, i: int, j: int) -> list[Mor]:
        return self.basis(Obj((i,)), Obj((j,)))

    # -- direct sums ---------------------------------------------------------------------
    def inj(self, parts: list[Obj], k: int) -> Mor:
        total = Obj(tuple(itertools.chain.from_iterable(p.labels for p in parts)))
        off = sum(len(p) for p in parts[:k])
        return self._embed(parts[k], total, off)

    def proj(self, parts: list[Obj], k: int) -> Mor:
        total = Obj(tuple(itertools.chain.from_iterable(p.labels for p in parts)))
        off = sum(len(p) for p in parts[:k])
        X = parts[k]
        blocks = {(r, off + r): self.identity_coords(i) for r, i in enumerate(X)}
        return self.from_blocks(total, X, blocks)

    def _embed(self, X: Obj, total: Obj, off: int) -> Mor:
        blocks = {(off + r, r): self.identity_coords(i) for r, i in enumerate(X)}
        return self.from_blocks(X, total, blocks)

    def hcat(self, fs: list[Mor]) -> Mor:
        """(f_1 ... f_n): ⊕ X_i -> Y."""
        cod = fs[0].cod
        dom = Obj(tuple(itertools.chain.from_iterable(f.dom.labels for f in fs)))
        blocks, off = {}, 0
        for f in fs:
            if f.cod != cod:
                raise CompositionError("hcat needs a common codomain")
            for r in range(len(cod)):
                for c in range(len(f.dom)):
                    blocks[(r, off + c)] = f.block(r, c)
            off += len(f.dom)
        return self.from_blocks(dom, cod, blocks)

    def vcat(self, fs: list[Mor]) -> Mor:
        """(f_1; ...; f_n): X -> ⊕ Y_i."""
        dom = fs[0].dom
        cod = Obj(tuple(itertools.chain.from_iterable(f.cod.labels for f in fs)))
        blocks, off = {}, 0
        for f in fs:
            if f.dom != dom:
                raise CompositionError("vcat needs a common domain")
            for r in range(len(f.cod)):
                for c in range(len(dom)):
                    blocks[(off + r, c)] = f.block(r, c)
            off += len(f.cod)
        return self.from_blocks(dom, cod, blocks)

    def diag(self, fs: list[Mor]) -> Mor:
        dom = Obj(tuple(itertools.chain.from_iterable(f.dom.labels for f in fs)))
        cod = Obj(tuple(itertools.chain.from_iterable(f.cod.labels for f in fs)))
        blocks, ro, co = {}, 0, 0
        for f in fs:
            for r in range(len(f.cod)):
                for c in range(len(f.dom)):
                    blocks[(ro + r, co + c)] = f.block(r, c)
            ro += len(f.cod)
            co += len(f.dom)
        return self.from_blocks(dom, cod, blocks)

    def permutation(self, X: Obj, perm: list[int]) -> Mor:
        """Iso X -> Y with Y[r] = X[perm[r]]."""
        Y = Obj(tuple(X[i] for i in perm))
        blocks = {(r, perm[r]): self.identity_coords(Y[r]) for r in range(len(Y))}
        return self.from_blocks(X, Y, blocks)

    def canonical(self, X: Obj) -> tuple[Obj, Mor]:
        perm = sorted(range(len(X)), key=lambda i: (X[i], i))
        P = self.permutation(X, perm)
        return P.cod, P

    # -- composition --------------------------------------------------------------------
    def compose(self, g: Mor, f: Mor) -> Mor:
        if f.cod != g.dom:
            raise CompositionError(
                f"cannot compose {self.obj_name(f.dom)}->{self.obj_name(f.cod)} "
                f"with {self.obj_name(g.dom)}->{self.obj_name(g.cod)}")
        lf, lg = f.layout, g.layout
        out_lay = self.layout(f.dom, g.cod)
        out = np.zeros(out_lay.total, dtype=np.int64)
        for r, lr in enumerate(g.cod):
            for m, lm in enumerate(f.cod):
                if lg.dims[r, m] == 0:
                    continue
                gb = g.vec[lg.sl(r, m)]
                if not gb.any():
                    continue
                for c, lc in enumerate(f.dom):
                    if out_lay.dims[r, c] == 0 or lf.dims[m, c] == 0:
                        continue
                    fb = f.vec[lf.sl(m, c)]
                    if not fb.any():
                        continue
                    T = self.tensor(lc, lm, lr)
                    out[out_lay.sl(r, c)] += np.einsum("a,b,abc->c", gb, fb, T)
        return Mor(self, f.dom, g.cod, out % self.p)

    def postcomp_matrix(self, u: Mor, D: Obj) -> np.ndarray:
        """Matrix of z |-> u o z from Hom(D, dom u) to Hom(D, cod u)."""
        E, B = u.dom, u.cod
        lin, lout, lu = self.layout(D, E), self.layout(D, B), u.layout
        M = np.zeros((lout.total, lin.total), dtype=np.int64)
        for r, lr in enumerate(B):
            for m, lm in enumerate(E):
                if lu.dims[r, m] == 0:
                    continue
                ub = u.vec[lu.sl(r, m)]
                if not ub.any():
                    continue
                for c, lc in enumerate(D):
                    if lout.dims[r, c] == 0 or lin.dims[m, c] == 0:
                        continue
                    T = self.tensor(lc, lm, lr)  # (d_mr, d_cm, d_cr)
                    M[lout.sl(r, c), lin.sl(m, c)] += np.tensordot(ub, T, axes=(0, 0)).T
        return M % self.p

    def precomp_matrix(self, f: Mor, B: Obj) -> np.ndarray:
        """Matrix of z |-> z o f from Hom(cod f, B) to Hom(dom f, B)."""
        D, E = f.dom, f.cod
        lin, lout, lf = self.layout(E, B), self.layout(D, B), f.layout
        M = np.zeros((lout.total, lin.total), dtype=np.int64)
        for m, lm in enumerate(E):
            for c, lc in enumerate(D):
                if lf.dims[m, c] == 0:
                    continue
                fb = f.vec[lf.sl(m, c)]
                if not fb.any():
                    continue
                for r, lr in enumerate(B):
                    if lout.dims[r, c] == 0 or lin.dims[r, m] == 0:
                        continue
                    T = self.tensor(lc, lm, lr)
                    M[lout.sl(r, c), lin.sl(r, m)] += np.tensordot(fb, T, axes=(0, 1)).T
        return M % self.p

    # -- shift ------------------------------------------------------------------------------
    def shift_matrix(self, i: int, j: int, k: int) -> np.ndarray:
        key = (i, j, k)
        m = self._shift_mats.get(key)
        if m is None:
            m = np.asarray(self._shift_matrix(i, j, k), dtype=np.int64) % self.p
            with self._lock:
                self._shift_mats[key] = m
        return m

    def shift_mor(self, f: Mor, k: int = 1) -> Mor:
        if k == 0:
            return f
        dom, cod = self.shift_obj(f.dom, k), self.shift_obj(f.cod, k)
        lay, lf = self.layout(dom, cod), f.layout
        v = np.zeros(lay.total, dtype=np.int64)
        for r, lr in enumerate(f.cod):
            for c, lc in enumerate(f.dom):
                if lf.dims[r, c]:
                    v[lay.sl(r, c)] = self.shift_matrix(lc, lr, k) @ f.vec[lf.sl(r, c)]
        return Mor(self, dom, cod, v % self.p)

    def shift(self, x, k: int = 1):
        if isinstance(x, Mor):
            return self.shift_mor(x, k)
        return self.shift_obj(x, k)

    # -- isomorphisms -------------------------------------------------------------------------
    def residue_matrices(self, f: Mor) -> dict[int, np.ndarray] | None:
        """Per-label residue matrices, or None if label multisets differ."""
        if sorted(f.dom.labels) != sorted(f.cod.labels):
            return None
        out = {}
        for lab in set(f.dom.labels):
            rows = [r for r, l in enumerate(f.cod) if l == lab]
            cols = [c for c, l in enumerate(f.dom) if l == lab]
            eps = self.residue(lab)
            R = np.array([[int(eps @ f.block(r, c)) for c in cols] for r in rows],
                         dtype=np.int64) % self.p
            out[lab] = R
        return out

    def is_iso(self, f: Mor) -> bool:
        R = self.residue_matrices(f)
        if R is None:
            return False
        return all(self.F.is_invertible(m) for m in R.values())

    def inverse(self, f: Mor) -> Mor:
        if not self.is_iso(f):
            raise ValueError("morphism is not an isomorphism")
        M = self.precomp_matrix(f, f.dom)
        x = self.F.solve(M, self.identity(f.dom).vec)
        if x is None:
            raise InvariantViolation("iso without left inverse")
        return Mor(self, f.cod, f.dom, x)

    def iso_witness(self, X: Obj, Y: Obj) -> tuple[Mor, Mor] | None:
        if sorted(X.labels) != sorted(Y.labels):
            return None
        used = [False] * len(X)
        perm = []
        for l in Y:
            k = next(i for i in range(len(X)) if not used[i] and X[i] == l)
            used[k] = True
            perm.append(k)
        u = self.permutation(X, perm)
        return u, self.inverse(u)

    def has_left_inverse(self, f: Mor) -> Mor | None:
        M = self.precomp_matrix(f, f.dom)
        x = self.F.solve(M, self.identity(f.dom).vec)
        return None if x is None else Mor(self, f.cod, f.dom, x)

    def has_right_inverse(self, g: Mor) -> Mor | None:
        M = self.postcomp_matrix(g, g.cod)
        x = self.F.solve(M, self.identity(g.cod).vec)
        return None if x is None else Mor(self, g.cod, g.dom, x)

    # -- linear solves ----------------------------------------------------------------------------
    def solve_post(self, u: Mor, target: Mor) -> Mor | None:
        """Some z with u o z = target."""
        x = self.F.solve(self.postcomp_matrix(u, target.dom), target.vec)
        return None if x is None else Mor(self, target.dom, u.dom, x)

    def solve_pre(self, f: Mor, target: Mor) -> Mor | None:
        """Some z with z o f = target."""
        x = self.F.solve(self.precomp_matrix(f, target.cod), target.vec)
        return None if x is None else Mor(self, f.cod, target.cod, x)

    def solve_system(self, dom: Obj, cod: Obj, eqs: list[tuple[np.ndarray, np.ndarray]]):
        """Affine solution space of the stacked linear conditions M z = b.

        Returns (particular, kernel rows) or None."""
        n = self.layout(dom, cod).total
        if eqs:
            A = np.vstack([as_rows(m, n) for m, _ in eqs])
            b = np.concatenate([np.asarray(v, dtype=np.int64).reshape(-1) for _, v in eqs])
        else:
            A = np.zeros((0, n), dtype=np.int64)
            b = np.zeros(0, dtype=np.int64)
        x = self.F.solve(A, b)
        if x is None:
            return None
        return x, self.F.kernel(A) if A.shape[0] else np.eye(n, dtype=np.int64)

    def search_iso(self, dom: Obj, cod: Obj, eqs, seed: int = 0) -> Mor | None:
        """An invertible z: dom -> cod satisfying the linear conditions, if found."""
        if sorted(dom.labels) != sorted(cod.labels):
            return None
        sol = self.solve_system(dom, cod, eqs)
        if sol is None:
            return None
        base, kern = sol
        rng = np.random.default_rng(seed)
        for v in _affine_candidates(self.p, base, kern, self.search_budget, rng):
            z = Mor(self, dom, cod, v)
            if self.is_iso(z):
                return z
        return None

    # -- triangles -----------------------------------------------------------------------------------
    def complete_to_triangle(self, f: Mor) -> Triangle:
        key = f.key()
        hit = self._cones.get(key)
        if hit is None:
            C, g, h = self._cone(f)
            C1, P = self.canonical(C)
            if C1 != C:
                g, h = P @ g, h @ self.inverse(P)
            hit = Triangle(f, g, h)
            with self._lock:
                self._cones[key] = hit
        return hit

    def cone(self, f: Mor) -> Obj:
        return self.complete_to_triangle(f).C

    def rotate(self, T: Triangle) -> Triangle:
        return Triangle(T.g, T.h, -self.shift_mor(T.f, 1))

    def rotate_inv(self, T: Triangle) -> Triangle:
        return Triangle(-self.shift_mor(T.h, -1), T.f, T.g)

    def cocone_complete(self, g: Mor) -> Triangle:
        return self.rotate_inv(self.complete_to_triangle(g))

    def is_distinguished(self, T: Triangle, seed: int = 0) -> bool:
        ref = self.complete_to_triangle(T.f)
        if T.A != ref.A or T.B != ref.B:
            return False
        C0, C = ref.C, T.C
        eqs = [(self.postcomp_matrix_fixed_pre(ref.g, C0, C), T.g.vec),
               (self.precomp_matrix_fixed_post(T.h, C0, C), ref.h.vec)]
        return self.search_iso(C0, C, eqs, seed) is not None

    def postcomp_matrix_fixed_pre(self, a: Mor, D: Obj, E: Obj) -> np.ndarray:
        """Matrix of z |-> z o a for z: D -> E (a: X -> D)."""
        return self.precomp_matrix(a, E)

    def precomp_matrix_fixed_post(self, b: Mor, D: Obj, E: Obj) -> np.ndarray:
        """Matrix of z |-> b o z for z: D -> E (b: E -> Y)."""
        return self.postcomp_matrix(b, D)

    def triangle_iso(self, T1: Triangle, T2: Triangle, a: Mor, b: Mor,
                     seed: int = 0) -> Mor | None:
        """Invertible c: T1.C -> T2.C making (a, b, c) a morphism of triangles."""
        eqs = [(self.precomp_matrix(T1.g, T2.C), (T2.g @ b).vec),
               (self.postcomp_matrix(T2.h, T1.C), (self.shift_mor(a, 1) @ T1.h).vec)]
        return self.search_iso(T1.C, T2.C, eqs, seed)

    # -- homotopy pullback / pushout --------------------------------------------------------------------
    def homotopy_pullback(self, g: Mor, c: Mor) -> "Pullback":
        """Weak pullback E of g: B -> C along c: C' -> C with c g' = g b."""
        if g.cod != c.cod:
            raise CompositionError("pullback needs a common codomain")
        gc = self.hcat([g, c])
        T = self.cocone_complete(gc)
        k = T.f
        B, Cp = g.dom, c.dom
        b = -(self.proj([B, Cp], 0) @ k)
        gp = self.proj([B, Cp], 1) @ k
        return Pullback(self, g, c, T, b, gp)

    def homotopy_pushout(self, f: Mor, a: Mor) -> "Pushout":
        """Weak pushout F of f: A -> B along a: A -> A' with b1 f = f1 a."""
        if f.dom != a.dom:
            raise CompositionError("pushout needs a common domain")
        m = self.vcat([f, -a])
        T = self.complete_to_triangle(m)
        B, Ap = f.cod, a.cod
        b1 = T.g @ self.inj([B, Ap], 0)
        f1 = T.g @ self.inj([B, Ap], 1)
        return Pushout(self, f, a, T, b1, f1)

    # -- octahedron ---------------------------------------------------------------------------------------
    def octahedron(self, f: Mor, g: Mor, Tf: Triangle | None = None,
                   Tg: Triangle | None = None, Tgf: Triangle | None = None,
                   seed: int = 0) -> "Octahedron":
        Tf = Tf or self.complete_to_triangle(f)
        Tg = Tg or self.complete_to_triangle(g)
        gf = g @ f
        Tgf = Tgf or self.complete_to_triangle(gf)
        Cp, Bp, Ap = Tf.C, Tgf.C, Tg.C
        f1, f2 = Tf.g, Tf.h
        g1, g2 = Tg.g, Tg.h
        k1, k2 = Tgf.g, Tgf.h
        w = self.shift_mor(f1, 1) @ g2
        # u f1 = k1 g and k2 u = f2
        eqs = [(self.precomp_matrix(f1, Bp), (k1 @ g).vec),
               (self.postcomp_matrix(k2, Cp), f2.vec)]
        sol = self.solve_system(Cp, Bp, eqs)
        if sol is None:
            raise InvariantViolation("octahedron: no fill-in u")
        base, kern = sol
        rng = np.random.default_rng(seed)
        budget = max(1, self.search_budget // 16)
        for uv in _affine_candidates(self.p, base, kern, budget, rng):
            u = Mor(self, Cp, Bp, uv)
            Tu = self.complete_to_triangle(u)
            D = Tu.C
            if sorted(D.labels) != sorted(Ap.labels):
                continue
            v0, w0 = Tu.g, Tu.h
            # phi v0 k1 = g1 ; g2 phi v0 = f[1] k2 ; f1[1] g2 phi = w0
            e1 = (self.precomp_matrix(v0 @ k1, Ap), g1.vec)
            e2 = (self._sandwich(g2, v0, D, Ap), (self.shift_mor(f, 1) @ k2).vec)
            e3 = (self.postcomp_matrix(w, D), w0.vec)
            phi = self.search_iso(D, Ap, [e1, e2, e3], seed)
            if phi is None:
                continue
            v = phi @ v0
            conn = Triangle(u, v, w)
            return Octahedron(Tf, Tg, Tgf, conn)
        raise InvariantViolation("octahedron: no connecting triangle found")

    def _sandwich(self, left: Mor, right: Mor, D: Obj, E: Obj) -> np.ndarray:
        """Matrix of z |-> left o z o right for z: D -> E."""
        n = self.layout(D, E).total
        cols = []
        eye = np.eye(n, dtype=np.int64)
        for k in range(n):
            z = Mor(self, D, E, eye[k])
            cols.append((left @ z @ right).vec)
        out_n = self.layout(right.dom, left.cod).total
        if not cols:
            return np.zeros((out_n, 0), dtype=np.int64)
        return np.array(cols, dtype=np.int64).T.reshape(out_n, n)

    # -- hom exactness ---------------------------------------------------------------------------------------
    def hom_rank(self, f: Mor, W: Obj) -> int:
        return self.F.rank(self.postcomp_matrix(f, W))


@dataclass(frozen=True, eq=False)
class Pullback:
    cat: Category
    g: Mor
    c: Mor
    triangle: Triangle   # E -> B+C' -> C -> E[1]
    b: Mor               # E -> B
    gp: Mor              # E -> C'

    @property
    def E(self) -> Obj:
        return self.b.dom

    def filler(self, y: Mor, x: Mor) -> Mor:
        """z: D -> E with b z = y and g' z = x (requires g y = c x)."""
        cat = self.cat
        target = cat.vcat([-y, x])
        z = cat.solve_post(self.triangle.f, target)
        if z is None:
            raise InvariantViolation("pullback filler does not exist")
        return z


@dataclass(frozen=True, eq=False)
class Pushout:
    cat: Category
    f: Mor
    a: Mor
    triangle: Triangle   # A -> B+A' -> F -> A[1]
    b1: Mor              # B -> F
    f1: Mor              # A' -> F

    @property
    def F(self) -> Obj:
        return self.b1.cod

    def filler(self, u: Mor, v: Mor) -> Mor:
        """z: F -> Z with z b1 = u and z f1 = v (requires u f = v a)."""
        cat = self.cat
        target = cat.hcat([u, v])
        z = cat.solve_pre(self.triangle.g, target)
        if z is None:
            raise InvariantViolation("pushout filler does not exist")
        return z


@dataclass(frozen=True, eq=False)
class Octahedron:
    Tf: Triangle
    Tg: Triangle
    Tgf: Triangle
    connecting: Triangle  # Cone(f) -> Cone(gf) -> Cone(g) -> Cone(f)[1]

    def check(self, f: Mor, cat: Category) -> bool:
        u, v, w = self.connecting.f, self.connecting.g, self.connecting.h
        ok = (u @ self.Tf.g).equals(self.Tgf.g @ self.Tg.f)
        ok &= (self.Tgf.h @ u).equals(self.Tf.h)
        ok &= (v @ self.Tgf.g).equals(self.Tg.g)
        ok &= (self.Tg.h @ v).equals(cat.shift_mor(f, 1) @ self.Tgf.h)
        ok &= w.equals(cat.shift_mor(self.Tf.g, 1) @ self.Tg.h)
        return bool(ok) and self.connecting.composites_vanish()


def subspace_of(cat: Category, X: Obj, Y: Obj, vecs) -> Subspace:
    return Subspace.span(cat.p, vecs, cat.layout(X, Y).total)
