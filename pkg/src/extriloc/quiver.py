"""Representations of Dynkin quivers over F_p.

Hom spaces are solved as commutation systems, Ext^1 comes from minimal
projective presentations, the AR translate uses the Nakayama functor on a
presentation, and the indecomposables are knitted from the projectives by
iterating the inverse translate.  Decomposition into indecomposables pairs
Hom(X, M) against Hom(M, X) through the residue of End(X); see
``decompose``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np

from .field import CoordSolver, field

_DYNKIN_KINDS = ("A", "D", "E")


class DomainError(ValueError):
    """An operation was applied outside its domain (e.g. tau of a projective)."""


def _dynkin_edges(kind: str, n: int) -> list[tuple[int, int]]:
    if kind == "A" and n >= 1:
        return [(i, i + 1) for i in range(n - 1)]
    if kind == "D" and n >= 4:
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if kind == "E" and n in (6, 7, 8):
        return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    raise ValueError(f"not a Dynkin type: {kind}{n}")


@dataclass(frozen=True)
class Quiver:
    """A finite quiver on vertices 0..n-1 (printed 1-based)."""

    n: int
    arrows: tuple[tuple[int, int], ...]
    kind: str = ""

    @staticmethod
    def dynkin(name: str, arrows=None) -> "Quiver":
        """Dynkin quiver such as ``"A3"``; arrows are 1-based (src, tgt) pairs.

        The default orientation points every edge from the smaller to the
        larger vertex, so A_2 is 1 -> 2.
        """
        name = name.strip().upper().replace("_", "")
        kind, rank = name[0], int(name[1:])
        if kind not in _DYNKIN_KINDS:
            raise ValueError(f"unknown Dynkin letter {kind!r}")
        edges = _dynkin_edges(kind, rank)
        if arrows is None:
            arr = tuple(edges)
        else:
            arr = tuple((int(s) - 1, int(t) - 1) for s, t in arrows)
            if sorted(tuple(sorted(a)) for a in arr) != sorted(edges):
                raise ValueError(f"arrows do not orient the {name} diagram")
        return Quiver(rank, arr, f"{kind}{rank}")

    @staticmethod
    def loop() -> "Quiver":
        """One vertex with one loop; modules are vector spaces with an operator."""
        return Quiver(1, ((0, 0),), "loop")

    @cached_property
    def op(self) -> "Quiver":
        kind = self.kind[:-2] if self.kind.endswith("op") else self.kind + "op"
        return Quiver(self.n, tuple((t, s) for s, t in self.arrows), kind)

    @cached_property
    def is_acyclic(self) -> bool:
        indeg = [0] * self.n
        for _, t in self.arrows:
            indeg[t] += 1
        stack = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        stack.append(t)
        return seen == self.n

    @cached_property
    def paths(self) -> dict[tuple[int, int], list[tuple[int, ...]]]:
        """paths[(u, v)] lists the paths u -> v as tuples of arrow indices."""
        if not self.is_acyclic:
            raise DomainError("path enumeration needs an acyclic quiver")
        out: dict[tuple[int, int], list[tuple[int, ...]]] = {
            (u, v): [] for u in range(self.n) for v in range(self.n)}
        for u in range(self.n):
            stack = [(u, ())]
            while stack:
                v, path = stack.pop()
                out[(u, v)].append(path)
                for k, (s, t) in enumerate(self.arrows):
                    if s == v:
                        stack.append((t, path + (k,)))
        for key in out:
            out[key].sort(key=lambda q: (len(q), q))
        return out

    def vertex_name(self, v: int) -> str:
        return str(v + 1)


@dataclass(frozen=True, eq=False)
class Rep:
    """A representation: one vector space per vertex, one matrix per arrow."""

    quiver: Quiver
    p: int
    dims: tuple[int, ...]
    mats: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.dims) != self.quiver.n or len(self.mats) != len(self.quiver.arrows):
            raise ValueError("representation data does not match the quiver")
        for (s, t), m in zip(self.quiver.arrows, self.mats):
            if m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(f"arrow {s}->{t} has shape {m.shape}")

    @staticmethod
    def make(quiver: Quiver, p: int, dims, mats) -> "Rep":
        dims = tuple(int(d) for d in dims)
        ms = []
        for (s, t), m in zip(quiver.arrows, mats):
            a = np.asarray(m, dtype=np.int64).reshape(dims[t], dims[s]) % p
            ms.append(a)
        return Rep(quiver, p, dims, tuple(ms))

    @staticmethod
    def zero(quiver: Quiver, p: int) -> "Rep":
        return Rep.make(quiver, p, [0] * quiver.n,
                        [np.zeros((0, 0))] * len(quiver.arrows))

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return self.dims

    def path_matrix(self, start: int, path: tuple[int, ...]) -> np.ndarray:
        m = np.eye(self.dims[start], dtype=np.int64)
        for k in path:
            m = (self.mats[k] @ m) % self.p
        return m

    def identity(self) -> "RepMap":
        return RepMap(self, self, tuple(np.eye(d, dtype=np.int64) for d in self.dims))

    def __repr__(self) -> str:
        return f"Rep({self.quiver.kind}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class RepMap:
    """A module map: one matrix per vertex, commuting with the arrows."""

    src: Rep
    tgt: Rep
    mats: tuple[np.ndarray, ...]

    @staticmethod
    def zero(src: Rep, tgt: Rep) -> "RepMap":
        return RepMap(src, tgt, tuple(np.zeros((b, a), dtype=np.int64)
                                      for a, b in zip(src.dims, tgt.dims)))

    @property
    def p(self) -> int:
        return self.src.p

    def __matmul__(self, other: "RepMap") -> "RepMap":
        if other.tgt is not self.src and other.tgt.dims != self.src.dims:
            raise ValueError("composition mismatch")
        p = self.p
        return RepMap(other.src, self.tgt,
                      tuple((a @ b) % p for a, b in zip(self.mats, other.mats)))

    def __add__(self, other: "RepMap") -> "RepMap":
        return RepMap(self.src, self.tgt,
                      tuple((a + b) % self.p for a, b in zip(self.mats, other.mats)))

    def __sub__(self, other: "RepMap") -> "RepMap":
        return RepMap(self.src, self.tgt,
                      tuple((a - b) % self.p for a, b in zip(self.mats, other.mats)))

    def scale(self, c: int) -> "RepMap":
        return RepMap(self.src, self.tgt, tuple((a * c) % self.p for a in self.mats))

    def vec(self) -> np.ndarray:
        if not self.mats:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([m.reshape(-1) for m in self.mats])

    def is_zero(self) -> bool:
        return not any(m.any() for m in self.mats)

    def equals(self, other: "RepMap") -> bool:
        return all(np.array_equal(a % self.p, b % self.p)
                   for a, b in zip(self.mats, other.mats))

    def commutes(self) -> bool:
        p = self.p
        for k, (s, t) in enumerate(self.src.quiver.arrows):
            lhs = (self.tgt.mats[k] @ self.mats[s]) % p
            rhs = (self.mats[t] @ self.src.mats[k]) % p
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_iso(self) -> bool:
        F = field(self.p)
        return all(m.shape[0] == m.shape[1] and F.rank(m) == m.shape[0]
                   for m in self.mats)

    def inverse(self) -> "RepMap":
        F = field(self.p)
        return RepMap(self.tgt, self.src, tuple(F.inverse(m) for m in self.mats))


# -- Hom ------------------------------------------------------------------

def _hom_system(M: Rep, N: Rep) -> np.ndarray:
    Q = M.quiver
    offs = np.cumsum([0] + [N.dims[v] * M.dims[v] for v in range(Q.n)])
    blocks = []
    for k, (s, t) in enumerate(Q.arrows):
        rows = N.dims[t] * M.dims[s]
        if rows == 0:
            continue
        eq = np.zeros((rows, offs[-1]), dtype=np.int64)
        # N_a phi_s - phi_t M_a
        eq[:, offs[s]:offs[s + 1]] += np.kron(N.mats[k], np.eye(M.dims[s], dtype=np.int64))
        eq[:, offs[t]:offs[t + 1]] -= np.kron(np.eye(N.dims[t], dtype=np.int64), M.mats[k].T)
        blocks.append(eq % M.p)
    if not blocks:
        return np.zeros((0, offs[-1]), dtype=np.int64)
    return np.vstack(blocks)


def _unflatten(M: Rep, N: Rep, v: np.ndarray) -> RepMap:
    mats, o = [], 0
    for a, b in zip(M.dims, N.dims):
        mats.append(v[o:o + a * b].reshape(b, a).copy())
        o += a * b
    return RepMap(M, N, tuple(mats))


def hom_basis(M: Rep, N: Rep) -> list[RepMap]:
    """Basis of Hom(M, N) as module maps."""
    if M.quiver != N.quiver:
        raise ValueError("representations of different quivers")
    ker = field(M.p).kernel(_hom_system(M, N))
    return [_unflatten(M, N, row) for row in ker]


def hom_dim(M: Rep, N: Rep) -> int:
    sysm = _hom_system(M, N)
    return sysm.shape[1] - field(M.p).rank(sysm)


# -- sums, subs, quotients --------------------------------------------------

@dataclass(frozen=True, eq=False)
class DirectSum:
    """A direct sum with its structure maps."""

    parts: tuple[Rep, ...]
    rep: Rep
    offsets: tuple[tuple[int, ...], ...]  # offsets[i][v]

    def inj(self, i: int) -> RepMap:
        part = self.parts[i]
        mats = []
        for v in range(self.rep.quiver.n):
            m = np.zeros((self.rep.dims[v], part.dims[v]), dtype=np.int64)
            o = self.offsets[i][v]
            m[o:o + part.dims[v]] = np.eye(part.dims[v], dtype=np.int64)
            mats.append(m)
        return RepMap(part, self.rep, tuple(mats))

    def proj(self, i: int) -> RepMap:
        inj = self.inj(i)
        return RepMap(self.rep, self.parts[i], tuple(m.T.copy() for m in inj.mats))

    def block(self, i: int, v: int) -> slice:
        o = self.offsets[i][v]
        return slice(o, o + self.parts[i].dims[v])


def direct_sum(parts, quiver: Quiver | None = None, p: int | None = None) -> DirectSum:
    parts = tuple(parts)
    if not parts:
        if quiver is None or p is None:
            raise ValueError("empty direct sum needs quiver and p")
        z = Rep.zero(quiver, p)
        return DirectSum((), z, ())
    Q, p = parts[0].quiver, parts[0].p
    dims = [sum(r.dims[v] for r in parts) for v in range(Q.n)]
    offsets = []
    run = [0] * Q.n
    for r in parts:
        offsets.append(tuple(run))
        run = [run[v] + r.dims[v] for v in range(Q.n)]
    mats = []
    for k, (s, t) in enumerate(Q.arrows):
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        for i, r in enumerate(parts):
            m[offsets[i][t]:offsets[i][t] + r.dims[t],
              offsets[i][s]:offsets[i][s] + r.dims[s]] = r.mats[k]
        mats.append(m)
    return DirectSum(parts, Rep(Q, p, tuple(dims), tuple(mats)), tuple(offsets))


def _cols(b, rows: int) -> np.ndarray:
    b = np.asarray(b, dtype=np.int64)
    if b.size == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    return b.reshape(rows, -1)


def subrep(M: Rep, bases) -> tuple[Rep, RepMap]:
    """Subrepresentation spanned by column bases (one matrix per vertex)."""
    F = field(M.p)
    bases = [_cols(b, M.dims[v]) % M.p for v, b in enumerate(bases)]
    mats = []
    for k, (s, t) in enumerate(M.quiver.arrows):
        img = (M.mats[k] @ bases[s]) % M.p
        if bases[t].shape[1] == 0:
            if img.any():
                raise ValueError("subspaces are not arrow-stable")
            mats.append(np.zeros((0, bases[s].shape[1]), dtype=np.int64))
            continue
        x = F.solve_matrix(bases[t], img)
        if x is None:
            raise ValueError("subspaces are not arrow-stable")
        mats.append(x)
    K = Rep(M.quiver, M.p, tuple(b.shape[1] for b in bases), tuple(mats))
    return K, RepMap(K, M, tuple(bases))


def kernel(f: RepMap) -> tuple[Rep, RepMap]:
    F = field(f.p)
    bases = [F.kernel(m).T.copy() if m.shape[1] else np.zeros((0, 0), dtype=np.int64)
             for m in f.mats]
    return subrep(f.src, bases)


def image(f: RepMap) -> tuple[Rep, RepMap]:
    F = field(f.p)
    bases = []
    for v, m in enumerate(f.mats):
        if m.size == 0:
            bases.append(np.zeros((f.tgt.dims[v], 0), dtype=np.int64))
            continue
        r, piv = F.rref(m.T)
        bases.append(r[:len(piv)].T.copy())
    return subrep(f.tgt, bases)


@dataclass(frozen=True, eq=False)
class Quotient:
    rep: Rep
    proj: RepMap
    section: tuple[np.ndarray, ...]  # per-vertex linear section of proj (not a module map)


def quotient(M: Rep, bases) -> Quotient:
    """M modulo the arrow-stable subspaces with the given column bases."""
    F, p = field(M.p), M.p
    projs, secs = [], []
    for v in range(M.quiver.n):
        b = _cols(bases[v], M.dims[v]) % p
        comp = F.complement_basis(b.T, M.dims[v])  # rows: standard vectors
        full = np.concatenate([comp.T, b], axis=1)  # M_v x M_v invertible
        inv = F.inverse(full) if full.size else np.zeros((0, 0), dtype=np.int64)
        k = comp.shape[0]
        projs.append(inv[:k].copy())
        secs.append(comp.T.copy())
    dims = tuple(pr.shape[0] for pr in projs)
    mats = []
    for k, (s, t) in enumerate(M.quiver.arrows):
        mats.append((projs[t] @ M.mats[k] @ secs[s]) % p)
    Qr = Rep(M.quiver, p, dims, tuple(mats))
    return Quotient(Qr, RepMap(M, Qr, tuple(projs)), tuple(secs))


def cokernel(f: RepMap) -> Quotient:
    F = field(f.p)
    bases = []
    for v, m in enumerate(f.mats):
        if m.size == 0:
            bases.append(np.zeros((f.tgt.dims[v], 0), dtype=np.int64))
        else:
            r, piv = F.rref(m.T)
            bases.append(r[:len(piv)].T.copy())
    return quotient(f.tgt, bases)


# -- projectives, injectives, simples --------------------------------------

@lru_cache(maxsize=None)
def projective(quiver: Quiver, v: int, p: int) -> Rep:
    """P_v: basis at u = paths v -> u."""
    P = quiver.paths
    dims = [len(P[(v, u)]) for u in range(quiver.n)]
    mats = []
    for k, (s, t) in enumerate(quiver.arrows):
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        idx_t = {q: i for i, q in enumerate(P[(v, t)])}
        for i, q in enumerate(P[(v, s)]):
            m[idx_t[q + (k,)], i] = 1
        mats.append(m)
    return Rep(quiver, p, tuple(dims), tuple(mats))


@lru_cache(maxsize=None)
def injective(quiver: Quiver, v: int, p: int) -> Rep:
    """I_v: basis at u = duals of paths u -> v."""
    P = quiver.paths
    dims = [len(P[(u, v)]) for u in range(quiver.n)]
    mats = []
    for k, (s, t) in enumerate(quiver.arrows):
        # dual of paths(t->v) -> paths(s->v), q |-> a q
        idx_s = {q: i for i, q in enumerate(P[(s, v)])}
        m = np.zeros((dims[s], dims[t]), dtype=np.int64)
        for j, q in enumerate(P[(t, v)]):
            m[idx_s[(k,) + q], j] = 1
        mats.append(m.T.copy())
    return Rep(quiver, p, tuple(dims), tuple(mats))


def simple(quiver: Quiver, v: int, p: int) -> Rep:
    dims = [1 if u == v else 0 for u in range(quiver.n)]
    return Rep.make(quiver, p, dims,
                    [np.zeros((dims[t], dims[s])) for s, t in quiver.arrows])


def proj_map(M: Rep, v: int, m) -> RepMap:
    """The map P_v -> M sending the trivial path at v to m in M_v."""
    Q = M.quiver
    P = projective(Q, v, M.p)
    m = np.asarray(m, dtype=np.int64).reshape(M.dims[v]) % M.p
    mats = []
    for u in range(Q.n):
        cols = [(M.path_matrix(v, q) @ m) % M.p for q in Q.paths[(v, u)]]
        mats.append(np.array(cols, dtype=np.int64).T.reshape(M.dims[u], len(cols)))
    return RepMap(P, M, tuple(mats))


@dataclass(frozen=True, eq=False)
class ProjSum:
    """A standard projective ⊕_i P_{verts[i]} with known generators."""

    verts: tuple[int, ...]
    ds: DirectSum

    @property
    def rep(self) -> Rep:
        return self.ds.rep

    def gen_index(self, i: int) -> int:
        """Coordinate of generator i inside rep at vertex verts[i]."""
        return self.ds.offsets[i][self.verts[i]]

    def from_images(self, M: Rep, images) -> RepMap:
        """Module map sending generator i to images[i] in M_{verts[i]}."""
        mats = [np.zeros((M.dims[u], self.rep.dims[u]), dtype=np.int64)
                for u in range(M.quiver.n)]
        for i, v in enumerate(self.verts):
            pm = proj_map(M, v, images[i])
            for u in range(M.quiver.n):
                mats[u][:, self.ds.block(i, u)] = pm.mats[u]
        return RepMap(self.rep, M, tuple(mats))

    def eval_gens(self, f: RepMap) -> np.ndarray:
        """Concatenated images of the generators under f."""
        parts = [f.mats[v][:, self.gen_index(i)] for i, v in enumerate(self.verts)]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts)


def proj_sum(quiver: Quiver, p: int, verts) -> ProjSum:
    verts = tuple(int(v) for v in verts)
    return ProjSum(verts, direct_sum([projective(quiver, v, p) for v in verts], quiver, p))


def top_generators(M: Rep) -> list[tuple[int, np.ndarray]]:
    """(vertex, vector) pairs whose classes form a basis of the top of M."""
    F = field(M.p)
    out = []
    for v in range(M.quiver.n):
        if M.dims[v] == 0:
            continue
        imgs = [M.mats[k] for k, (s, t) in enumerate(M.quiver.arrows)
                if t == v and M.dims[s]]
        rad = np.concatenate(imgs, axis=1).T if imgs else np.zeros((0, M.dims[v]), dtype=np.int64)
        for row in F.complement_basis(rad, M.dims[v]):
            out.append((v, row))
    return out


def projective_cover(M: Rep) -> tuple[ProjSum, RepMap]:
    gens = top_generators(M)
    P = proj_sum(M.quiver, M.p, [v for v, _ in gens])
    return P, P.from_images(M, [m for _, m in gens])


@dataclass(frozen=True, eq=False)
class Presentation:
    """0 -> P1 --d--> P0 --pi--> M -> 0 with P0, P1 standard projective sums."""

    M: Rep
    P1: ProjSum
    P0: ProjSum
    d: RepMap
    pi: RepMap


def presentation(M: Rep, extra: tuple[int, ...] = ()) -> Presentation:
    """Projective presentation; minimal unless ``extra`` adds P_v summands to P0
    (mapped to zero), which yields a second, non-minimal presentation."""
    gens = top_generators(M)
    verts = [v for v, _ in gens] + list(extra)
    imgs = [m for _, m in gens] + [np.zeros(M.dims[v], dtype=np.int64) for v in extra]
    P0 = proj_sum(M.quiver, M.p, verts)
    pi = P0.from_images(M, imgs)
    K, inc = kernel(pi)
    P1, cov = projective_cover(K)
    if cov.src.dims != K.dims:
        raise DomainError("kernel of the cover is not projective (quiver not hereditary?)")
    return Presentation(M, P1, P0, inc @ cov, pi)


@lru_cache(maxsize=4096)
def _pres_cached(M: Rep) -> Presentation:
    return presentation(M)


# -- Ext^1 -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtSpace:
    """Ext^1(M, N) = coker(Hom(P0, N) -> Hom(P1, N)).

    Elements of Hom(P1, N) are encoded by the images of the generators of P1.
    """

    pres: Presentation
    N: Rep
    reps: np.ndarray  # rows: generator-image vectors of representatives
    solver: CoordSolver

    @property
    def dim(self) -> int:
        return int(self.reps.shape[0])

    def rep_map(self, i: int) -> RepMap:
        return self.from_vector(self.reps[i])

    def from_vector(self, vec) -> RepMap:
        P1 = self.pres.P1
        imgs, o = [], 0
        for v in P1.verts:
            imgs.append(np.asarray(vec[o:o + self.N.dims[v]]))
            o += self.N.dims[v]
        return P1.from_images(self.N, imgs)

    def coords(self, eps: RepMap) -> np.ndarray:
        """Ext coordinates of the class of eps: P1 -> N."""
        return self.solver.coords(self.pres.P1.eval_gens(eps))


def ext1(M: Rep, N: Rep, pres: Presentation | None = None) -> ExtSpace:
    pres = pres or _pres_cached(M)
    F = field(M.p)
    P0, P1 = pres.P0, pres.P1
    amb = sum(N.dims[v] for v in P1.verts)
    images = []
    for j, w in enumerate(P0.verts):
        for k in range(N.dims[w]):
            e = [np.zeros(N.dims[u], dtype=np.int64) for u in P0.verts]
            e[j][k] = 1
            psi = P0.from_images(N, e)
            images.append(P1.eval_gens(psi @ pres.d))
    img = np.array(images, dtype=np.int64).reshape(len(images), amb)
    reps = F.complement_basis(img, amb)
    solver = CoordSolver(M.p, reps, amb, null=img)
    return ExtSpace(pres, N, reps, solver)


def ext1_dim(M: Rep, N: Rep, pres: Presentation | None = None) -> int:
    return ext1(M, N, pres).dim


# -- duality, Nakayama, AR translate ------------------------------------------

def dual(M: Rep) -> Rep:
    """D M = Hom_k(M, k) as a representation of the opposite quiver."""
    return Rep(M.quiver.op, M.p, M.dims, tuple(m.T.copy() for m in M.mats))


def _nu_path(quiver: Quiver, p: int, u: int, w: int, q: tuple[int, ...]) -> RepMap:
    """nu of the path map P_u -> P_w given by q: w -> u, i.e. I_u -> I_w."""
    P = quiver.paths
    Iu, Iw = injective(quiver, u, p), injective(quiver, w, p)
    mats = []
    for x in range(quiver.n):
        idx_u = {s: i for i, s in enumerate(P[(x, u)])}
        a = np.zeros((Iu.dims[x], Iw.dims[x]), dtype=np.int64)
        for j, s in enumerate(P[(x, w)]):
            a[idx_u[s + q], j] = 1
        mats.append(a.T.copy())
    return RepMap(Iu, Iw, tuple(mats))


def nakayama_map(P1: ProjSum, P0: ProjSum, d: RepMap) -> RepMap:
    """nu(d): nu P1 -> nu P0 for a map between standard projective sums."""
    Q, p = P0.rep.quiver, P0.rep.p
    I1 = direct_sum([injective(Q, v, p) for v in P1.verts], Q, p)
    I0 = direct_sum([injective(Q, v, p) for v in P0.verts], Q, p)
    mats = [np.zeros((I0.rep.dims[x], I1.rep.dims[x]), dtype=np.int64) for x in range(Q.n)]
    for i, u in enumerate(P1.verts):
        g = d.mats[u][:, P1.gen_index(i)]
        for j, w in enumerate(P0.verts):
            coeffs = g[P0.ds.block(j, u)]
            for q, c in zip(Q.paths[(w, u)], coeffs):
                if c % p == 0:
                    continue
                nq = _nu_path(Q, p, u, w, q)
                for x in range(Q.n):
                    mats[x][I0.block(j, x), I1.block(i, x)] += c * nq.mats[x]
    return RepMap(I1.rep, I0.rep, tuple(m % p for m in mats))


def rep_nakayama(P: Rep) -> Rep:
    """nu(P) for projective P."""
    pres = presentation(P)
    if pres.P1.verts:
        raise DomainError("rep_nakayama expects a projective representation")
    Q, p = P.quiver, P.p
    return direct_sum([injective(Q, v, p) for v in pres.P0.verts], Q, p).rep


def _tau_raw(M: Rep) -> Rep:
    pres = presentation(M)
    nd = nakayama_map(pres.P1, pres.P0, pres.d)
    return kernel(nd)[0]


def rep_tau(M: Rep) -> Rep:
    """Auslander-Reiten translate via tau M = ker(nu d) for a minimal presentation."""
    labels = decompose(M, indecomposables(M.quiver, M.p)).labels
    projs = projective_labels(M.quiver, M.p)
    if any(l in projs for l in labels):
        raise DomainError("tau is undefined on representations with projective summands")
    return _tau_raw(M)


def rep_tau_inv(M: Rep) -> Rep:
    return dual(_tau_raw(dual(M)))


# -- decomposition --------------------------------------------------------------

def _residue_vertex(X: Rep) -> int:
    for v, d in enumerate(X.dims):
        if d:
            return v
    raise ValueError("zero representation has no residue")


@dataclass(frozen=True, eq=False)
class Decomposition:
    """M ≅ ⊕ models[labels[i]] witnessed by iso: sum -> M and its inverse."""

    labels: tuple[int, ...]          # one entry per summand, grouped
    ds: DirectSum
    iso: RepMap
    iso_inv: RepMap

    def multiplicities(self) -> list[tuple[int, int]]:
        out: dict[int, int] = {}
        for l in self.labels:
            out[l] = out.get(l, 0) + 1
        return sorted(out.items())


def decompose(M: Rep, models: list[Rep]) -> Decomposition:
    """Split M into copies of the given indecomposable models.

    For each model X the residue pairing P[i, j] = eps(v_i u_j), u_j a basis
    of Hom(X, M), v_i of Hom(M, X) and eps the residue End(X) -> k (entry
    [0, 0] at the first nonzero vertex, valid for bricks and for the uniserial
    models used here), has rank equal to the multiplicity of X in M.  Columns
    achieving the rank give maps whose sum is split mono modulo the radical;
    together they form an isomorphism, which is checked vertexwise.
    """
    F = field(M.p)
    labels, parts, cols = [], [], []
    if M.total_dim == 0:
        ds = direct_sum([], M.quiver, M.p)
        return Decomposition((), ds, RepMap.zero(ds.rep, M), RepMap.zero(M, ds.rep))
    for idx, X in enumerate(models):
        v0 = _residue_vertex(X)
        if M.dims[v0] == 0:
            continue
        us = hom_basis(X, M)
        if not us:
            continue
        vs = hom_basis(M, X)
        if not vs:
            continue
        U0 = np.array([u.mats[v0][:, 0] for u in us], dtype=np.int64).T  # M_v0 x |us|
        V0 = np.array([v.mats[v0][0, :] for v in vs], dtype=np.int64)    # |vs| x M_v0
        pairing = (V0 @ U0) % M.p
        _, piv = F.rref(pairing)
        for c in piv:
            labels.append(idx)
            parts.append(X)
            cols.append(us[c])
    ds = direct_sum(parts, M.quiver, M.p)
    if ds.rep.dims != M.dims:
        raise ValueError("decomposition incomplete: model list misses a summand")
    mats = [np.zeros((M.dims[v], M.dims[v]), dtype=np.int64) for v in range(M.quiver.n)]
    for i, u in enumerate(cols):
        for v in range(M.quiver.n):
            mats[v][:, ds.block(i, v)] = u.mats[v]
    iso = RepMap(ds.rep, M, tuple(mats))
    if not iso.is_iso():
        raise ValueError("residue pairing did not produce an isomorphism")
    return Decomposition(tuple(labels), ds, iso, iso.inverse())


# -- knitting ---------------------------------------------------------------------

def dimvec_label(dims) -> str:
    if all(d < 10 for d in dims):
        return "".join(str(d) for d in dims)
    return "-".join(str(d) for d in dims)


@lru_cache(maxsize=None)
def _knit(quiver: Quiver, p: int) -> tuple[Rep, ...]:
    if quiver.kind[:1] not in _DYNKIN_KINDS or quiver.kind.endswith("op"):
        raise DomainError("knitting is implemented for Dynkin quivers")
    found: list[Rep] = []
    seen: set[tuple[int, ...]] = set()
    layer = [projective(quiver, v, p) for v in range(quiver.n)]
    while layer:
        nxt = []
        for X in layer:
            if X.total_dim == 0 or X.dims in seen:
                continue
            seen.add(X.dims)
            found.append(X)
            nxt.append(rep_tau_inv(X))
        layer = nxt
    return tuple(found)


def indecomposables(quiver: Quiver, p: int) -> list[Rep]:
    """One representative per iso class, knitted from the projectives."""
    return list(_knit(quiver, p))


def rep_indecomposables(quiver: Quiver, p: int) -> list[Rep]:
    return indecomposables(quiver, p)


def projective_labels(quiver: Quiver, p: int) -> set[int]:
    mods = indecomposables(quiver, p)
    pd = {projective(quiver, v, p).dims for v in range(quiver.n)}
    return {i for i, X in enumerate(mods) if X.dims in pd}


def rep_decompose(M: Rep) -> tuple[list[tuple[str, int]], Decomposition]:
    """Labels (dimension vectors) with multiplicities plus the iso witness."""
    mods = indecomposables(M.quiver, M.p)
    dec = decompose(M, mods)
    return [(dimvec_label(mods[i].dims), m) for i, m in dec.multiplicities()], dec


def rep_hom_basis(M: Rep, N: Rep) -> list[RepMap]:
    return hom_basis(M, N)


def rep_ext1_basis(M: Rep, N: Rep) -> ExtSpace:
    return ext1(M, N)
