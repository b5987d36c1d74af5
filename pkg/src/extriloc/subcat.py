"""Subcategories given by label predicates, the ideal [N] and approximations.

A subcategory is additive, closed under summands and isomorphisms because
membership is decided label by label.  Predicates act on virtual keys, so the
shifted subcategory N[k] is again exact on every label of the universe.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field as dc_field

import numpy as np

from .category import Category, Mor, Obj, Triangle, WindowExceeded
from .field import Subspace


@dataclass(frozen=True)
class Approximation:
    u: Mor                  # N0 -> X (right) or X -> N0 (left)
    approximate: bool       # support truncated by the universe edge


@dataclass(frozen=True)
class ExtensionVerdict:
    closed: bool
    counterexample: dict | None
    instances: int
    mode: str               # "exhaustive" or "sampled"
    window: int | None


@dataclass(frozen=True)
class ConeWitness:
    target: Obj
    status: str             # "found", "refuted" or "budget"
    triangle: Triangle | None = None


class Subcat:
    """A subcategory N described by a predicate on indecomposable labels."""

    def __init__(self, cat: Category, kind: str, data, shift: int = 0):
        self.cat = cat
        self.kind = kind
        self.data = data
        self.shift = shift
        self._lock = threading.RLock()
        self._ideal: dict = {}

    # -- constructors ---------------------------------------------------------------
    @staticmethod
    def explicit(cat: Category, labels) -> "Subcat":
        keys = frozenset(cat.key(_label(cat, l)) for l in labels)
        return Subcat(cat, "explicit", keys)

    @staticmethod
    def zero(cat: Category) -> "Subcat":
        return Subcat(cat, "explicit", frozenset())

    @staticmethod
    def everything(cat: Category) -> "Subcat":
        return Subcat(cat, "all", None)

    @staticmethod
    def shift_orbit(cat: Category, generators) -> "Subcat":
        gens = [_label(cat, g) for g in generators]
        if hasattr(cat, "mods"):
            return Subcat(cat, "shift_orbit", frozenset(cat.module(i) for i in gens))
        keys = set()
        for i in gens:
            keys.add(i)
            keys.add(cat.shift_label(i, 1))
        return Subcat(cat, "shift_orbit", frozenset(keys))

    @staticmethod
    def homology_vanishing(cat: Category, degrees=None, except_=None) -> "Subcat":
        """Labels (M, d) with d in ``degrees``, or with d not in ``except_``."""
        if not hasattr(cat, "mods"):
            raise ValueError("homology_vanishing needs the derived backend")
        if (degrees is None) == (except_ is None):
            raise ValueError("give exactly one of degrees / except_")
        if degrees is not None:
            return Subcat(cat, "homology_vanishing", ("in", frozenset(int(d) for d in degrees)))
        return Subcat(cat, "homology_vanishing", ("except", frozenset(int(d) for d in except_)))

    @staticmethod
    def degree_range(cat: Category, lo: int | None = None, hi: int | None = None) -> "Subcat":
        """Labels (M, d) with lo <= d <= hi; either bound may be open."""
        if not hasattr(cat, "mods"):
            raise ValueError("degree_range needs the derived backend")
        return Subcat(cat, "degree_range", (lo, hi))

    @staticmethod
    def right_perp(cat: Category, labels) -> "Subcat":
        """T^perp = {X : Hom(T, X) = 0} for T the sum of the given labels."""
        keys = frozenset(cat.key(_label(cat, l)) for l in labels)
        return Subcat(cat, "right_perp", keys)

    @staticmethod
    def from_spec(cat: Category, spec: dict) -> "Subcat":
        kind = spec.get("kind")
        if kind == "explicit":
            return Subcat.explicit(cat, spec.get("labels", []))
        if kind == "shift_orbit":
            return Subcat.shift_orbit(cat, spec.get("labels", spec.get("modules", [])))
        if kind == "homology_vanishing":
            deg = spec.get("degrees")
            if isinstance(deg, dict):
                return Subcat.homology_vanishing(cat, except_=deg.get("except", []))
            return Subcat.homology_vanishing(cat, degrees=deg)
        if kind == "degree_range":
            return Subcat.degree_range(cat, spec.get("lo"), spec.get("hi"))
        if kind == "right_perp":
            return Subcat.right_perp(cat, spec.get("labels", []))
        if kind == "all":
            return Subcat.everything(cat)
        if kind == "zero":
            return Subcat.zero(cat)
        raise ValueError(f"unknown subcategory kind {kind!r}")

    def shifted(self, k: int) -> "Subcat":
        """N[k] = {X[k] : X in N}."""
        return Subcat(self.cat, self.kind, self.data, self.shift + k)

    # -- membership -------------------------------------------------------------------
    def contains_key(self, key) -> bool:
        cat = self.cat
        if self.shift:
            key = cat.key_shift(key, -self.shift)
        if self.kind == "all":
            return True
        if self.kind == "explicit":
            return key in self.data
        if self.kind == "shift_orbit":
            return (key[0] if isinstance(key, tuple) else key) in self.data
        if self.kind == "homology_vanishing":
            mode, ds = self.data
            return (key[1] in ds) if mode == "in" else (key[1] not in ds)
        if self.kind == "degree_range":
            lo, hi = self.data
            return (lo is None or key[1] >= lo) and (hi is None or key[1] <= hi)
        if self.kind == "right_perp":
            return all(cat.hom_dim_key(t, key) == 0 for t in self.data)
        raise ValueError(self.kind)

    def contains_label(self, i: int) -> bool:
        return self.contains_key(self.cat.key(i))

    def contains(self, X: Obj) -> bool:
        return all(self.contains_label(i) for i in X)

    def labels(self, window: bool = True) -> list[int]:
        cat = self.cat
        pool = cat.window_labels if window else cat.all_labels()
        return [i for i in pool if self.contains_label(i)]

    def is_zero(self) -> bool:
        return not self.labels(window=False)

    def describe(self) -> dict:
        cat = self.cat
        d: dict = {"kind": self.kind}
        if self.kind == "explicit":
            d["labels"] = sorted(cat.label_name(i) for i in cat.all_labels()
                                 if cat.key(i) in self.data)
        elif self.kind == "shift_orbit":
            if hasattr(cat, "mods"):
                d["modules"] = sorted(cat._names[m] for m in self.data)
            else:
                d["labels"] = sorted(cat.label_name(i) for i in self.data)
        elif self.kind == "homology_vanishing":
            mode, ds = self.data
            d["degrees"] = sorted(ds) if mode == "in" else {"except": sorted(ds)}
        elif self.kind == "degree_range":
            d["lo"], d["hi"] = self.data
        elif self.kind == "right_perp":
            d["labels"] = sorted(cat.label_name(cat.index(*k)) if hasattr(cat, "mods")
                                 else cat.label_name(k) for k in self.data)
        if self.shift:
            d["shift"] = self.shift
        return d

    def __repr__(self) -> str:
        return f"Subcat({self.describe()})"

    # -- ideal [N] ------------------------------------------------------------------------
    def ideal_label_basis(self, i: int, j: int) -> np.ndarray:
        """Rows spanning [N](i, j) inside Hom(i, j)."""
        key = (i, j)
        hit = self._ideal.get(key)
        if hit is not None:
            return hit
        cat = self.cat
        dij = cat.hom_dim(i, j)
        vecs = []
        if dij:
            for L in cat.all_labels():
                if not self.contains_label(L):
                    continue
                if cat.hom_dim(i, L) == 0 or cat.hom_dim(L, j) == 0:
                    continue
                T = cat.tensor(i, L, j)
                vecs.append(T.reshape(-1, dij))
        if vecs:
            basis = Subspace.span(cat.p, np.vstack(vecs), dij).basis
        else:
            basis = np.zeros((0, dij), dtype=np.int64)
        with self._lock:
            self._ideal[key] = basis
        return basis

    def ideal(self, X: Obj, Y: Obj) -> Subspace:
        cat = self.cat
        lay = cat.layout(X, Y)
        rows = []
        for r, j in enumerate(Y):
            for c, i in enumerate(X):
                B = self.ideal_label_basis(i, j)
                if B.shape[0] == 0:
                    continue
                full = np.zeros((B.shape[0], lay.total), dtype=np.int64)
                full[:, lay.sl(r, c)] = B
                rows.append(full)
        if not rows:
            return Subspace.zero(cat.p, lay.total)
        return Subspace(cat.p, lay.total, _rref_rows(cat, np.vstack(rows), lay.total))

    def in_ideal(self, f: Mor) -> bool:
        if f.is_zero():
            return True
        cat = self.cat
        lay = f.layout
        for r, j in enumerate(f.cod):
            for c, i in enumerate(f.dom):
                blk = f.vec[lay.sl(r, c)]
                if not blk.any():
                    continue
                B = self.ideal_label_basis(i, j)
                if B.shape[0] == 0:
                    return False
                if cat.F.rank(np.vstack([B, blk])) != B.shape[0]:
                    return False
        return True

    def congruent(self, f: Mor, g: Mor) -> bool:
        return self.in_ideal(f - g)

    def factors_through(self, f: Mor) -> tuple[bool, tuple | None]:
        """Whether f factors through add N, with a witness (N0, h, g), f = g h."""
        cat = self.cat
        if f.is_zero():
            return True, (Obj(()), cat.zero(f.dom, Obj(())), cat.zero(Obj(()), f.cod))
        if not self.in_ideal(f):
            return False, None
        if self.contains(f.dom):
            return True, (f.dom, cat.identity(f.dom), f)
        labs = [L for L in self.labels(window=False)
                if cat.hom_dim_obj(f.dom, Obj((L,))) and cat.hom_dim_obj(Obj((L,)), f.cod)]
        u = self._evaluation(labs, f.cod)
        h = cat.solve_post(u, f)
        if h is None:
            raise AssertionError("ideal membership without factorization")
        return True, (u.dom, h, u)

    # -- approximations ----------------------------------------------------------------------
    def _evaluation(self, labs: list[int], X: Obj) -> Mor:
        cat = self.cat
        parts = []
        for L in labs:
            for b in cat.basis(Obj((L,)), X):
                parts.append(b)
        if not parts:
            return cat.zero(Obj(()), X)
        return cat.hcat(parts)

    def _coevaluation(self, labs: list[int], X: Obj) -> Mor:
        cat = self.cat
        parts = []
        for L in labs:
            for b in cat.basis(X, Obj((L,))):
                parts.append(b)
        if not parts:
            return cat.zero(X, Obj(()))
        return cat.vcat(parts)

    def right_approximation(self, X: Obj) -> Approximation:
        cat = self.cat
        labs = [L for L in self.labels(window=False) if cat.hom_dim_obj(Obj((L,)), X)]
        return Approximation(self._evaluation(labs, X), _truncated(cat, X, -1))

    def left_approximation(self, X: Obj) -> Approximation:
        cat = self.cat
        labs = [L for L in self.labels(window=False) if cat.hom_dim_obj(X, Obj((L,)))]
        return Approximation(self._coevaluation(labs, X), _truncated(cat, X, 1))


def _label(cat: Category, l) -> int:
    return l if isinstance(l, (int, np.integer)) else cat.parse_label(l)


def _rref_rows(cat: Category, rows: np.ndarray, n: int) -> np.ndarray:
    return Subspace.span(cat.p, rows, n).basis


def _truncated(cat: Category, X: Obj, direction: int) -> bool:
    W = getattr(cat, "W", None)
    if W is None:
        return False
    return any(abs(cat.degree(i) + direction) > W for i in X)


def enumerate_space(p: int, dim: int, budget: int = 10 ** 4, samples: int = 200,
                    seed: int = 0):
    """All vectors of F_p^dim when p^dim <= budget, else seeded random samples.

    Returns (iterator, mode)."""
    if p ** dim <= budget:
        it = (np.asarray(c, dtype=np.int64) for c in itertools.product(range(p), repeat=dim))
        return it, "exhaustive"
    rng = np.random.default_rng(seed)
    return (rng.integers(0, p, size=dim) for _ in range(samples)), "sampled"


def extension_middle(cat: Category, h: Mor) -> Obj:
    """Middle term E of the triangle A -> E -> C -h-> A[1]."""
    return cat.shift_obj(cat.cone(h), -1)


def is_extension_closed(N: Subcat, seed: int = 0, budget: int = 10 ** 4,
                        samples: int = 200, max_summands: int = 1) -> ExtensionVerdict:
    """Middle terms of extensions between objects of N (window) stay in N.

    Ends are sums of at most ``max_summands`` indecomposables; the default
    tests pairs of indecomposables only."""
    cat = N.cat
    labs = N.labels()
    objs = [Obj(c) for k in range(1, max_summands + 1)
            for c in itertools.combinations_with_replacement(labs, k)]
    count, mode = 0, "exhaustive"
    for X1 in objs:
        A1 = cat.shift_obj(X1, 1)
        for C in objs:
            dim = cat.hom_dim_obj(C, A1)
            if dim == 0:
                continue
            it, m = enumerate_space(cat.p, dim, budget, samples, seed)
            if m == "sampled":
                mode = "sampled"
            for v in it:
                if not v.any():
                    continue
                h = cat.mor(C, A1, v)
                E = extension_middle(cat, h)
                count += 1
                if not N.contains(E):
                    ce = {"N1": cat.obj_name(X1), "N2": cat.obj_name(C),
                          "h": v.tolist(), "E": cat.obj_name(E.sorted())}
                    return ExtensionVerdict(False, ce, count, mode, getattr(cat, "w", None))
    return ExtensionVerdict(True, None, count, mode, getattr(cat, "w", None))


def is_shift_stable(N: Subcat) -> bool:
    return all(N.contains_key(N.cat.key_shift(N.cat.key(i), k))
               for i in N.labels() for k in (1, -1))


def is_thick_tri(N: Subcat, seed: int = 0) -> bool:
    return is_shift_stable(N) and is_extension_closed(N, seed=seed).closed


def cone_generation_witness(N: Subcat, X: Obj, budget: int = 256, seed: int = 0) -> ConeWitness:
    """Search a triangle N' -> N'' -> X -> N'[1] with N', N'' in N."""
    cat = N.cat
    if N.contains(X):
        T = cat.cocone_complete(cat.identity(X))
        return ConeWitness(X, "found", T)
    labs = [L for L in N.labels(window=False) if cat.hom_dim_obj(Obj((L,)), X)]
    if not labs:
        try:
            Xm = cat.shift_obj(X, -1)
        except WindowExceeded:
            return ConeWitness(X, "budget")
        if N.contains(Xm):
            T = cat.cocone_complete(cat.zero(Obj(()), X))
            return ConeWitness(X, "found", T)
        return ConeWitness(X, "refuted")
    tried = 0
    rng = np.random.default_rng(seed)
    candidates = [N._evaluation(labs, X)]
    for k in range(1, len(labs) + 1):
        for sub in itertools.combinations(labs, k):
            candidates.append(N._evaluation(list(sub), X))
    for g in candidates:
        if tried >= budget:
            return ConeWitness(X, "budget")
        tried += 1
        try:
            T = cat.cocone_complete(g)
        except WindowExceeded:
            continue
        if N.contains(T.A):
            return ConeWitness(X, "found", T)
    while tried < budget:
        sub = [L for L in labs if rng.random() < 0.5] or [labs[0]]
        N0 = Obj(tuple(sub))
        g = cat.mor(N0, X, rng.integers(0, cat.p, cat.hom_dim_obj(N0, X)))
        tried += 1
        try:
            T = cat.cocone_complete(g)
        except WindowExceeded:
            continue
        if N.contains(T.A):
            return ConeWitness(X, "found", T)
    return ConeWitness(X, "budget")


def is_cone_generating(N: Subcat, targets=None, budget: int = 256,
                       seed: int = 0) -> list[ConeWitness]:
    cat = N.cat
    if targets is None:
        targets = [Obj((i,)) for i in cat.window_labels]
    return [cone_generation_witness(N, X, budget, seed) for X in targets]
