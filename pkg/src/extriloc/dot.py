"""Graphviz exports: the windowed AR quiver and the S_N graph."""

from __future__ import annotations

import numpy as np

from .category import Category, Obj
from .field import Subspace
from .relative import RelStructure


def _q(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def _radical_basis(cat: Category, i: int, j: int) -> np.ndarray:
    """Rows spanning rad(i, j); for i = j the basis vector of the identity is dropped."""
    n = cat.hom_dim(i, j)
    eye = np.eye(n, dtype=np.int64)
    return eye[1:] if i == j else eye


def irreducible_dim(cat: Category, i: int, j: int) -> int:
    """dim rad(i, j) / rad^2(i, j), with rad^2 spanned by composites through the universe."""
    if i == j:
        return 0
    n = cat.hom_dim(i, j)
    if n == 0:
        return 0
    rows = []
    for k in cat.all_labels():
        R1, R2 = _radical_basis(cat, i, k), _radical_basis(cat, k, j)
        if R1.shape[0] == 0 or R2.shape[0] == 0:
            continue
        T = cat.tensor(i, k, j)             # (d_kj, d_ik, d_ij)
        rows.append(np.einsum("ab,cd,bde->ace", R2, R1, T).reshape(-1, n))
    rad2 = Subspace.span(cat.p, np.vstack(rows), n).dim if rows else 0
    return n - rad2


def ar_quiver(cat: Category) -> str:
    labs = list(cat.window_labels)
    lines = ["digraph ar_quiver {"]
    lines += [f"  {_q(cat.label_name(i))};" for i in labs]
    for i in labs:
        for j in labs:
            for _ in range(irreducible_dim(cat, i, j)):
                lines.append(f"  {_q(cat.label_name(i))} -> {_q(cat.label_name(j))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def sn_graph(rs: RelStructure) -> str:
    """Edges i -> j for basis morphisms between window indecomposables lying in S_N."""
    cat = rs.cat
    labs = list(cat.window_labels)
    lines = ["digraph sn_graph {"]
    lines += [f"  {_q(cat.label_name(i))};" for i in labs]
    for i in labs:
        for j in labs:
            for k, b in enumerate(cat.label_basis(i, j)):
                if rs.in_SN(b):
                    lines.append(f"  {_q(cat.label_name(i))} -> {_q(cat.label_name(j))} "
                                 f"[label=\"e{k}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
