from __future__ import annotations

import re

from extriloc.derived import DerivedDynkin
from extriloc.dot import ar_quiver, irreducible_dim, sn_graph
from extriloc.quiver import Quiver
from extriloc.relative import RelStructure
from extriloc.stable import StableNakayama
from extriloc.subcat import Subcat


def edges(dot: str) -> set[tuple[str, str]]:
    return set(re.findall(r'"([^"]+)" -> "([^"]+)"', dot))


def vertices(dot: str) -> set[str]:
    return set(re.findall(r'^\s*"([^"]+)";', dot, flags=re.M))


def test_a2_window_one_ar_quiver():
    cat = DerivedDynkin(Quiver.dynkin("A2"), 2, 1, margin=1)
    dot = ar_quiver(cat)
    assert len(vertices(dot)) == 9
    chain = ["01[-1]", "11[-1]", "10[-1]", "01", "11", "10", "01[1]", "11[1]", "10[1]"]
    assert edges(dot) == set(zip(chain, chain[1:]))


def test_stable_ar_quiver():
    dot = ar_quiver(StableNakayama(4, 2))
    assert edges(dot) == {("J1", "J2"), ("J2", "J1"), ("J2", "J3"), ("J3", "J2")}


def test_irreducible_maps_in_a3():
    cat = DerivedDynkin(Quiver.dynkin("A3"), 2, 0, margin=1)
    P = {n: cat.parse_label(n) for n in ("001", "011", "111")}
    assert irreducible_dim(cat, P["001"], P["011"]) == 1
    # the composite 001 -> 011 -> 111 is not irreducible
    assert irreducible_dim(cat, P["001"], P["111"]) == 0


def test_sn_graph_for_zero_has_only_identities():
    cat = DerivedDynkin(Quiver.dynkin("A2"), 2, 1, margin=1)
    dot = sn_graph(RelStructure(Subcat.zero(cat)))
    assert all(a == b for a, b in edges(dot))
    assert len(edges(dot)) == 9


def test_sn_graph_contains_projective_cover_for_orbit():
    cat = DerivedDynkin(Quiver.dynkin("A2"), 2, 1, margin=1)
    dot = sn_graph(RelStructure(Subcat.shift_orbit(cat, ["01"])))
    assert ("11", "10") in edges(dot)
    assert ("01", "11") not in edges(dot)
