"""Balanced gluing-parameter relations of a colored tree and the
associated toric cone.

The gluing parameters of a colored tree live on its finite edges; the
balanced condition forces the signed product of parameters along the
path between any two colored vertices to equal one.  Taking exponents,
the relations span an integer lattice inside Z^edges; the local model
of the moduli space is the toric variety of the quotient cone, whose
rays, simpliciality and smoothness this module computes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Disconnected, InvalidGraph, KindMismatch, NoColoredVertex
from .graphs import COLORED_KINDS, Color, Kind, is_stable, require_valid
from .linalg import (
    cone_contains,
    det,
    extremal_rays,
    frac_rank,
    primitive,
    smith_normal_form,
)


@dataclass(frozen=True)
class RelationLattice:
    """Integer relation matrix of the balanced condition.

    One column per finite edge (in the graph's stored edge order), one
    row per colored vertex beyond a fixed base vertex: entry +1 on
    edges pointing toward the root side of the path from the base, -1
    on edges pointing away.
    """

    edges: tuple
    matrix: tuple
    rank: int


@dataclass(frozen=True)
class ConeData:
    ambient_rank: int
    rays: tuple
    simplicial: bool
    smooth: bool
    torsion: tuple = ()


def _anchor(g):
    if g.kind is Kind.COLORED_TREE:
        return g.legs[0]
    return g.root


def relation_lattice(g):
    """Relation rows for the balanced labelling of a colored tree.

    The row for a colored vertex w is chi(base) - chi(w), where chi(v)
    is the indicator vector of the edges on the path from v to the
    root side; the common tail of the two paths cancels, leaving +1 on
    the ascending half and -1 on the descending half.
    """
    require_valid(g)
    if g.kind not in COLORED_KINDS:
        raise KindMismatch("relation lattices live on colored kinds")
    if not g.is_connected():
        raise Disconnected("relation lattice needs a connected tree")
    if not is_stable(g):
        raise InvalidGraph("relation lattice is defined for stable types")
    colored = [v for v in g.vertex_ids if g.color[v] is Color.COLORED]
    if not colored:
        raise NoColoredVertex("no colored vertex")

    anchor = _anchor(g)
    nedges = len(g.edges)
    edge_at = {}
    for i, (a, b) in enumerate(g.edges):
        edge_at[(a, b)] = i
        edge_at[(b, a)] = i

    def chi(v):
        vec = [0] * nedges
        path = g.path_vertices(v, anchor)
        for a, b in zip(path, path[1:]):
            vec[edge_at[(a, b)]] = 1
        return vec

    base = colored[0]
    base_chi = chi(base)
    rows = []
    for w in colored[1:]:
        w_chi = chi(w)
        rows.append(tuple(x - y for x, y in zip(base_chi, w_chi)))
    matrix = tuple(rows)
    rank = frac_rank(matrix) if matrix else 0
    if rank != len(colored) - 1:
        raise InvalidGraph("relation rank must be #colored - 1")
    return RelationLattice(tuple(range(nedges)), matrix, rank)


def classify_cone(g):
    """Quotient-lattice cone of the gluing-parameter space.

    The quotient of Z^edges by the saturation of the relation lattice
    is computed through a Smith normal form; the images of the standard
    basis vectors generate the cone, and the extremal ones among them
    are reported.  Simplicial means #rays equals the rank; smooth means
    the rays form a lattice basis.
    """
    rel = relation_lattice(g)
    nedges = len(rel.edges)
    ambient = nedges - rel.rank
    if not rel.matrix:
        rays = tuple(
            tuple(1 if j == i else 0 for j in range(nedges))
            for i in range(nedges))
        return ConeData(ambient, rays, True, True)
    _, d, v = smith_normal_form(rel.matrix)
    s = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i] != 0)
    if s != rel.rank:
        raise InvalidGraph("Smith rank disagrees with relation rank")
    torsion = tuple(d[i][i] for i in range(s) if abs(d[i][i]) != 1)
    images = [tuple(v[i][s:]) for i in range(nedges)]
    if any(not any(img) for img in images):
        raise InvalidGraph("a gluing parameter died in the quotient")
    rays = tuple(extremal_rays([primitive(img) for img in images]))
    simplicial = len(rays) == ambient
    smooth = simplicial and abs(det(list(rays))) == 1
    return ConeData(ambient, rays, simplicial, smooth, torsion)


def cone_rays(g):
    """Extremal rays of the gluing-parameter cone."""
    return classify_cone(g).rays


def cone_summary(g, space=None):
    """Rank, rays and flags, plus the codimension cross-check when a
    space is supplied."""
    data = classify_cone(g)
    out = {
        "ambient_rank": data.ambient_rank,
        "rays": [list(r) for r in data.rays],
        "ray_count": len(data.rays),
        "simplicial": data.simplicial,
        "smooth": data.smooth,
    }
    if data.torsion:
        out["torsion"] = list(data.torsion)
    if space is not None:
        from .strata import stratum_codimension

        out["codimension"] = stratum_codimension(g, space)
    return out


def in_cone(target, g):
    """Membership of an integer vector in the gluing cone (diagnostic)."""
    data = classify_cone(g)
    return cone_contains(target, data.rays)
