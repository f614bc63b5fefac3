"""Integral matchings, fractional matchings and their exact algebra.

A fractional matching assigns each edge of a host graph a weight in [0, 1]
so that every vertex carries total load at most 1; it is 1/r-fractional
when every weight is a multiple of 1/r.  The host may be a proper
sub-hypergraph (explicit vertex and edge domain), which is what the
induced fractional matching of a matching M lives on: the subgraph spanned
by V(M).  Sums require vertex-disjoint hosts; completions extend the
domain by zero weights.

All weights are `fractions.Fraction`; feasibility checks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from random import Random
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BudgetExhausted, InvalidInput
from .hypergraph import Edge, Hypergraph, ColoredHypergraph, as_edge
from .lp import LpResult, solve_packing_lp
from .structure import ComponentIndex, mono_components

CompRef = tuple[str, int]


@dataclass(frozen=True)
class Matching:
    """Pairwise disjoint edges of a host graph."""

    host: Hypergraph
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for e in self.edges:
            if e not in self.host.edge_set:
                raise InvalidInput(f"matching edge {e} is not an edge of the host")
            if not seen.isdisjoint(e):
                raise InvalidInput(f"matching edge {e} overlaps another matching edge")
            seen.update(e)
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @cached_property
    def covered(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class FractionalMatching:
    """Edge weights over an explicit host domain with unit vertex capacity."""

    k: int
    domain_vertices: frozenset[int]
    domain_edges: frozenset[Edge]
    weights: dict[Edge, Fraction] = field(hash=False)

    def __post_init__(self):
        clean = {}
        for e, w in self.weights.items():
            w = Fraction(w)
            if w < 0 or w > 1:
                raise InvalidInput(f"weight {w} of {e} outside [0, 1]")
            if e not in self.domain_edges:
                raise InvalidInput(f"weighted edge {e} outside the host domain")
            if w != 0:
                clean[e] = w
        loads: dict[int, Fraction] = {}
        for e, w in clean.items():
            for v in e:
                loads[v] = loads.get(v, Fraction(0)) + w
                if loads[v] > 1:
                    raise InvalidInput(f"vertex {v} carries load {loads[v]} > 1")
        object.__setattr__(self, "weights", clean)

    @staticmethod
    def over_graph(H: Hypergraph, weights: Mapping[Edge, Fraction]) -> "FractionalMatching":
        return FractionalMatching(H.k, frozenset(range(H.n)), H.edge_set, dict(weights))

    def weight_of(self, e: Iterable[int]) -> Fraction:
        return self.weights.get(as_edge(e), Fraction(0))

    @property
    def support(self) -> frozenset[Edge]:
        return frozenset(self.weights)

    def to_obj(self) -> dict:
        return {
            "weights": [
                {"edge": list(e), "num": w.numerator, "den": w.denominator}
                for e, w in sorted(self.weights.items())
            ]
        }


def weight(phi: FractionalMatching) -> Fraction:
    return sum(phi.weights.values(), Fraction(0))


def is_r_fractional(phi: FractionalMatching, r: int) -> bool:
    """True iff every weight is a multiple of 1/r."""
    if r < 1:
        raise InvalidInput(f"fractionality denominator must be >= 1, got {r}")
    return all((w * r).denominator == 1 for w in phi.weights.values())


def induced_fractional(M: Matching) -> FractionalMatching:
    """Weight 1 on M, over the host restricted to the covered vertices."""
    covered = M.covered
    domain = frozenset(e for e in M.host.edges if covered.issuperset(e))
    return FractionalMatching(
        M.host.k, covered, domain, {e: Fraction(1) for e in M.edges}
    )


def completion(phi: FractionalMatching, H: Hypergraph) -> FractionalMatching:
    """Same weights with the domain extended by zeros to all of H."""
    if not phi.domain_vertices.issubset(range(H.n)) or not phi.domain_edges.issubset(H.edge_set):
        raise InvalidInput("completion target is not a supergraph of the host")
    return FractionalMatching.over_graph(H, phi.weights)


def sum_disjoint(phi1: FractionalMatching, phi2: FractionalMatching) -> FractionalMatching:
    """Juxtaposition of matchings on vertex-disjoint hosts."""
    if phi1.k != phi2.k:
        raise InvalidInput("summands have different uniformities")
    if phi1.domain_vertices & phi2.domain_vertices:
        raise InvalidInput("hosts are not vertex-disjoint", code="hosts-not-disjoint")
    return FractionalMatching(
        phi1.k,
        phi1.domain_vertices | phi2.domain_vertices,
        phi1.domain_edges | phi2.domain_edges,
        {**phi1.weights, **phi2.weights},
    )


def maximal_matching_greedy(
    H: Hypergraph, within: Optional[Sequence[Edge]] = None, seed: int = 0
) -> Matching:
    """Inclusion-maximal matching, edges scanned in seeded random order.

    ``within`` restricts the scan to a subset of edges (e.g. one tight
    component).  Deterministic for a fixed seed.
    """
    pool = list(within) if within is not None else list(H.edges)
    for e in pool:
        if e not in H.edge_set:
            raise InvalidInput(f"edge {e} not in the host")
    Random(seed).shuffle(pool)
    chosen: list[Edge] = []
    covered: set[int] = set()
    for e in pool:
        if covered.isdisjoint(e):
            chosen.append(e)
            covered.update(e)
    return Matching(H, tuple(chosen))


def maximum_matching(H: Hypergraph, node_cap: int = 10**7) -> Matching:
    """Maximum-cardinality matching by branch and bound.

    Lower bound: canonical greedy.  Upper bounds: the fractional packing
    LP at the root and a free-vertex count at inner nodes.  Branches fix
    the smallest coverable vertex: either one of its edges is used or the
    vertex stays uncovered.
    """
    k = H.k
    greedy = maximal_matching_greedy(H, seed=0)
    best = list(greedy.edges)
    if H.edges:
        lp = solve_packing_lp([e for e in H.edges], H.n)
        root_ub = int(lp.value)  # floor: cardinality is integral
        if len(best) >= root_ub:
            return Matching(H, tuple(best))
    nodes = 0

    def dfs(chosen: list[Edge], candidates: list[Edge]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_cap:
            raise BudgetExhausted(f"maximum matching search exceeded {node_cap} nodes")
        if len(chosen) > len(best):
            best = list(chosen)
        if not candidates:
            return
        verts = set()
        for e in candidates:
            verts.update(e)
        if len(chosen) + len(verts) // k <= len(best):
            return
        v = min(verts)
        for e in [c for c in candidates if v in c]:
            es = set(e)
            dfs(chosen + [e], [f for f in candidates if es.isdisjoint(f)])
        dfs(chosen, [f for f in candidates if v not in f])

    dfs([], list(H.edges))
    return Matching(H, tuple(best))


def component_edges(
    G: ColoredHypergraph,
    refs: Iterable[CompRef],
    indexes: Optional[tuple[ComponentIndex, ComponentIndex]] = None,
) -> tuple[Edge, ...]:
    """Union of the edge lists of the named monochromatic components."""
    red_idx, blue_idx = indexes if indexes is not None else mono_components(G)
    chosen: list[Edge] = []
    for color, cid in refs:
        idx = red_idx if color == "R" else blue_idx
        if not 0 <= cid < len(idx):
            raise InvalidInput(f"no component ({color}, {cid})")
        chosen.extend(idx.components[cid])
    return tuple(sorted(set(chosen)))


def max_fractional_confined(
    G: ColoredHypergraph,
    refs: Iterable[CompRef],
    indexes: Optional[tuple[ComponentIndex, ComponentIndex]] = None,
) -> tuple[FractionalMatching, LpResult]:
    """LP-optimal fractional matching supported on the named components.

    Solved by exact rational simplex; the optimum is certified through the
    dual solution before being returned.
    """
    refs = list(refs)
    if not refs:
        raise InvalidInput("need at least one component")
    edges = component_edges(G, refs, indexes)
    lp = solve_packing_lp(edges, G.n)
    phi = FractionalMatching.over_graph(
        G.base, {e: x for e, x in zip(edges, lp.solution) if x != 0}
    )
    return phi, lp
