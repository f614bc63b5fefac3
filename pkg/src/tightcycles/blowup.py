"""r-blow-ups of coloured k-graphs and the matching correspondence.

The r-blow-up replaces vertex x by the part V_x = {x*r, ..., x*r + r - 1}
and each edge by all r^k transversals of its parts, inheriting the edge's
colour.  The projection pi sends a blown edge to its base edge by integer
division; pi induces a colour-preserving bijection between monochromatic
tight components of the blow-up and of the base, which `project_component`
computes and verifies.

Matchings correspond both ways:

  * downward, a 1/r'-fractional matching phi_* on the blow-up projects to
    the 1/(r r')-fractional matching phi(e) = (1/r) * sum over pi^{-1}(e),
    with weight(phi) = weight(phi_*) / r;
  * upward, a 1/(r r')-fractional matching is split into integer units of
    size 1/r' and the units of each edge are dealt onto transversals by a
    per-part round-robin.  A part receiving T <= r * r' units spreads them
    over its r clone offsets in at most ceil(T/r) <= r' layers, so no blown
    vertex exceeds capacity; the construction is deterministic and checked
    at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Mapping

from .errors import CapExceeded, InternalConsistencyError, InvalidInput
from .hypergraph import (
    DEFAULT_EDGE_CAP,
    ColoredHypergraph,
    DensityReport,
    Edge,
    Hypergraph,
    is_dense,
)
from .matching import FractionalMatching, is_r_fractional, weight
from .structure import mono_components


@dataclass(frozen=True)
class Blowup:
    base: ColoredHypergraph
    r: int
    blown: ColoredHypergraph

    @property
    def k(self) -> int:
        return self.base.k

    def part_of(self, v: int) -> int:
        return v // self.r

    def part(self, x: int) -> tuple[int, ...]:
        return tuple(x * self.r + j for j in range(self.r))

    def project(self, e_star: Edge) -> Edge:
        return tuple(sorted(v // self.r for v in e_star))

    def clone(self, e: Edge, offsets) -> Edge:
        if isinstance(offsets, int):
            offsets = [offsets] * len(e)
        return tuple(sorted(x * self.r + j for x, j in zip(e, offsets)))

    @cached_property
    def fibers(self) -> dict[Edge, tuple[Edge, ...]]:
        """pi^{-1}: base edge -> its transversal clones, in canonical order."""
        out: dict[Edge, list[Edge]] = {e: [] for e in self.base.base.edges}
        for e_star in self.blown.base.edges:
            out[self.project(e_star)].append(e_star)
        return {e: tuple(v) for e, v in out.items()}


def build(G: ColoredHypergraph, r: int, cap: int = DEFAULT_EDGE_CAP) -> Blowup:
    """Materialise the r-blow-up; vertex x becomes part {x*r .. x*r+r-1}."""
    if r < 1:
        raise InvalidInput(f"replication factor must be >= 1, got {r}")
    k = G.k
    total = (r**k) * len(G.base.edges)
    if total > cap:
        raise CapExceeded(f"blow-up would have {total} edges, cap is {cap}")
    edges: list[Edge] = []
    colors: list[str] = []
    for e, c in zip(G.base.edges, G.colors):
        for offsets in product(range(r), repeat=k):
            edges.append(tuple(sorted(x * r + j for x, j in zip(e, offsets))))
            colors.append(c)
    order = sorted(range(len(edges)), key=lambda i: edges[i])
    blown = ColoredHypergraph(
        Hypergraph(k, G.n * r, tuple(edges[i] for i in order)),
        tuple(colors[i] for i in order),
    )
    return Blowup(G, r, blown)


def project_component(B: Blowup) -> dict[tuple[str, int], tuple[str, int]]:
    """The induced map on monochromatic tight components, verified to be a
    colour-preserving bijection (anything else is an internal defect)."""
    red_b, blue_b = mono_components(B.blown)
    red_g, blue_g = mono_components(B.base)
    mapping: dict[tuple[str, int], tuple[str, int]] = {}
    for color, idx_star, idx_base in (("R", red_b, red_g), ("B", blue_b, blue_g)):
        hit: dict[int, int] = {}
        for cid, comp in enumerate(idx_star.components):
            images = {idx_base.comp_of[B.project(e)] for e in comp}
            if len(images) != 1:
                raise InternalConsistencyError(
                    f"component ({color},{cid}) projects onto {len(images)} components",
                    code="pi-mtc-not-bijective",
                )
            image = images.pop()
            if image in hit.values() or {B.project(e) for e in comp} != set(
                idx_base.components[image]
            ):
                raise InternalConsistencyError(
                    f"projection of ({color},{cid}) is not a bijection onto ({color},{image})",
                    code="pi-mtc-not-bijective",
                )
            hit[cid] = image
            mapping[(color, cid)] = (color, image)
        if len(hit) != len(idx_base.components):
            raise InternalConsistencyError(
                f"{color} projection misses base components", code="pi-mtc-not-bijective"
            )
    return mapping


def fractional_from_blowup_matching(
    B: Blowup, phi_star: FractionalMatching, rprime: int
) -> FractionalMatching:
    """Project a 1/r'-fractional matching on the blow-up down to the base:
    phi(e) = (1/r) * sum of phi_* over the fiber of e."""
    if not is_r_fractional(phi_star, rprime):
        raise InvalidInput(f"matching is not 1/{rprime}-fractional")
    weights: dict[Edge, Fraction] = {}
    for e_star, w in phi_star.weights.items():
        if e_star not in B.blown.base.edge_set:
            raise InvalidInput(f"{e_star} is not an edge of the blow-up")
        e = B.project(e_star)
        weights[e] = weights.get(e, Fraction(0)) + w
    weights = {e: w / B.r for e, w in weights.items() if w}
    return FractionalMatching.over_graph(B.base.base, weights)


def allocate_transversal_units(
    base_weights: Mapping[Edge, Fraction], factor: int, rprime: int
) -> dict[Edge, int]:
    """Deal the units of a 1/(factor*r')-fractional matching onto blown
    transversals (vertex x*factor+offset), round-robin per part.

    Returns blown edge -> unit count; each unit stands for weight 1/r'.
    The per-part cursors guarantee that no blown vertex collects more than
    r' units, hence load <= 1 after scaling.
    """
    cursors: dict[int, int] = {}
    units: dict[Edge, int] = {}
    for e in sorted(base_weights):
        m = base_weights[e] * factor * rprime
        if m.denominator != 1:
            raise InvalidInput(f"weight {base_weights[e]} of {e} is not 1/{factor * rprime}-fractional")
        m = int(m)
        if m == 0:
            continue
        starts = {x: cursors.get(x, 0) for x in e}
        for u in range(m):
            clone = tuple(sorted(x * factor + (starts[x] + u) % factor for x in e))
            units[clone] = units.get(clone, 0) + 1
        for x in e:
            cursors[x] = (starts[x] + m) % factor
    return units


def blowup_matching_from_fractional(
    B: Blowup, phi: FractionalMatching, rprime: int
) -> FractionalMatching:
    """Lift a 1/(r*r')-fractional matching on the base to a 1/r'-fractional
    matching on the blow-up with weight multiplied by r, supported inside
    the fibers of the support."""
    if not is_r_fractional(phi, B.r * rprime):
        raise InvalidInput(f"matching is not 1/{B.r * rprime}-fractional")
    for e in phi.weights:
        if e not in B.base.base.edge_set:
            raise InvalidInput(f"{e} is not an edge of the base")
    units = allocate_transversal_units(phi.weights, B.r, rprime)
    weights = {e_star: Fraction(c, rprime) for e_star, c in units.items()}
    phi_star = FractionalMatching.over_graph(B.blown.base, weights)
    if weight(phi_star) != B.r * weight(phi):
        raise InternalConsistencyError("lifted weight is not r times the base weight")
    return phi_star


def density_of_blowup(B: Blowup, eps: Fraction, alpha: Fraction) -> DensityReport:
    """Density report of the blow-up at the doubled slack (1-2eps, 2alpha)."""
    eps, alpha = Fraction(eps), Fraction(alpha)
    mu = max(Fraction(0), 1 - 2 * eps)
    return is_dense(B.blown.base, mu, min(2 * alpha, Fraction(1)))
