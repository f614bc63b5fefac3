"""Exact k-uniform hypergraphs and red/blue edge colourings.

Conventions used throughout the package:

  * Vertices of a graph on n vertices are the dense integers 0..n-1.
  * An edge is a sorted tuple of k distinct vertex ids; the edge list of a
    graph is sorted lexicographically, so iteration order is deterministic.
  * All density and weight arithmetic is exact (`fractions.Fraction`);
    floating point never decides a predicate.
  * Values are immutable after construction.  Operations build new values.

For a vertex subset S with 1 <= |S| <= k-1 the degree d(S) counts the edges
containing S.  A graph is (mu, alpha)-dense when, for every level
i in 1..k-1, every i-set S either satisfies d(S) >= mu * C(n-i, k-i) or
d(S) = 0, and at most alpha * C(n, i) sets are zeros.  The completion
count C(n-i, k-i) is the degree of an i-set in the complete graph, so the
complete graph is (1, 0)-dense with equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from random import Random
from typing import Iterable, Mapping

from .errors import CapExceeded, FormatError, InvalidInput

Edge = tuple[int, ...]

RED = "R"
BLUE = "B"

#: Largest edge set any generator or blow-up will materialise.
DEFAULT_EDGE_CAP = 1 << 22


def as_edge(vertices: Iterable[int]) -> Edge:
    return tuple(sorted(vertices))


@dataclass(frozen=True)
class Hypergraph:
    """A k-graph: uniformity k, vertex count n, canonical sorted edge set."""

    k: int
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput(f"uniformity must be >= 1, got {self.k}", code="bad-uniformity")
        if self.n < 0:
            raise InvalidInput(f"vertex count must be >= 0, got {self.n}")
        seen = set()
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise InvalidInput(f"edge {e} is not a {self.k}-set", code="bad-arity")
            if e[0] < 0 or e[-1] >= self.n:
                raise InvalidInput(f"edge {e} has a vertex outside 0..{self.n - 1}", code="bad-vertex")
            if tuple(e) != tuple(sorted(e)):
                raise InvalidInput(f"edge {e} is not sorted", code="bad-edge-order")
            if e in seen:
                raise InvalidInput(f"duplicate edge {e}", code="duplicate-edge")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @staticmethod
    def from_edges(k: int, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(k, n, tuple(as_edge(e) for e in edges))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def subedge_buckets(self) -> dict[Edge, tuple[int, ...]]:
        """(k-1)-subset -> indices of the edges containing it."""
        buckets: dict[Edge, list[int]] = {}
        for idx, e in enumerate(self.edges):
            for sub in combinations(e, self.k - 1):
                buckets.setdefault(sub, []).append(idx)
        return {s: tuple(v) for s, v in buckets.items()}

    def __len__(self) -> int:
        return len(self.edges)

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return as_edge(vertices) in self.edge_set


@dataclass(frozen=True)
class ColoredHypergraph:
    """A k-graph with a total red/blue edge assignment, aligned with
    ``base.edges``."""

    base: Hypergraph
    colors: tuple[str, ...]

    def __post_init__(self):
        if len(self.colors) != len(self.base.edges):
            raise InvalidInput("colour list does not cover the edge set", code="missing-color")
        for c in self.colors:
            if c not in (RED, BLUE):
                raise InvalidInput(f"unknown colour {c!r}", code="missing-color")

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n

    @cached_property
    def color_of(self) -> dict[Edge, str]:
        return dict(zip(self.base.edges, self.colors))

    @cached_property
    def red_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e, c in zip(self.base.edges, self.colors) if c == RED)

    @cached_property
    def blue_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e, c in zip(self.base.edges, self.colors) if c == BLUE)

    def color_class(self, color: str) -> Hypergraph:
        edges = self.red_edges if color == RED else self.blue_edges
        return Hypergraph(self.base.k, self.base.n, edges)

    @staticmethod
    def from_color_map(base: Hypergraph, color_of: Mapping[Edge, str]) -> "ColoredHypergraph":
        try:
            colors = tuple(color_of[e] for e in base.edges)
        except KeyError as exc:
            raise InvalidInput(f"edge {exc.args[0]} has no colour", code="missing-color") from None
        return ColoredHypergraph(base, colors)


@dataclass(frozen=True)
class DensityLevel:
    i: int
    violators: int
    zeros: int
    threshold: Fraction
    zero_allowance: Fraction


@dataclass(frozen=True)
class DensityReport:
    mu: Fraction
    alpha: Fraction
    per_level: tuple[DensityLevel, ...]
    passes: bool


def complete(k: int, n: int, cap: int = DEFAULT_EDGE_CAP) -> Hypergraph:
    """The complete k-graph on n vertices; rejects k < 2 or k > n."""
    if k < 2:
        raise InvalidInput(f"complete graph needs uniformity >= 2, got {k}")
    if k > n:
        raise InvalidInput(f"complete graph needs n >= k, got n={n}, k={k}")
    if comb(n, k) > cap:
        raise CapExceeded(f"complete({k},{n}) would have {comb(n, k)} edges, cap is {cap}")
    return Hypergraph(k, n, tuple(combinations(range(n), k)))


def _check_degree_arg(H: Hypergraph, S: Iterable[int]) -> Edge:
    s = as_edge(S)
    if not 1 <= len(s) <= H.k - 1:
        raise InvalidInput(f"degree argument must have 1..{H.k - 1} vertices, got {len(s)}")
    if len(set(s)) != len(s) or (s and (s[0] < 0 or s[-1] >= H.n)):
        raise InvalidInput(f"bad vertex subset {s}", code="bad-vertex")
    return s


def degree(H: Hypergraph, S: Iterable[int]) -> int:
    """Number of edges of H containing the subset S (1 <= |S| <= k-1)."""
    s = _check_degree_arg(H, S)
    ss = set(s)
    return sum(1 for e in H.edges if ss.issubset(e))


def neighborhood(H: Hypergraph, S: Iterable[int]) -> set[Edge]:
    """All (k-|S|)-sets S' with S' disjoint from S and S u S' an edge."""
    s = _check_degree_arg(H, S)
    ss = set(s)
    return {tuple(v for v in e if v not in ss) for e in H.edges if ss.issubset(e)}


def shadow(H: Hypergraph) -> Hypergraph:
    """The (k-1)-graph of all (k-1)-sets contained in some edge of H."""
    if H.k < 2:
        raise InvalidInput("shadow needs uniformity >= 2")
    subs = {sub for e in H.edges for sub in combinations(e, H.k - 1)}
    return Hypergraph(H.k - 1, H.n, tuple(sorted(subs)))


def is_dense(H: Hypergraph, mu: Fraction, alpha: Fraction) -> DensityReport:
    """Exact census of the (mu, alpha)-density predicate, level by level."""
    mu, alpha = Fraction(mu), Fraction(alpha)
    if not (0 <= mu <= 1 and 0 <= alpha <= 1):
        raise InvalidInput("mu and alpha must lie in [0, 1]")
    levels = []
    passes = True
    for i in range(1, H.k):
        counts: dict[Edge, int] = {}
        for e in H.edges:
            for sub in combinations(e, i):
                counts[sub] = counts.get(sub, 0) + 1
        threshold = mu * comb(H.n - i, H.k - i)
        violators = sum(1 for d in counts.values() if d < threshold)
        zeros = comb(H.n, i) - len(counts)
        allowance = alpha * comb(H.n, i)
        level_ok = violators == 0 and zeros <= allowance
        passes = passes and level_ok
        levels.append(DensityLevel(i, violators, zeros, threshold, allowance))
    return DensityReport(mu, alpha, tuple(levels), passes)


def induced(H: Hypergraph, W: Iterable[int]) -> tuple[Hypergraph, dict[int, int]]:
    """Subgraph on W, reindexed to 0..|W|-1; returns (graph, old->new map)."""
    w = sorted(set(W))
    if w and (w[0] < 0 or w[-1] >= H.n):
        raise InvalidInput(f"vertex subset {w} not inside 0..{H.n - 1}", code="bad-vertex")
    index = {v: i for i, v in enumerate(w)}
    ws = set(w)
    edges = tuple(tuple(index[v] for v in e) for e in H.edges if ws.issuperset(e))
    return Hypergraph(H.k, len(w), edges), index


def random_colored_complete(
    k: int, n: int, p_red: Fraction, seed: int, cap: int = DEFAULT_EDGE_CAP
) -> ColoredHypergraph:
    """Complete k-graph with i.i.d. red edges, reproducible from the seed.

    Degenerate n < k yields the empty graph rather than an error, which
    keeps randomised sweeps simple.
    """
    p_red = Fraction(p_red)
    if not 0 <= p_red <= 1:
        raise InvalidInput("p_red must lie in [0, 1]")
    if n < k:
        return ColoredHypergraph(Hypergraph(k, max(n, 0), ()), ())
    base = complete(k, n, cap=cap)
    rng = Random(seed)
    # Exact Bernoulli(p) from an integer draw; no float thresholds.
    den = p_red.denominator
    num = p_red.numerator
    colors = tuple(RED if rng.randrange(den) < num else BLUE for _ in base.edges)
    return ColoredHypergraph(base, colors)


def serialize(G: ColoredHypergraph | Hypergraph) -> str:
    """Canonical JSON text; `parse` is its exact inverse."""
    if isinstance(G, ColoredHypergraph):
        obj = {
            "k": G.base.k,
            "n": G.base.n,
            "edges": [list(e) for e in G.base.edges],
            "colors": list(G.colors),
        }
    else:
        obj = {"k": G.k, "n": G.n, "edges": [list(e) for e in G.edges]}
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def graph_from_obj(obj) -> ColoredHypergraph | Hypergraph:
    if not isinstance(obj, dict):
        raise FormatError("instance must be a JSON object", code="malformed-json")
    for field in ("k", "n", "edges"):
        if field not in obj:
            raise FormatError(f"missing field {field!r}", code="malformed-json")
    k, n, raw_edges = obj["k"], obj["n"], obj["edges"]
    if not isinstance(k, int) or not isinstance(n, int) or not isinstance(raw_edges, list):
        raise FormatError("fields k, n, edges have wrong types", code="malformed-json")
    if k < 1:
        raise FormatError(f"bad uniformity {k}", code="bad-uniformity")
    edges = []
    for raw in raw_edges:
        if not isinstance(raw, list) or not all(isinstance(v, int) for v in raw):
            raise FormatError(f"edge {raw!r} is not a list of ints", code="malformed-json")
        if len(raw) != k or len(set(raw)) != k:
            raise FormatError(f"edge {raw} is not a {k}-set", code="bad-arity")
        if min(raw) < 0 or max(raw) >= n:
            raise FormatError(f"edge {raw} has a vertex outside 0..{n - 1}", code="bad-vertex")
        edges.append(as_edge(raw))
    if len(set(edges)) != len(edges):
        raise FormatError("duplicate edge in instance", code="duplicate-edge")
    order = sorted(range(len(edges)), key=lambda i: edges[i])
    base = Hypergraph(k, n, tuple(edges[i] for i in order))
    if "colors" not in obj or obj["colors"] is None:
        return base
    raw_colors = obj["colors"]
    if not isinstance(raw_colors, list) or len(raw_colors) != len(edges):
        raise FormatError("colour list does not match the edge list", code="missing-color")
    for c in raw_colors:
        if c not in (RED, BLUE):
            raise FormatError(f"unknown colour {c!r}", code="missing-color")
    return ColoredHypergraph(base, tuple(raw_colors[i] for i in order))


def parse(text: str) -> ColoredHypergraph | Hypergraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}", code="malformed-json") from None
    return graph_from_obj(obj)
