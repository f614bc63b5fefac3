"""Iterative growth of confined fractional matchings in coloured k-graphs.

The driver maintains a 1/r^L-fractional matching on the base graph that is
confined to one monochromatic tight component.  Conceptually each round
lifts it to an integral matching in the r^L-blow-up, tries to enlarge it
there, and projects the result back down, moving to level L+1.  Blow-ups
are never materialised: `LevelView` evaluates the r^L-blow-up lazily.
Edge membership and colours come from the base through the projection
(vertex part*factor+offset belongs to part), component queries use the
fact that projection is a bijection on monochromatic tight components, and
walks between blown edges are produced by morphing offsets one coordinate
at a time onto a lifted base walk.  This keeps every round at base-graph
cost no matter how large r^L grows.

A round can end three ways:

  * growth: a 1/k!-fractional matching in the current component whose
    weight exceeds the matching's by roughly gamma * n (apex cliques that
    are fully the component's colour, or bridges between pairs of
    opposite-coloured partner edges);
  * a partner matching: an equal-sized matching of the opposite colour,
    one partner per matching edge, all partners in one tight component --
    the second increment then grows one of the two sides;
  * inconclusive: fresh vertices ran out, or a closed-walk link that is
    guaranteed only asymptotically failed at this scale; the offending
    walk is archived for deterministic replay.

Quantities of the form c*n become max(1, round(c*n)) thresholds, and every
lemma-level guarantee is reported as a flag rather than asserted: at desk
scale the hierarchy eps << gamma << delta << eta cannot hold honestly, so
shortfalls are data.  Weight floors stop the level climb before the weight
granularity 1/r^(L+1) would drop below the configured beta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, comb, factorial, floor
from random import Random
from typing import Iterable, Optional, Sequence

from .blowup import allocate_transversal_units
from .errors import (
    InternalConsistencyError,
    InvalidInput,
    RedLinkViolation,
)
from .hypergraph import BLUE, RED, ColoredHypergraph, Edge, Hypergraph, is_dense, shadow
from .matching import (
    CompRef,
    FractionalMatching,
    Matching,
    maximal_matching_greedy,
    weight,
)
from .structure import (
    ComponentIndex,
    PseudoWalk,
    _red_link_core,
    find_walk,
    mono_components,
    tight_components,
)


def other_color(c: str) -> str:
    return BLUE if c == RED else RED


# ---------------------------------------------------------------------------
# Stand-alone checks


@dataclass(frozen=True)
class KkReport:
    """Shadow lower-bound check: solve C(x, k) = |H| and require
    |shadow(H)| >= C(x, k-1), up to bisection slack."""

    x: float
    edges: int
    shadow_size: int
    rhs: float
    rhs_ok: bool


def _real_binom(x: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= x - i
    return out / factorial(j)


def kk_bound_check(H: Hypergraph) -> KkReport:
    """Monotone bisection for x >= k-1 with C(x, k) = |H| (tolerance 2^-40),
    then compare the shadow size against C(x, k-1)."""
    k = H.k
    m = len(H)
    shadow_size = len(shadow(H)) if k >= 2 else 0
    if m == 0:
        return KkReport(float(k - 1), 0, shadow_size, 0.0, True)
    lo, hi = float(k - 1), float(k + m)
    while hi - lo > 2.0**-40:
        mid = (lo + hi) / 2
        if _real_binom(mid, k) < m:
            lo = mid
        else:
            hi = mid
    x = (lo + hi) / 2
    rhs = _real_binom(x, k - 1)
    slack = 2.0**-20 * max(1.0, abs(rhs))
    return KkReport(x, m, shadow_size, rhs, shadow_size >= rhs - slack)


def large_tight_component(H: Hypergraph, alpha: Fraction) -> tuple[int, bool]:
    """Largest tight component id and whether it meets the (alpha/5)^k
    fraction of all possible edges."""
    alpha = Fraction(alpha)
    total = comb(H.n, H.k)
    if len(H) < alpha * total:
        raise InvalidInput(
            f"|H|={len(H)} is below alpha*C(n,k)={alpha * total}", code="density-precondition"
        )
    index = tight_components(H)
    if not len(index):
        raise InvalidInput("graph has no edges", code="density-precondition")
    cid = max(range(len(index)), key=lambda i: (len(index.components[i]), -i))
    bound = (alpha / 5) ** H.k * total
    return cid, Fraction(len(index.components[cid])) >= bound


# ---------------------------------------------------------------------------
# Configuration and outcome types


@dataclass(frozen=True)
class PipelineConfig:
    """Hierarchy constants and caps.  Must satisfy 0 < eps <= gamma <=
    delta <= eta < 1; r defaults to k! at run time when left at 0."""

    eps: Fraction = Fraction(1, 100)
    gamma: Fraction = Fraction(1, 50)
    delta: Fraction = Fraction(1, 25)
    eta: Fraction = Fraction(1, 10)
    beta: Optional[Fraction] = None  # default 1/(2 k!) at run time
    r: int = 0
    L_max: int = 8
    materialise_cap: int = 1 << 22  # legacy knob: levels are evaluated lazily
    seed: int = 0
    budget_nodes: int = 10**8

    def __post_init__(self):
        for name in ("eps", "gamma", "delta", "eta"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.beta is not None:
            object.__setattr__(self, "beta", Fraction(self.beta))
        if not (0 < self.eps <= self.gamma <= self.delta <= self.eta < 1):
            raise InvalidInput("hierarchy must satisfy 0 < eps <= gamma <= delta <= eta < 1")
        if self.r < 0 or self.L_max < 0:
            raise InvalidInput("r and L_max must be non-negative")

    def resolved_r(self, k: int) -> int:
        return self.r if self.r else factorial(k)

    def resolved_beta(self, k: int) -> Fraction:
        return self.beta if self.beta is not None else Fraction(1, 2 * factorial(k))

    @staticmethod
    def from_obj(obj: dict) -> "PipelineConfig":
        def frac(v):
            if isinstance(v, str):
                num, _, den = v.partition("/")
                return Fraction(int(num), int(den) if den else 1)
            return Fraction(v)

        kwargs = {}
        for name in ("eps", "gamma", "delta", "eta", "beta"):
            if name in obj and obj[name] is not None:
                kwargs[name] = frac(obj[name])
        for name in ("r", "L_max", "materialise_cap", "seed", "budget_nodes"):
            if name in obj and obj[name] is not None:
                kwargs[name] = int(obj[name])
        return PipelineConfig(**kwargs)


@dataclass(frozen=True)
class FractionalGrowth:
    """A heavier 1/k!-fractional matching confined to ``component``."""

    weights: dict[Edge, Fraction] = field(hash=False)
    component: CompRef = ("R", 0)
    gained: Fraction = Fraction(0)
    target_met: bool = False


@dataclass(frozen=True)
class PartnerMatching:
    """An opposite-coloured matching, one partner per matching edge, all in
    one tight component; partner_of maps partner -> matching edge."""

    partner_edges: tuple[Edge, ...]
    partner_of: dict[Edge, Edge] = field(hash=False)
    component: CompRef = ("B", 0)
    size_ok: bool = False


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    archive: Optional[dict] = field(default=None, hash=False)


IncrementOutcome = FractionalGrowth | PartnerMatching | Inconclusive


# ---------------------------------------------------------------------------
# Lazy blow-up level


class LevelView:
    """The factor-fold blow-up of a coloured graph, evaluated on demand.

    Vertex v encodes (part, offset) as part * factor + offset; projection
    is integer division.  A set of k blown vertices is an edge iff its
    parts are distinct and project to a base edge, and its colour and
    component are those of the projection (projection is a bijection on
    monochromatic tight components, so component ids are base ids).
    """

    def __init__(
        self,
        G: ColoredHypergraph,
        factor: int,
        indexes: Optional[tuple[ComponentIndex, ComponentIndex]] = None,
    ):
        if factor < 1:
            raise InvalidInput("blow-up factor must be >= 1")
        self.G = G
        self.k = G.k
        self.factor = factor
        self.n_star = G.n * factor
        self.red_idx, self.blue_idx = indexes if indexes is not None else mono_components(G)

    def part_of(self, v: int) -> int:
        return v // self.factor

    def project(self, e_star: Iterable[int]) -> Edge:
        return tuple(sorted(v // self.factor for v in e_star))

    def is_edge(self, vs: Iterable[int]) -> bool:
        vs = tuple(vs)
        parts = {v // self.factor for v in vs}
        return len(parts) == self.k == len(set(vs)) and tuple(sorted(parts)) in self.G.base.edge_set

    def color_of(self, e_star: Iterable[int]) -> str:
        return self.G.color_of[self.project(e_star)]

    def comp_ref(self, e_star: Iterable[int]) -> CompRef:
        e = self.project(e_star)
        c = self.G.color_of[e]
        idx = self.red_idx if c == RED else self.blue_idx
        return (c, idx.comp_of[e])

    def clone0(self, e: Edge) -> Edge:
        return tuple(x * self.factor for x in e)

    @cached_property
    def color_class_graphs(self) -> dict[str, Hypergraph]:
        return {RED: self.G.color_class(RED), BLUE: self.G.color_class(BLUE)}

    def _morph_to_clone0(self, e_star: Edge) -> list[Edge]:
        """Pseudo-walk from a blown edge to the offset-0 clone of its
        projection, changing one offset at a time."""
        cur = list(e_star)
        walk = [tuple(sorted(cur))]
        for i in range(self.k):
            if cur[i] % self.factor != 0:
                cur[i] = (cur[i] // self.factor) * self.factor
                walk.append(tuple(sorted(cur)))
        return walk

    def walk_within_component(self, e_from: Edge, e_to: Edge) -> list[Edge]:
        """Pseudo-walk between blown edges of one monochromatic component,
        staying inside it: morph offsets down, follow a lifted base walk,
        morph back up."""
        ref_a, ref_b = self.comp_ref(e_from), self.comp_ref(e_to)
        if ref_a != ref_b:
            raise InvalidInput(f"{e_from} and {e_to} lie in different components")
        host = self.color_class_graphs[ref_a[0]]
        base_walk = find_walk(host, self.project(e_from), self.project(e_to))
        if base_walk is None:
            raise InternalConsistencyError("component members admit no base walk")
        down = self._morph_to_clone0(e_from)  # e_from .. clone0(pi e_from)
        up = self._morph_to_clone0(e_to)  # e_to .. clone0(pi e_to)
        middle = [self.clone0(f) for f in base_walk.edges]
        raw = down + middle[1:] + list(reversed(up[:-1]))
        walk = [raw[0]]
        for e in raw[1:]:
            if e != walk[-1]:
                walk.append(e)
        assert walk[0] == e_from and walk[-1] == e_to
        PseudoWalk(self.k, tuple(walk))  # adjacency sanity
        return walk


class _FreshVertexPool:
    """Deterministic supply of uncovered blown vertices, one offset pool
    per part, honouring the finite factor."""

    def __init__(self, view: LevelView, covered: Iterable[int]):
        self.view = view
        self.used: dict[int, set[int]] = {}
        for v in covered:
            self.used.setdefault(v // view.factor, set()).add(v % view.factor)

    def free_count(self) -> int:
        return self.view.n_star - sum(len(s) for s in self.used.values())

    def has_free(self, part: int) -> bool:
        return len(self.used.get(part, ())) < self.view.factor

    def take(self, part: int) -> int:
        used = self.used.setdefault(part, set())
        off = 0
        while off in used:
            off += 1
        if off >= self.view.factor:
            raise InternalConsistencyError(f"part {part} has no free offset")
        used.add(off)
        return part * self.view.factor + off


def _seeded_part_order(n: int, rng: Random) -> list[int]:
    order = list(range(n))
    rng.shuffle(order)
    return order


def _windows(view: LevelView, seq: Sequence[int]) -> list[Edge]:
    """All k-windows of a vertex sequence, asserting each is a view edge."""
    k = view.k
    out = []
    for i in range(len(seq) - k + 1):
        window = tuple(seq[i : i + k])
        if len(set(window)) != k:
            raise InternalConsistencyError(f"window {window} repeats a vertex")
        if not view.is_edge(window):
            raise InternalConsistencyError(f"window {window} is not an edge of the level")
        out.append(tuple(sorted(window)))
    return out


def _check_weights(view: LevelView, weights: dict[Edge, Fraction], allowed: set[CompRef]) -> None:
    """Exact feasibility, fractionality and confinement revalidation."""
    loads: dict[int, Fraction] = {}
    kfact = factorial(view.k)
    for e, w in weights.items():
        if w <= 0 or w > 1:
            raise InternalConsistencyError(f"weight {w} of {e} outside (0, 1]")
        if (w * kfact).denominator != 1:
            raise InternalConsistencyError(f"weight {w} of {e} is not 1/{kfact}-fractional")
        if not view.is_edge(e):
            raise InternalConsistencyError(f"support edge {e} is not a level edge")
        if view.comp_ref(e) not in allowed:
            raise InternalConsistencyError(f"support edge {e} escapes {allowed}")
        for v in e:
            loads[v] = loads.get(v, Fraction(0)) + w
            if loads[v] > 1:
                raise InternalConsistencyError(f"level vertex {v} overloaded to {loads[v]}")


# ---------------------------------------------------------------------------
# Walks avoiding a vertex between two overlapping edges


def _avoiding_sequence(gfe: Edge, gie: Edge, v: int) -> list[int]:
    """Vertex sequence whose windows (read with the right uniformity) walk
    from gie to gfe inside gfe u gie while no window other than possibly
    the ones equal to gie / gfe contains v."""
    A, C = set(gfe), set(gie)
    us = sorted(A & C)
    xs = sorted(C - A)
    ys = sorted(A - C)
    if not xs or not ys:
        raise InvalidInput("edges must differ in at least one vertex on each side")
    if v in us:
        # run from (gie minus v) to (gfe minus v); endpoints attach to the
        # full edges, interior windows omit v entirely
        rest_u = [u for u in us if u != v]
        return list(reversed(xs)) + rest_u + ys
    if v in xs:
        rest_x = [x for x in xs if x != v]
        return [v] + rest_x + us + ys
    if v in ys:
        rest_y = [y for y in ys if y != v]
        return xs + us + rest_y + [v]
    raise InvalidInput(f"vertex {v} lies in neither edge", code="vertex-not-in-edges")


def _view_avoiding_walk(view: LevelView, gfe: Edge, gie: Edge, v: int) -> list[Edge]:
    """Walk gie -> gfe with interior edges avoiding v; see the public
    `vertex_avoiding_walk` for the contract."""
    gfe, gie = tuple(sorted(gfe)), tuple(sorted(gie))
    if v in gfe or v in gie:
        seq = _avoiding_sequence(gfe, gie, v)
    else:
        A, C = set(gfe), set(gie)
        seq = sorted(C - A) + sorted(A & C) + sorted(A - C)
    inner = _windows(view, seq)
    walk = list(inner)
    if walk[0] != gie:
        walk.insert(0, gie)
    if walk[-1] != gfe:
        walk.append(gfe)
    for e in walk[1:-1]:
        if v in e:
            raise InternalConsistencyError(f"interior edge {e} contains the avoided vertex {v}")
    return walk


def vertex_avoiding_walk(H: Hypergraph, gfe: Edge, gie: Edge, v: int) -> PseudoWalk:
    """A pseudo-walk from gie to gfe whose vertices stay inside
    gfe u gie and whose interior edges never contain v.

    v must lie in one of the two edges (their intersection, gie only, or
    gfe only); the three position cases use different vertex sequences.
    Every window must be an edge of the host.
    """
    gfe, gie = tuple(sorted(gfe)), tuple(sorted(gie))
    for e in (gfe, gie):
        if e not in H.edge_set:
            raise InvalidInput(f"{e} is not an edge of the host")
    if v not in gfe and v not in gie:
        raise InvalidInput(f"vertex {v} lies in neither edge", code="vertex-not-in-edges")
    view = LevelView(
        ColoredHypergraph(H, tuple(RED for _ in H.edges)), 1
    )
    try:
        return PseudoWalk(H.k, tuple(_view_avoiding_walk(view, gfe, gie, v)))
    except InternalConsistencyError as exc:
        raise InvalidInput(str(exc), code="window-not-an-edge") from None


# ---------------------------------------------------------------------------
# Bridges between pairs of opposite-coloured partner edges


def _link_verdict_on_view(
    view: LevelView, Q: Sequence[Edge], i: int, link_color: str
):
    return _red_link_core(
        Q, i, view.color_of, lambda e: view.comp_ref(e), link_color
    )


def _archive_walk(view: LevelView, Q: Sequence[Edge], i: int, link_color: str) -> dict:
    return {
        "factor": view.factor,
        "link_color": link_color,
        "split_index": i,
        "walk": [list(e) for e in Q],
    }


def replay_archive(G: ColoredHypergraph, archive: dict):
    """Re-run the link check recorded in an archive entry; the verdict must
    reproduce deterministically from the base graph alone."""
    view = LevelView(G, archive["factor"])
    Q = [tuple(e) for e in archive["walk"]]
    return _link_verdict_on_view(view, Q, archive["split_index"], archive["link_color"])


def pair_bridge_matching(
    view: LevelView,
    e1: Edge,
    f1: Edge,
    e2: Edge,
    f2: Edge,
    w_set: Sequence[int],
    R_ref: CompRef,
) -> dict[Edge, Fraction]:
    """Weight >= 2 + 1/k of fractional matching inside ``R_ref`` spanning
    the two partner pairs (e1, f1) and (e2, f2).

    f1 and f2 must be opposite-coloured edges in *different* tight
    components of their colour, e1 and e2 their partners inside R_ref with
    |e_j ^ f_j| = k-1 , and w_set a set of k-1 fresh vertices spanning a
    clique with each f_j.  For each start/end vertex pair a walk from f1 to
    f2 through w_set is closed up through the component and the link check
    yields an R_ref edge avoiding both chosen vertices; the links assemble
    into the bridge.  A failed link check raises `RedLinkViolation` with a
    replayable archive.
    """
    k = view.k
    c1 = R_ref[0]
    w_list = sorted(w_set)
    p_star = view.walk_within_component(e2, e1)
    links: dict[int, dict[int, Edge]] = {}
    for x1 in sorted(f1):
        u = sorted(set(f1) - {x1})
        links[x1] = {}
        for x2 in sorted(f2):
            v = sorted(set(f2) - {x2})
            walk = _windows(view, [x1] + u + w_list + v + [x2])
            Q = walk + p_star
            i = len(walk)
            verdict = _link_verdict_on_view(view, Q, i, c1)
            if verdict.status == "precondition-failed":
                raise InternalConsistencyError(
                    f"bridge endpoints violated the link precondition: {verdict.reason}"
                )
            if verdict.status == "violated":
                raise RedLinkViolation(
                    "closed walk carried no same-component link",
                    _archive_walk(view, Q, i, c1),
                )
            link = Q[verdict.witness[0] - 1]
            if bool(set(link) & set(f1)) == bool(set(link) & set(f2)):
                raise InternalConsistencyError(f"link {link} touches both or neither side")
            links[x1][x2] = link

    f1s, f2s = set(f1), set(f2)
    for x1 in sorted(f1):
        found = links[x1]
        if all(set(link) & f2s for link in found.values()):
            spread = sorted(set(found.values()))
            den = len(spread)
            weights = {e1: Fraction(1), e2: Fraction(1, den)}
            for link in spread:
                weights[link] = Fraction(1, den)
            _finish_bridge(view, weights, R_ref, k)
            return weights
    spread_set = set()
    for x1 in sorted(f1):
        x2 = min(x2 for x2, link in links[x1].items() if set(link) & f1s)
        spread_set.add(links[x1][x2])
    spread = sorted(spread_set)
    den = len(spread)
    weights = {e2: Fraction(1), e1: Fraction(1, den)}
    for link in spread:
        weights[link] = Fraction(1, den)
    _finish_bridge(view, weights, R_ref, k)
    return weights


def _finish_bridge(view: LevelView, weights: dict[Edge, Fraction], R_ref: CompRef, k: int):
    total = sum(weights.values(), Fraction(0))
    if total < 2 + Fraction(1, k):
        raise InternalConsistencyError(f"bridge weight {total} below 2 + 1/{k}")
    _check_weights(view, weights, {R_ref})


# ---------------------------------------------------------------------------
# First increment: grow in place or produce a partner matching


def _pick_apex(
    view: LevelView,
    pool: _FreshVertexPool,
    base_e: Edge,
    part_order: Sequence[int],
) -> Optional[int]:
    """A fresh blown vertex w such that every (k-1)-subset of the base edge
    extends to an edge through w's part; None when no part qualifies."""
    base_set = set(base_e)
    E = view.G.base.edge_set
    for y in part_order:
        if y in base_set or not pool.has_free(y):
            continue
        if all(
            tuple(sorted((base_set - {x}) | {y})) in E for x in base_e
        ):
            return pool.take(y)
    return None


def _clique_edges(view: LevelView, e: Edge, w: int) -> list[Edge]:
    """The k+1 level edges spanned by e and the apex w."""
    out = [e]
    for x in e:
        out.append(tuple(sorted((set(e) - {x}) | {w})))
    return out


def _pick_fresh_clique_set(
    view: LevelView,
    pool: _FreshVertexPool,
    anchors: Sequence[Edge],
    count: int,
    part_order: Sequence[int],
) -> Optional[list[int]]:
    """``count`` fresh vertices in distinct new parts forming a clique with
    every anchor edge: all distinct-part k-subsets must be base edges."""
    E = view.G.base.edge_set
    anchor_parts = {view.part_of(v) for a in anchors for v in a}
    chosen_parts: list[int] = []
    for y in part_order:
        if len(chosen_parts) == count:
            break
        if y in anchor_parts or y in chosen_parts or not pool.has_free(y):
            continue
        ok = True
        for a in anchors:
            a_parts = sorted({view.part_of(v) for v in a})
            ground = a_parts + chosen_parts + [y]
            for sub in combinations(sorted(ground), view.k):
                if y in sub and tuple(sub) not in E:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            chosen_parts.append(y)
    if len(chosen_parts) < count:
        return None
    return [pool.take(y) for y in chosen_parts]


def matching_increment_one(
    view: LevelView,
    M: Sequence[Edge],
    R_ref: CompRef,
    cfg: PipelineConfig,
    rng: Random,
) -> IncrementOutcome:
    """One growth round for a matching M confined to component R_ref.

    Assign fresh apex vertices to matching edges.  Apex cliques entirely of
    the component's colour grow the matching in place (spread 1/k over the
    clique).  Otherwise each clique donates an opposite-coloured edge;
    partners in pairwise distinct components are bridged two at a time
    through `pair_bridge_matching`, and if few such pairs exist the
    remaining partners all share one component and come back as a
    `PartnerMatching`.
    """
    k, n_star = view.k, view.n_star
    c1 = R_ref[0]
    c2 = other_color(c1)
    M = sorted(M)
    for e in M:
        if view.comp_ref(e) != R_ref:
            raise InvalidInput(f"matching edge {e} lies outside component {R_ref}")
    covered = [v for e in M for v in e]
    pool = _FreshVertexPool(view, covered)
    free_count = pool.free_count()
    if not M or free_count == 0:
        return Inconclusive("no-fresh-apex")
    quota = max(1, floor(min(len(M), free_count) - cfg.gamma * n_star))
    quota = min(quota, len(M), free_count)
    part_order = _seeded_part_order(view.G.n, rng)
    scan = list(M)
    rng.shuffle(scan)

    selection: list[tuple[Edge, int]] = []
    for e in scan:
        if len(selection) == quota:
            break
        w = _pick_apex(view, pool, view.project(e), part_order)
        if w is not None:
            selection.append((e, w))
    if not selection:
        return Inconclusive("no-fresh-apex")

    vkey = {p: i for i, p in enumerate(part_order)}

    def edge_key(e: Edge) -> tuple:
        return tuple(sorted((vkey[view.part_of(v)], v % view.factor) for v in e))

    grown: list[tuple[Edge, int]] = []
    mixed: list[tuple[Edge, int]] = []
    for e, w in selection:
        clique = _clique_edges(view, e, w)
        if all(view.color_of(f) == c1 for f in clique):
            grown.append((e, w))
        else:
            mixed.append((e, w))

    threshold = max(1, ceil(k * cfg.gamma * n_star))
    if len(grown) >= threshold or not mixed:
        grown_set = {e for e, _ in grown}
        weights: dict[Edge, Fraction] = {e: Fraction(1) for e in M if e not in grown_set}
        for e, w in grown:
            for f in _clique_edges(view, e, w):
                weights[f] = Fraction(1, k)
        gained = Fraction(len(grown), k)
        _check_weights(view, weights, {R_ref})
        return FractionalGrowth(weights, R_ref, gained, gained >= cfg.gamma * n_star)

    partner_of: dict[Edge, Edge] = {}
    for e, w in mixed:
        cands = [f for f in _clique_edges(view, e, w)[1:] if view.color_of(f) == c2]
        partner_of[min(cands, key=edge_key)] = e
    partners = sorted(partner_of, key=edge_key)
    comp_of = {f: view.comp_ref(f) for f in partners}

    matched: list[tuple[Edge, Edge]] = []
    in_pair: set[Edge] = set()
    for i, fa in enumerate(partners):
        if fa in in_pair:
            continue
        for fb in partners[i + 1 :]:
            if fb not in in_pair and comp_of[fa] != comp_of[fb]:
                matched.append((fa, fb))
                in_pair.update((fa, fb))
                break

    if len(matched) >= threshold:
        weights = {}
        consumed: set[Edge] = set()
        bridges: list[dict[Edge, Fraction]] = []
        for fa, fb in matched:
            w_set = _pick_fresh_clique_set(view, pool, [fa, fb], k - 1, part_order)
            if w_set is None:
                continue
            ea, eb = partner_of[fa], partner_of[fb]
            bridges.append(pair_bridge_matching(view, ea, fa, eb, fb, w_set, R_ref))
            consumed.update((ea, eb))
        if not bridges:
            return Inconclusive("no-fresh-apex")
        for e in M:
            if e not in consumed:
                weights[e] = Fraction(1)
        for br in bridges:
            weights.update(br)
        gained = sum((sum(br.values(), Fraction(0)) - 2 for br in bridges), Fraction(0))
        _check_weights(view, weights, {R_ref})
        return FractionalGrowth(weights, R_ref, gained, gained >= cfg.gamma * n_star)

    in_pair_set = in_pair
    partner_edges = tuple(f for f in partners if f not in in_pair_set)
    if not partner_edges:
        return Inconclusive("partner-set-empty")
    refs = {comp_of[f] for f in partner_edges}
    if len(refs) != 1:
        raise InternalConsistencyError("partner set spans several components")
    shortfall = min(len(M), free_count) - len(partner_edges)
    size_ok = shortfall <= 0 or Fraction(shortfall * shortfall) <= cfg.gamma * n_star * n_star
    return PartnerMatching(
        partner_edges,
        {f: partner_of[f] for f in partner_edges},
        refs.pop(),
        size_ok,
    )


# ---------------------------------------------------------------------------
# Second increment: enlarge one of two partnered matchings


def _grow_disjoint_clique(
    view: LevelView,
    pool: _FreshVertexPool,
    anchor_vertices: Sequence[int],
    part_order: Sequence[int],
) -> Optional[Edge]:
    """k fresh vertices in new distinct parts spanning a clique with the
    anchor vertex set, grown one vertex at a time."""
    got = _pick_fresh_clique_set(view, pool, [tuple(sorted(anchor_vertices))], view.k, part_order)
    return tuple(sorted(got)) if got else None


def matching_increment_two(
    view: LevelView,
    M: Sequence[Edge],
    Mp: Sequence[Edge],
    g: dict[Edge, Edge],
    R_ref: CompRef,
    B_ref: CompRef,
    cfg: PipelineConfig,
    rng: Random,
    extra_covered: Sequence[int] = (),
) -> IncrementOutcome | tuple[dict[Edge, Fraction], CompRef, bool, int]:
    """Grow one of two equal partnered matchings M (in R_ref) and Mp (in
    B_ref, bijection g: M -> Mp, partners overlapping in k-1 vertices and
    spanning cliques).

    Fresh disjoint apex edges are grown next to partner pairs.  Their
    majority colour picks an orientation; apex edges already in the
    matching's own component enlarge it directly.  Otherwise walks from the
    partner edge into each apex edge produce first off-colour edges, and
    depending on whether those all fall into the partner component the
    weight is spread there (gain per edge 1/(k-1)) or pulled back into the
    matching's component through vertex-avoiding walks and the link check
    (gain per edge 1/k).  Returns (weights, component, target_met,
    grown_count) on success, else Inconclusive.
    """
    k, n_star = view.k, view.n_star
    if len(M) != len(Mp):
        raise InvalidInput("partnered matchings must have equal size")
    t = len(M)
    covered_mp = {v for e in Mp for v in e}
    for f in M:
        fp = g[f]
        if view.comp_ref(f) != R_ref or view.comp_ref(fp) != B_ref:
            raise InvalidInput(f"pair ({f}, {fp}) escapes ({R_ref}, {B_ref})")
        if len(set(f) & set(fp)) != k - 1:
            raise InvalidInput(f"partners {f}, {fp} do not overlap in k-1 vertices")
        if not (set(f) & covered_mp) <= set(fp):
            raise InvalidInput(f"{f} touches a partner other than {fp}")
        span = sorted(set(f) | set(fp))
        for sub in combinations(span, k):
            if not view.is_edge(sub):
                raise InvalidInput(f"partner pair ({f}, {fp}) does not span a clique")
    covered = [v for e in list(M) + list(Mp) for v in e] + list(extra_covered)
    pool = _FreshVertexPool(view, covered)
    part_order = _seeded_part_order(view.G.n, rng)
    quota = max(1, ceil(8 * k * cfg.delta * n_star))
    quota = min(quota, t, pool.free_count() // k)
    if quota <= 0:
        return Inconclusive("no-fresh-apex")

    scan = sorted(M)
    rng.shuffle(scan)
    apexes: list[tuple[Edge, Edge]] = []  # (apex edge, partner f in M)
    for f in scan:
        if len(apexes) == quota:
            break
        anchor = sorted(set(f) | set(g[f]))
        e = _grow_disjoint_clique(view, pool, anchor, part_order)
        if e is not None:
            apexes.append((e, f))
    if not apexes:
        return Inconclusive("no-fresh-apex")

    c1 = R_ref[0]
    by_color = {c1: [], other_color(c1): []}
    for e, f in apexes:
        by_color[view.color_of(e)].append((e, f))
    if len(by_color[c1]) >= len(by_color[other_color(c1)]):
        majority_color = c1
        MA, MB, gA = list(M), list(Mp), dict(g)
        CA, CB = R_ref, B_ref
        oriented = [(e, f) for e, f in by_color[c1]]
    else:
        majority_color = other_color(c1)
        MA, MB, gA = list(Mp), list(M), {v: ky for ky, v in g.items()}
        CA, CB = B_ref, R_ref
        oriented = [(e, g[f]) for e, f in by_color[majority_color]]
    # oriented pairs: (apex edge, partner edge fA in MA); apex colour == colour(CA)

    in_comp = [(e, fA) for e, fA in oriented if view.comp_ref(e) == CA]
    out_comp = [(e, fA) for e, fA in oriented if view.comp_ref(e) != CA]
    th2 = max(1, ceil(2 * k * cfg.delta * n_star))
    if len(in_comp) >= th2 or not out_comp:
        weights = {e: Fraction(1) for e in MA}
        for e, _ in in_comp:
            weights[e] = Fraction(1)
        _check_weights(view, weights, {CA})
        gained = Fraction(len(in_comp))
        return weights, CA, gained >= cfg.delta * n_star, len(in_comp)

    cases: dict[int, list] = {1: [], 2: []}
    for e, fA in out_comp:
        A = gA[fA]
        zs = sorted(set(fA) & set(A))
        x = next(iter(set(fA) - set(A)))
        ws = sorted(e)
        walks = []
        for z_i in zs:
            seq = [z_i, x] + [z for z in zs if z != z_i] + ws
            P = _windows(view, seq)
            off = next(
                (j for j, h in enumerate(P) if view.color_of(h) != majority_color), None
            )
            if off is None:
                raise InternalConsistencyError(
                    "walk to an out-of-component edge stayed monochromatic"
                )
            walks.append((P, off))
        if all(view.comp_ref(P[off]) == CB for P, off in walks):
            cases[1].append((e, fA, walks))
        else:
            cases[2].append((e, fA, walks))

    which_case = 1 if len(cases[1]) >= len(cases[2]) else 2
    M4 = cases[which_case]

    if which_case == 1:
        dropped = {gA[fA] for _, fA, _ in M4}
        weights = {m: Fraction(1) for m in MB if m not in dropped}
        gained = Fraction(0)
        for e, fA, walks in M4:
            A = gA[fA]
            spread = sorted({P[off] for P, off in walks})
            den = len(spread)
            if set.intersection(set(A), *(set(h) for h in spread)):
                raise InternalConsistencyError("partner spread shares a vertex")
            weights[A] = Fraction(1, den)
            for h in spread:
                weights[h] = weights.get(h, Fraction(0)) + Fraction(1, den)
            gained += Fraction(1, den)
        _check_weights(view, weights, {CB})
        return weights, CB, gained >= cfg.delta * n_star, len(M4)

    dropped = {fA for _, fA, _ in M4}
    weights = {m: Fraction(1) for m in MA if m not in dropped}
    gained = Fraction(0)
    for e, fA, walks in M4:
        A = gA[fA]
        pick = next((P, off) for P, off in walks if view.comp_ref(P[off]) != CB)
        P, off = pick
        C = P[off]
        prefix = [A] + P[: off + 1]
        spread_set = set()
        for v in sorted(fA):
            p_v = _view_avoiding_walk(view, A, C, v)
            Q = prefix + p_v
            i = len(prefix)
            verdict = _link_verdict_on_view(view, Q, i, majority_color)
            if verdict.status == "precondition-failed":
                raise InternalConsistencyError(
                    f"pull-back walk violated the link precondition: {verdict.reason}"
                )
            if verdict.status == "violated":
                return Inconclusive(
                    "red-link-violation", _archive_walk(view, Q, i, majority_color)
                )
            f_v = Q[verdict.witness[1] - 1]
            if v in f_v:
                raise InternalConsistencyError("pulled-back link contains the avoided vertex")
            spread_set.add(f_v)
        spread = sorted(spread_set)
        den = len(spread)
        if set.intersection(set(fA), *(set(h) for h in spread)):
            raise InternalConsistencyError("pulled-back spread shares a vertex")
        weights[fA] = Fraction(1, den)
        for h in spread:
            weights[h] = weights.get(h, Fraction(0)) + Fraction(1, den)
        gained += Fraction(1, den)
    _check_weights(view, weights, {CA})
    return weights, CA, gained >= cfg.delta * n_star, len(M4)


# ---------------------------------------------------------------------------
# Driver


@dataclass(frozen=True)
class InitialMatching:
    matching: Matching
    component: CompRef
    bound_ok: bool


def initial_component_matching(
    G: ColoredHypergraph, eps: Fraction = Fraction(1, 100), seed: int = 0
) -> InitialMatching:
    """Starting matching: greedy maximal matching inside the largest tight
    component of the majority colour class.

    Requires the graph to pass the (1-eps, eps) density census.  The size
    target n / (k^2 15^k) is astronomically small at desk scale, so the
    reported bound is max(1, that), i.e. effectively nonemptiness.
    """
    eps = Fraction(eps)
    report = is_dense(G.base, 1 - eps, eps)
    if not report.passes:
        raise InvalidInput("graph fails the density precondition", code="density-precondition")
    color = RED if len(G.red_edges) >= len(G.blue_edges) else BLUE
    cls = G.color_class(color)
    alpha = Fraction(len(cls), comb(G.n, G.k)) if len(cls) else Fraction(0)
    cid, _ = large_tight_component(cls, alpha)
    comp_edges = tight_components(cls).components[cid]
    # component ids must refer to the colour-class index used everywhere else
    idx = (mono_components(G)[0] if color == RED else mono_components(G)[1])
    ref = (color, idx.comp_of[comp_edges[0]])
    matching = maximal_matching_greedy(G.base, within=idx.components[ref[1]], seed=seed)
    k = G.k
    target = max(1, ceil(Fraction(G.n, k * k * 15**k)))
    return InitialMatching(matching, ref, len(matching) >= target)


@dataclass(frozen=True)
class PipelineResult:
    """Final confined fractional matchings (single component for phi1, the
    union of the red and blue component for phi2) with the per-iteration
    trace and replayable archives of any link-check violations."""

    phi1: FractionalMatching
    phi2: FractionalMatching
    R_ref: Optional[CompRef]
    B_ref: Optional[CompRef]
    flags: dict[str, bool] = field(hash=False)
    trace: tuple[dict, ...] = ()
    archives: tuple[dict, ...] = ()
    stop_reason: str = ""

    def to_obj(self) -> dict:
        return {
            "phi1": self.phi1.to_obj(),
            "phi2": self.phi2.to_obj(),
            "R": list(self.R_ref) if self.R_ref else None,
            "B": list(self.B_ref) if self.B_ref else None,
            "flags": self.flags,
            "trace": list(self.trace),
            "archives": list(self.archives),
            "stop_reason": self.stop_reason,
        }


def _project_weights(weights: dict[Edge, Fraction], factor: int, view: LevelView) -> dict[Edge, Fraction]:
    out: dict[Edge, Fraction] = {}
    for e_star, w in weights.items():
        e = view.project(e_star)
        out[e] = out.get(e, Fraction(0)) + w / factor
    return {e: w for e, w in out.items() if w}


def _lift_to_matching(phi: dict[Edge, Fraction], factor: int) -> list[Edge]:
    units = allocate_transversal_units(phi, factor, 1)
    edges = []
    for e_star, count in units.items():
        if count != 1:
            raise InternalConsistencyError("unit allocation produced a repeated transversal")
        edges.append(e_star)
    return sorted(edges)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def run_pipeline(G: ColoredHypergraph, cfg: PipelineConfig) -> PipelineResult:
    """Grow a confined fractional matching level by level and emit phi1
    (single component) and phi2 (one red with one blue component).

    Stops when the phi2 weight target (1-3 eta) n / k is met, the level cap
    or the beta weight floor would be crossed, or a round is inconclusive.
    phi2 additionally considers, per partner-matching round, the spread
    that puts 1/k on each partner clique and 1 on unpartnered matching
    edges, whose weight |M| + |M'|/k can beat later growth.
    """
    k, n = G.k, G.n
    r = cfg.resolved_r(k)
    if r % factorial(k) != 0:
        # increments emit 1/k!-fractional weights, so each level's
        # granularity 1/r^L must absorb a factor of k!
        raise InvalidInput(f"replication factor {r} must be a multiple of {factorial(k)}")
    beta = cfg.resolved_beta(k)
    indexes = mono_components(G)
    init = initial_component_matching(G, cfg.eps, cfg.seed)
    comp: CompRef = init.component
    phi: dict[Edge, Fraction] = {e: Fraction(1) for e in init.matching.edges}
    level = 0
    target1 = (1 - 3 * cfg.eta) * Fraction(n, k + 1)
    target2 = (1 - 3 * cfg.eta) * Fraction(n, k)
    trace: list[dict] = []
    archives: list[dict] = []
    partner_spreads: list[tuple[dict[Edge, Fraction], CompRef, CompRef]] = []
    stop = ""

    def record(outcome: str, extra: Optional[dict] = None):
        w = sum(phi.values(), Fraction(0))
        rec = {
            "L": level,
            "outcome": outcome,
            "matching_size": int(w * r**level) if (w * r**level).denominator == 1 else None,
            "weights": {"phi": _frac_str(w)},
            "flags": {
                "initial_bound_ok": init.bound_ok,
                "phi1_target": w >= target1,
                "phi2_target": w >= target2,
            },
        }
        if extra:
            rec.update(extra)
        trace.append(rec)

    record("initial", {"component": list(comp), "seed": cfg.seed})

    while True:
        w = sum(phi.values(), Fraction(0))
        if w >= target2:
            stop = "targets-met"
            break
        if level >= cfg.L_max:
            stop = "level-cap"
            break
        if r ** (level + 1) > 1 / beta:
            stop = "beta-floor-limit"
            break
        factor = r**level
        view = LevelView(G, factor, indexes)
        M_star = _lift_to_matching(phi, factor)
        rng = Random(f"{cfg.seed}:{level}:inc")
        bounds_ok = cfg.eta * view.n_star <= len(M_star) <= (1 - cfg.eta) * Fraction(view.n_star, k)
        out = matching_increment_one(view, M_star, comp, cfg, rng)
        if isinstance(out, FractionalGrowth):
            phi = _project_weights(out.weights, factor, view)
            comp = out.component
            level += 1
            record("grown-in-place", {"bounds_ok": bounds_ok, "target_met": out.target_met})
            continue
        if isinstance(out, Inconclusive):
            if out.archive:
                archives.append(out.archive)
            stop = f"inconclusive:{out.reason}"
            record(stop, {"bounds_ok": bounds_ok})
            break
        # partner matching: remember the clique spread for phi2, then try
        # to grow one of the two sides
        partners = out.partner_edges
        partner_of = out.partner_of
        pair_refs = (comp, out.component)
        spread: dict[Edge, Fraction] = {}
        partnered = set(partner_of.values())
        for e in M_star:
            if e not in partnered:
                spread[e] = Fraction(1)
        for f in partners:
            e = partner_of[f]
            for h in _clique_edges(view, e, sorted(set(f) - set(e))[0]):
                spread[h] = Fraction(1, k)
        _check_weights(view, spread, set(pair_refs))
        spread_base = _project_weights(spread, factor, view)
        red_first = pair_refs if pair_refs[0][0] == RED else (pair_refs[1], pair_refs[0])
        partner_spreads.append((spread_base, red_first[0], red_first[1]))
        M_trim = sorted(partner_of.values())
        gmap = {partner_of[f]: f for f in partners}
        unpartnered = [e for e in M_star if e not in partnered]
        out2 = matching_increment_two(
            view, M_trim, sorted(partners), gmap, comp, out.component, cfg,
            Random(f"{cfg.seed}:{level}:inc2"),
            extra_covered=[v for e in unpartnered for v in e],
        )
        if isinstance(out2, Inconclusive):
            if out2.archive:
                archives.append(out2.archive)
            stop = f"inconclusive:{out2.reason}"
            record(stop, {"partner_size": len(partners), "bounds_ok": bounds_ok})
            break
        weights2, which, target_met, grown_count = out2
        if which == comp:
            # matching edges lost to the pairing stay in the component and
            # remain disjoint from the grown support
            for e in unpartnered:
                weights2[e] = Fraction(1)
            _check_weights(view, weights2, {which})
        new_phi = _project_weights(weights2, factor, view)
        if sum(new_phi.values(), Fraction(0)) <= w:
            # pairing cost exceeded the second increment's gain; at this
            # scale that ends the climb rather than looping
            stop = "inconclusive:no-improvement"
            record(stop, {"partner_size": len(partners), "bounds_ok": bounds_ok})
            break
        phi = new_phi
        comp = which
        level += 1
        record(
            "partner-grown",
            {"which": list(which), "partner_size": len(partners), "grown": grown_count,
             "target_met": target_met, "bounds_ok": bounds_ok},
        )

    final_weight = sum(phi.values(), Fraction(0))
    phi1 = FractionalMatching.over_graph(G.base, phi)
    phi2 = phi1
    R_ref: Optional[CompRef] = comp if comp[0] == RED else None
    B_ref: Optional[CompRef] = comp if comp[0] == BLUE else None
    usable = [
        (cand, r_ref, b_ref)
        for cand, r_ref, b_ref in partner_spreads
        if comp in (r_ref, b_ref)
    ]
    if usable:
        cand, r_ref, b_ref = max(usable, key=lambda c: sum(c[0].values(), Fraction(0)))
        if sum(cand.values(), Fraction(0)) > final_weight:
            phi2 = FractionalMatching.over_graph(G.base, cand)
            R_ref, B_ref = r_ref, b_ref
    w1, w2 = weight(phi1), weight(phi2)
    flags = {
        "phi1_target": w1 >= target1,
        "phi2_target": w2 >= target2,
        "initial_bound_ok": init.bound_ok,
        "beta_floor": all(v >= beta for v in phi1.weights.values())
        and all(v >= beta for v in phi2.weights.values()),
    }
    record("final", {"stop": stop, "weights_final": {"phi1": _frac_str(w1), "phi2": _frac_str(w2)}})
    return PipelineResult(
        phi1=phi1,
        phi2=phi2,
        R_ref=R_ref,
        B_ref=B_ref,
        flags=flags,
        trace=tuple(trace),
        archives=tuple(archives),
        stop_reason=stop,
    )
