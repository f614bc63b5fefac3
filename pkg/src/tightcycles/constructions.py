"""Parity colourings without long monochromatic cycles, and exact Ramsey
numbers for tiny tight paths/cycles by canonical exhaustive search.

The lower-bound colouring splits the vertices of a complete k-graph into
X and Y and colours an edge red exactly when it meets X in an even number
of vertices.  Walking a tight cycle moves the window one vertex at a time,
so |window ^ X| changes by at most 1 between consecutive edges; red edges
have even intersection, blue odd, which caps the length of monochromatic
tight cycles (within one red component the intersection parity is pinned).
With d = gcd(k, i) (gcd(k, 0) = k) the instance uses |X| = (k/d) n - 1,
|Y| = k n - 1, so N = |X| + |Y| = (d+1)/d * k n - 2 vertices.

The Ramsey searcher ascends N, at each level looking for a colouring of
the complete k-graph with no monochromatic copy of the pattern: first it
probes parity colourings for every |X| (witnesses are cheap to verify),
then falls back to orderly enumeration of canonical colourings.  When no
witness exists, all canonical colourings were shown to contain a copy and
N is the Ramsey number.  Partial results carry explicit bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd
from typing import Optional

from .errors import BudgetExhausted, CapExceeded, InvalidInput
from .hypergraph import BLUE, RED, ColoredHypergraph, Hypergraph, complete
from .mu import canonical_colorings
from .structure import (
    DEFAULT_NODE_BUDGET,
    SearchResult,
    find_tight_cycle,
    find_tight_path,
    mono_components,
)

PATTERN_PATH = "path"
PATTERN_CYCLE = "cycle"


@dataclass(frozen=True)
class ExtremalInstance:
    k: int
    n: int
    i: int
    d: int
    N: int
    X: tuple[int, ...]
    Y: tuple[int, ...]
    coloring: ColoredHypergraph

    @property
    def forbidden_length(self) -> int:
        return self.k * self.n + self.i


def parity_coloring(k: int, N: int, x_size: int) -> ColoredHypergraph:
    """Complete k-graph on N vertices, X = {0..x_size-1}; red iff |e ^ X|
    is even.  N below k yields the empty graph."""
    if N < k:
        return ColoredHypergraph(Hypergraph(k, max(N, 0), ()), ())
    base = complete(k, N)
    xs = set(range(x_size))
    colors = tuple(RED if len(xs.intersection(e)) % 2 == 0 else BLUE for e in base.edges)
    return ColoredHypergraph(base, colors)


def extremal_coloring(k: int, n: int, i: int) -> ExtremalInstance:
    """The even-intersection parity instance for cycle length k*n + i."""
    if k < 3:
        raise InvalidInput(f"uniformity must be >= 3, got {k}")
    if not 0 <= i <= k - 1:
        raise InvalidInput(f"cycle remainder must lie in 0..k-1, got {i}")
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    d = gcd(k, i) if i else k
    x_size = (k // d) * n - 1
    y_size = k * n - 1
    N = x_size + y_size
    coloring = parity_coloring(k, N, x_size)
    return ExtremalInstance(
        k, n, i, d, N, tuple(range(x_size)), tuple(range(x_size, N)), coloring
    )


@dataclass(frozen=True)
class CopyWitness:
    color: str
    vertices: tuple[int, ...]


def contains_mono_copy(
    G: ColoredHypergraph, pattern: str, m: int, budget: int = DEFAULT_NODE_BUDGET
) -> tuple[Optional[CopyWitness], int]:
    """First monochromatic tight path/cycle on m vertices in canonical
    order (red before blue), or None; raises on an exhausted budget so the
    caller cannot mistake a truncated search for absence."""
    if pattern not in (PATTERN_PATH, PATTERN_CYCLE):
        raise InvalidInput(f"unknown pattern {pattern!r}")
    search = find_tight_path if pattern == PATTERN_PATH else find_tight_cycle
    nodes = 0
    for color in (RED, BLUE):
        res: SearchResult = search(G, m, color, budget - nodes)
        nodes += res.nodes
        if res.status == "budget-exhausted":
            raise BudgetExhausted(f"mono-copy search exhausted {budget} nodes")
        if res.found:
            return CopyWitness(color, res.witness), nodes
    return None, nodes


@dataclass(frozen=True)
class RamseyResult:
    pattern: str
    k: int
    m: int
    value: Optional[int]
    bounds: tuple[int, Optional[int]]
    witness_below: Optional[ColoredHypergraph]
    colorings_examined: int
    method: str


def _scan_chunk(args) -> Optional[tuple[int, tuple[str, ...]]]:
    """Position and colours of the first pattern-free colouring in a chunk."""
    k, m, pattern, N, budget, chunk = args
    base = complete(k, N)
    for pos, colors in chunk:
        witness, _ = contains_mono_copy(ColoredHypergraph(base, colors), pattern, m, budget)
        if witness is None:
            return pos, colors
    return None


def _pattern_free_coloring(
    k: int, m: int, pattern: str, N: int, cap: int, budget: int, workers: int = 1
) -> tuple[Optional[ColoredHypergraph], int]:
    """A colouring of the complete k-graph on N vertices without a
    monochromatic pattern copy, or None when every canonical colouring has
    one.  Parity candidates are probed before the exhaustive sweep; with
    several workers the sweep is chunked and the earliest canonical
    witness wins, keeping the result worker-count independent."""
    examined = 0
    if N >= k:
        for x_size in range(N + 1):
            G = parity_coloring(k, N, x_size)
            examined += 1
            witness, _ = contains_mono_copy(G, pattern, m, budget)
            if witness is None:
                return G, examined
    else:
        return ColoredHypergraph(Hypergraph(k, N, ()), ()), examined
    if comb(N, k) > cap:
        raise CapExceeded(
            f"{comb(N, k)} edges at N={N} exceed the enumeration cap {cap}"
        )
    base = complete(k, N)
    if workers <= 1:
        for colors in canonical_colorings(k, N, cap=cap):
            G = ColoredHypergraph(base, colors)
            examined += 1
            witness, _ = contains_mono_copy(G, pattern, m, budget)
            if witness is None:
                return G, examined
        return None, examined
    from concurrent.futures import ProcessPoolExecutor

    indexed = list(enumerate(canonical_colorings(k, N, cap=cap)))
    chunks = [indexed[w::workers] for w in range(workers)]
    hits = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for hit in pool.map(
            _scan_chunk, [(k, m, pattern, N, budget, c) for c in chunks]
        ):
            if hit is not None:
                hits.append(hit)
    examined += len(indexed)
    if not hits:
        return None, examined
    _, colors = min(hits)
    return ColoredHypergraph(base, colors), examined


def ramsey_search(
    pattern: str,
    k: int,
    m: int,
    N_max: int,
    cap: int = 20,
    budget: int = DEFAULT_NODE_BUDGET,
    workers: int = 1,
) -> RamseyResult:
    """Smallest N such that every 2-colouring of the complete k-graph on N
    vertices contains a monochromatic tight ``pattern`` on m vertices.

    Ascends N from m; every reported extremal witness revalidates, and a
    cap hit yields a partial result whose bounds are still sound.
    """
    if pattern not in (PATTERN_PATH, PATTERN_CYCLE):
        raise InvalidInput(f"unknown pattern {pattern!r}")
    if m < k:
        raise InvalidInput(f"pattern needs at least k={k} vertices, got {m}")
    if N_max < m:
        raise InvalidInput(f"N_max={N_max} below the pattern size {m}")
    examined = 0
    # Any colouring below m vertices is pattern-free; an all-red complete
    # graph is the canonical witness there.
    if m - 1 >= k:
        witness_below: Optional[ColoredHypergraph] = ColoredHypergraph(
            complete(k, m - 1), tuple(RED for _ in range(comb(m - 1, k)))
        )
    else:
        witness_below = ColoredHypergraph(Hypergraph(k, m - 1, ()), ())
    for N in range(m, N_max + 1):
        try:
            free, seen = _pattern_free_coloring(k, m, pattern, N, cap, budget, workers)
        except CapExceeded:
            return RamseyResult(
                pattern, k, m, None, (N, None), witness_below, examined,
                "exhaustive+canonical (capped)",
            )
        examined += seen
        if free is None:
            return RamseyResult(
                pattern, k, m, N, (N, N), witness_below, examined, "exhaustive+canonical"
            )
        witness_below = free
    return RamseyResult(
        pattern, k, m, None, (N_max + 1, None), witness_below, examined,
        "exhaustive+canonical (range exhausted)",
    )


@dataclass(frozen=True)
class ExtremalReport:
    instance_params: tuple[int, int, int]
    parity_ok: bool
    red_component_parity_ok: bool
    mono_cycle: Optional[CopyWitness]
    nodes: int


def verify_extremal(inst: ExtremalInstance, budget: int = DEFAULT_NODE_BUDGET) -> ExtremalReport:
    """Check the parity invariants edge by edge and search both colours
    exhaustively for a tight cycle on k*n + i vertices."""
    xs = set(inst.X)
    parity_ok = all(
        (len(xs.intersection(e)) % 2 == 0) == (c == RED)
        for e, c in zip(inst.coloring.base.edges, inst.coloring.colors)
    )
    red_idx, _ = mono_components(inst.coloring)
    red_parity_ok = all(
        len({len(xs.intersection(e)) for e in comp}) == 1 for comp in red_idx.components
    )
    witness, nodes = contains_mono_copy(
        inst.coloring, PATTERN_CYCLE, inst.forbidden_length, budget
    )
    return ExtremalReport((inst.k, inst.n, inst.i), parity_ok, red_parity_ok, witness, nodes)
