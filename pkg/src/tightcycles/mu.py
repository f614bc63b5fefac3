"""Exact worst-case confined matching numbers over tiny complete colourings.

For a fixed k and n, enumerate the 2-edge-colourings of the complete
k-graph up to vertex permutation and, for each, compute the largest
fractional matching weight confined to a single monochromatic tight
component ("single" mode) or to the union of at most one red and one blue
component ("red-blue" mode).  The reported value is the minimum over the
enumerated colourings: the amount any adversarial colouring must concede.

Only complete colourings are enumerated (the almost-complete relaxation is
a different, far larger instance space), and the result notes this
restriction.  The weight floor ``beta`` is checked a posteriori on the
optimal LP vertex: basic solutions at this scale have small denominators,
so a binding floor is reported rather than re-optimised.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Iterator

from .errors import CapExceeded, InvalidInput
from .hypergraph import BLUE, RED, ColoredHypergraph, as_edge, complete
from .matching import CompRef, max_fractional_confined, weight
from .structure import mono_components

ENUMERATION_CAP = 20

MODE_SINGLE = "single"
MODE_RED_BLUE = "red-blue"


def _edge_permutation_maps(k: int, n: int) -> list[tuple[int, ...]]:
    """For each vertex permutation p, the map i -> index of p(e_i)."""
    base = complete(k, n)
    index = {e: i for i, e in enumerate(base.edges)}
    maps = []
    for p in permutations(range(n)):
        maps.append(tuple(index[as_edge(p[v] for v in e)] for e in base.edges))
    return maps


def canonical_colorings(k: int, n: int, cap: int = ENUMERATION_CAP) -> Iterator[tuple[str, ...]]:
    """Yield one lexicographically minimal representative per orbit of the
    2-colourings of the complete k-graph under vertex permutations.

    Orderly generation: colours are assigned edge by edge in canonical
    order and a partial assignment is pruned as soon as some permutation
    maps an already-assigned prefix to something strictly smaller.
    """
    t = comb(n, k)
    if t > cap:
        raise CapExceeded(f"{t} edges exceed the enumeration cap {cap}")
    maps = _edge_permutation_maps(k, n)
    maps = [m for m in maps if m != tuple(range(t))]
    assignment: list[int] = []

    def dominated() -> bool:
        j = len(assignment)
        for m in maps:
            for i in range(j):
                mi = m[i]
                if mi >= j:
                    break
                a, b = assignment[mi], assignment[i]
                if a < b:
                    return True
                if a > b:
                    break
        return False

    def gen() -> Iterator[tuple[str, ...]]:
        if len(assignment) == t:
            yield tuple(RED if c == 0 else BLUE for c in assignment)
            return
        for c in (0, 1):
            assignment.append(c)
            if not dominated():
                yield from gen()
            assignment.pop()

    yield from gen()


def orbit_count_burnside(k: int, n: int) -> int:
    """Number of colouring orbits via the cycle-counting lemma; used to
    cross-check the canonical enumeration."""
    t = comb(n, k)
    total = 0
    for m in _edge_permutation_maps(k, n):
        seen = [False] * t
        cycles = 0
        for i in range(t):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = m[j]
        total += 1 << cycles
    return total // factorial(n)


def confinement_choices(n_red: int, n_blue: int, mode: str) -> list[tuple[CompRef, ...]]:
    """Component selections allowed by the mode.

    "single": one monochromatic component.  "red-blue": at most one red and
    at most one blue component, at least one present; this nests the
    single-component choices, so red-blue values dominate single values.
    """
    singles: list[tuple[CompRef, ...]] = [(("R", i),) for i in range(n_red)]
    singles += [(("B", j),) for j in range(n_blue)]
    if mode == MODE_SINGLE:
        return singles
    if mode == MODE_RED_BLUE:
        pairs = [(("R", i), ("B", j)) for i in range(n_red) for j in range(n_blue)]
        return singles + pairs
    raise InvalidInput(f"unknown mode {mode!r}")


def best_confined_value(
    G: ColoredHypergraph, mode: str, beta: Fraction
) -> tuple[Fraction, bool]:
    """Largest confined LP weight over the allowed component choices and
    whether the beta floor binds on the optimal vertex found."""
    indexes = mono_components(G)
    choices = confinement_choices(len(indexes[0]), len(indexes[1]), mode)
    best = Fraction(0)
    floor_binds = False
    for refs in choices:
        phi, _ = max_fractional_confined(G, refs, indexes)
        val = weight(phi)
        if val > best:
            best = val
            floor_binds = any(0 < w < beta for w in phi.weights.values())
    return best, floor_binds


@dataclass(frozen=True)
class MuResult:
    value: Fraction
    beta: Fraction
    n: int
    k: int
    mode: str
    arg_min: ColoredHypergraph
    examined: int
    floor_binding: bool
    note: str = "complete colourings only (density slack 0)"


def _eval_chunk(args) -> list[tuple[int, int, tuple[str, ...], bool]]:
    k, n, beta_num, beta_den, mode, chunk = args
    base = complete(k, n)
    beta = Fraction(beta_num, beta_den)
    out = []
    for colors in chunk:
        G = ColoredHypergraph(base, colors)
        val, binds = best_confined_value(G, mode, beta)
        out.append((val.numerator, val.denominator, colors, binds))
    return out


def mu_exact(
    k: int,
    n: int,
    beta: Fraction,
    mode: str,
    workers: int = 1,
    cap: int = ENUMERATION_CAP,
) -> MuResult:
    """Minimum over canonical colourings of the best confined LP weight."""
    beta = Fraction(beta)
    if beta < 0:
        raise InvalidInput("beta must be non-negative")
    colorings = list(canonical_colorings(k, n, cap=cap))
    base = complete(k, n)
    results: list[tuple[int, int, tuple[str, ...], bool]] = []
    if workers <= 1 or len(colorings) < 2 * workers:
        results = _eval_chunk((k, n, beta.numerator, beta.denominator, mode, colorings))
    else:
        chunks = [colorings[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(
                _eval_chunk,
                [(k, n, beta.numerator, beta.denominator, mode, c) for c in chunks],
            ):
                results.extend(part)
    # Deterministic merge: exact min, ties broken by the lex-least
    # colouring in the red-first canonical order.
    rank = {RED: 0, BLUE: 1}
    best = min(
        results,
        key=lambda r: (Fraction(r[0], r[1]), tuple(rank[c] for c in r[2])),
    )
    value = Fraction(best[0], best[1])
    floor_binding = any(
        r[3] for r in results if Fraction(r[0], r[1]) == value
    )
    return MuResult(
        value=value,
        beta=beta,
        n=n,
        k=k,
        mode=mode,
        arg_min=ColoredHypergraph(base, best[2]),
        examined=len(results),
        floor_binding=floor_binding,
    )
