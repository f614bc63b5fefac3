"""Request/response models for the workbench service.

Graphs travel as {"k", "n", "edges", "colors"?}; exact rationals travel as
"num/den" strings (weights additionally as {"edge", "num", "den"} triples,
matching the on-disk interchange format).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..errors import FormatError
from ..hypergraph import ColoredHypergraph, Hypergraph, graph_from_obj


class GraphModel(BaseModel):
    k: int
    n: int
    edges: list[list[int]]
    colors: Optional[list[str]] = None

    def to_graph(self) -> ColoredHypergraph | Hypergraph:
        return graph_from_obj(self.model_dump())

    def to_colored(self) -> ColoredHypergraph:
        g = self.to_graph()
        if not isinstance(g, ColoredHypergraph):
            raise FormatError("a coloured instance is required", code="missing-color")
        return g

    @staticmethod
    def from_graph(g: ColoredHypergraph | Hypergraph) -> "GraphModel":
        if isinstance(g, ColoredHypergraph):
            return GraphModel(
                k=g.base.k,
                n=g.base.n,
                edges=[list(e) for e in g.base.edges],
                colors=list(g.colors),
            )
        return GraphModel(k=g.k, n=g.n, edges=[list(e) for e in g.edges])


def parse_fraction(text: str | int) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    num, _, den = text.partition("/")
    try:
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {text!r}", code="malformed-json") from None


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


class WeightEntry(BaseModel):
    edge: list[int]
    num: int
    den: int


class FractionalMatchingModel(BaseModel):
    weights: list[WeightEntry]


class GenRequest(BaseModel):
    kind: Literal["complete", "random", "extremal"]
    k: int
    n: int
    i: int = 0
    p_red: str = "1/2"
    seed: int = 0


class GenResponse(BaseModel):
    graph: GraphModel
    extremal: Optional[dict] = None


class ComponentsRequest(BaseModel):
    graph: GraphModel


class ComponentModel(BaseModel):
    color: str
    id: int
    size: int
    edges: list[list[int]]


class ComponentsResponse(BaseModel):
    components: list[ComponentModel]


class WalkRequest(BaseModel):
    graph: GraphModel
    edge_from: list[int]
    edge_to: list[int]


class WalkResponse(BaseModel):
    found: bool
    walk: Optional[list[list[int]]] = None


class CycleRequest(BaseModel):
    graph: GraphModel
    length: int
    color: Literal["R", "B", "any"] = "any"
    pattern: Literal["cycle", "path"] = "cycle"
    budget_nodes: int = 10**8


class CycleResponse(BaseModel):
    status: str
    witness: Optional[list[int]] = None
    nodes: int


class MatchingRequest(BaseModel):
    graph: GraphModel
    method: Literal["greedy", "maximum", "lp"]
    components: Optional[list[list]] = None  # [["R", 0], ...] for lp
    within: Optional[list] = None  # ["R", 0] restricts greedy to a component
    seed: int = 0
    budget_nodes: int = 10**7


class MatchingResponse(BaseModel):
    method: str
    size: Optional[int] = None
    edges: Optional[list[list[int]]] = None
    value: Optional[str] = None
    matching: Optional[FractionalMatchingModel] = None


class BlowupRequest(BaseModel):
    graph: GraphModel
    r: int
    emit_blown: bool = False


class BlowupResponse(BaseModel):
    base: GraphModel
    r: int
    blown_edges: int
    component_map: dict[str, str]
    blown: Optional[GraphModel] = None


class BlowupConvertRequest(BaseModel):
    graph: GraphModel  # base graph
    r: int
    direction: Literal["up", "down"]
    rprime: int = 1
    weights: FractionalMatchingModel


class BlowupConvertResponse(BaseModel):
    weights: FractionalMatchingModel
    weight: str


class DensityRequest(BaseModel):
    graph: GraphModel
    mu: str
    alpha: str


class BlowupDensityRequest(BaseModel):
    graph: GraphModel
    r: int
    eps: str
    alpha: str


class DensityLevelModel(BaseModel):
    i: int
    violators: int
    zeros: int
    threshold: str
    zero_allowance: str


class DensityResponse(BaseModel):
    mu: str
    alpha: str
    passes: bool
    levels: list[DensityLevelModel]


class PipelineRequest(BaseModel):
    graph: GraphModel
    config: dict = Field(default_factory=dict)


class PipelineResponse(BaseModel):
    seed: int
    phi1: FractionalMatchingModel
    phi2: FractionalMatchingModel
    weight1: str
    weight2: str
    R: Optional[list] = None
    B: Optional[list] = None
    flags: dict[str, bool]
    trace: list[dict]
    archives: list[dict]
    stop_reason: str


class ExtremalVerifyRequest(BaseModel):
    k: int
    n: int
    i: int = 0
    budget_nodes: int = 10**8


class ExtremalVerifyResponse(BaseModel):
    N: int
    forbidden_length: int
    parity_ok: bool
    red_component_parity_ok: bool
    mono_cycle: Optional[dict] = None
    nodes: int


class RamseyRequest(BaseModel):
    pattern: Literal["path", "cycle"]
    k: int
    m: int
    n_max: int
    cap: int = 20
    budget_nodes: int = 10**8
    workers: int = 1


class RamseyResponse(BaseModel):
    pattern: str
    value: Optional[int]
    bounds: list
    witness_below: Optional[GraphModel]
    examined: int
    method: str


class MuRequest(BaseModel):
    k: int
    n: int
    beta: str = "0"
    mode: Literal["single", "red-blue"] = "single"
    workers: int = 1
    cap: int = 20


class MuResponse(BaseModel):
    value: str
    beta: str
    n: int
    k: int
    mode: str
    arg_min: GraphModel
    examined: int
    floor_binding: bool
    note: str


class ErrorBody(BaseModel):
    error: str
    detail: str
