"""HTTP facade over the workbench: one POST endpoint per operation.

All endpoints are stateless and deterministic given the request body; the
CLI drives them in-process by default.  Library errors map to structured
JSON bodies: invalid input to 400, exhausted budgets to 422, internal
consistency failures to 500.  Archived link-check violations inside the
pipeline are part of a successful response, not an error.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..blowup import (
    blowup_matching_from_fractional,
    build,
    density_of_blowup,
    fractional_from_blowup_matching,
    project_component,
)
from ..constructions import extremal_coloring, ramsey_search, verify_extremal
from ..errors import (
    BudgetExhausted,
    InternalConsistencyError,
    WorkbenchError,
)
from ..hypergraph import ColoredHypergraph, complete, is_dense, random_colored_complete
from ..matching import (
    FractionalMatching,
    max_fractional_confined,
    maximal_matching_greedy,
    maximum_matching,
    weight,
)
from ..mu import mu_exact
from ..pipeline import PipelineConfig, run_pipeline
from ..structure import (
    find_tight_cycle,
    find_tight_path,
    find_walk,
    mono_components,
    tight_components,
)
from . import schemas as sc

app = FastAPI(title="tightcycles workbench", version="0.1.0")


@app.exception_handler(WorkbenchError)
def workbench_error_handler(request: Request, exc: WorkbenchError) -> JSONResponse:
    status = 400
    if isinstance(exc, BudgetExhausted):
        status = 422
    elif isinstance(exc, InternalConsistencyError):
        status = 500
    return JSONResponse(
        status_code=status, content={"error": exc.code, "detail": str(exc)}
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/gen", response_model=sc.GenResponse)
def gen(req: sc.GenRequest) -> sc.GenResponse:
    if req.kind == "complete":
        return sc.GenResponse(graph=sc.GraphModel.from_graph(complete(req.k, req.n)))
    if req.kind == "random":
        g = random_colored_complete(req.k, req.n, sc.parse_fraction(req.p_red), req.seed)
        return sc.GenResponse(graph=sc.GraphModel.from_graph(g))
    inst = extremal_coloring(req.k, req.n, req.i)
    return sc.GenResponse(
        graph=sc.GraphModel.from_graph(inst.coloring),
        extremal={
            "N": inst.N,
            "d": inst.d,
            "X": list(inst.X),
            "Y": list(inst.Y),
            "forbidden_length": inst.forbidden_length,
        },
    )


@app.post("/components", response_model=sc.ComponentsResponse)
def components(req: sc.ComponentsRequest) -> sc.ComponentsResponse:
    g = req.graph.to_graph()
    out = []
    if isinstance(g, ColoredHypergraph):
        red, blue = mono_components(g)
        indexes = [red, blue]
    else:
        indexes = [tight_components(g)]
    for idx in indexes:
        for cid, comp in enumerate(idx.components):
            out.append(
                sc.ComponentModel(
                    color=idx.color, id=cid, size=len(comp), edges=[list(e) for e in comp]
                )
            )
    return sc.ComponentsResponse(components=out)


@app.post("/walk", response_model=sc.WalkResponse)
def walk(req: sc.WalkRequest) -> sc.WalkResponse:
    g = req.graph.to_graph()
    host = g.base if isinstance(g, ColoredHypergraph) else g
    w = find_walk(host, req.edge_from, req.edge_to)
    if w is None:
        return sc.WalkResponse(found=False)
    return sc.WalkResponse(found=True, walk=[list(e) for e in w.edges])


@app.post("/cycle", response_model=sc.CycleResponse)
def cycle(req: sc.CycleRequest) -> sc.CycleResponse:
    g = req.graph.to_graph()
    search = find_tight_cycle if req.pattern == "cycle" else find_tight_path
    res = search(g, req.length, req.color, req.budget_nodes)
    return sc.CycleResponse(
        status=res.status,
        witness=list(res.witness) if res.witness else None,
        nodes=res.nodes,
    )


@app.post("/matching", response_model=sc.MatchingResponse)
def matching(req: sc.MatchingRequest) -> sc.MatchingResponse:
    g = req.graph.to_graph()
    host = g.base if isinstance(g, ColoredHypergraph) else g
    if req.method == "greedy":
        within = None
        if req.within is not None:
            colored = req.graph.to_colored()
            red, blue = mono_components(colored)
            color, cid = req.within[0], int(req.within[1])
            idx = red if color == "R" else blue
            within = idx.components[cid]
        m = maximal_matching_greedy(host, within=within, seed=req.seed)
        return sc.MatchingResponse(method="greedy", size=len(m), edges=[list(e) for e in m.edges])
    if req.method == "maximum":
        m = maximum_matching(host, node_cap=req.budget_nodes)
        return sc.MatchingResponse(method="maximum", size=len(m), edges=[list(e) for e in m.edges])
    colored = req.graph.to_colored()
    refs = [(c, int(i)) for c, i in (req.components or [])]
    phi, _ = max_fractional_confined(colored, refs)
    return sc.MatchingResponse(
        method="lp",
        value=sc.frac_str(weight(phi)),
        matching=sc.FractionalMatchingModel(**phi.to_obj()),
    )


def _matching_from_model(
    model: sc.FractionalMatchingModel, host
) -> FractionalMatching:
    weights = {
        tuple(sorted(entry.edge)): Fraction(entry.num, entry.den)
        for entry in model.weights
    }
    return FractionalMatching.over_graph(host, weights)


@app.post("/blowup", response_model=sc.BlowupResponse)
def blowup_build(req: sc.BlowupRequest) -> sc.BlowupResponse:
    g = req.graph.to_colored()
    b = build(g, req.r)
    cmap = {f"{c},{i}": f"{c2},{i2}" for (c, i), (c2, i2) in project_component(b).items()}
    return sc.BlowupResponse(
        base=sc.GraphModel.from_graph(g),
        r=req.r,
        blown_edges=len(b.blown.base.edges),
        component_map=cmap,
        blown=sc.GraphModel.from_graph(b.blown) if req.emit_blown else None,
    )


@app.post("/blowup/convert", response_model=sc.BlowupConvertResponse)
def blowup_convert(req: sc.BlowupConvertRequest) -> sc.BlowupConvertResponse:
    g = req.graph.to_colored()
    b = build(g, req.r)
    if req.direction == "up":
        phi = _matching_from_model(req.weights, b.base.base)
        out = blowup_matching_from_fractional(b, phi, req.rprime)
    else:
        phi_star = _matching_from_model(req.weights, b.blown.base)
        out = fractional_from_blowup_matching(b, phi_star, req.rprime)
    return sc.BlowupConvertResponse(
        weights=sc.FractionalMatchingModel(**out.to_obj()), weight=sc.frac_str(weight(out))
    )


@app.post("/density", response_model=sc.DensityResponse)
def density(req: sc.DensityRequest) -> sc.DensityResponse:
    g = req.graph.to_graph()
    host = g.base if isinstance(g, ColoredHypergraph) else g
    report = is_dense(host, sc.parse_fraction(req.mu), sc.parse_fraction(req.alpha))
    return sc.DensityResponse(
        mu=sc.frac_str(report.mu),
        alpha=sc.frac_str(report.alpha),
        passes=report.passes,
        levels=[
            sc.DensityLevelModel(
                i=lv.i,
                violators=lv.violators,
                zeros=lv.zeros,
                threshold=sc.frac_str(lv.threshold),
                zero_allowance=sc.frac_str(lv.zero_allowance),
            )
            for lv in report.per_level
        ],
    )


@app.post("/blowup/density", response_model=sc.DensityResponse)
def blowup_density(req: sc.BlowupDensityRequest) -> sc.DensityResponse:
    g = req.graph.to_colored()
    b = build(g, req.r)
    report = density_of_blowup(b, sc.parse_fraction(req.eps), sc.parse_fraction(req.alpha))
    return sc.DensityResponse(
        mu=sc.frac_str(report.mu),
        alpha=sc.frac_str(report.alpha),
        passes=report.passes,
        levels=[
            sc.DensityLevelModel(
                i=lv.i,
                violators=lv.violators,
                zeros=lv.zeros,
                threshold=sc.frac_str(lv.threshold),
                zero_allowance=sc.frac_str(lv.zero_allowance),
            )
            for lv in report.per_level
        ],
    )


@app.post("/pipeline", response_model=sc.PipelineResponse)
def pipeline(req: sc.PipelineRequest) -> sc.PipelineResponse:
    g = req.graph.to_colored()
    cfg = PipelineConfig.from_obj(req.config)
    res = run_pipeline(g, cfg)
    return sc.PipelineResponse(
        seed=cfg.seed,
        phi1=sc.FractionalMatchingModel(**res.phi1.to_obj()),
        phi2=sc.FractionalMatchingModel(**res.phi2.to_obj()),
        weight1=sc.frac_str(weight(res.phi1)),
        weight2=sc.frac_str(weight(res.phi2)),
        R=list(res.R_ref) if res.R_ref else None,
        B=list(res.B_ref) if res.B_ref else None,
        flags=res.flags,
        trace=list(res.trace),
        archives=list(res.archives),
        stop_reason=res.stop_reason,
    )


@app.post("/extremal-verify", response_model=sc.ExtremalVerifyResponse)
def extremal_verify(req: sc.ExtremalVerifyRequest) -> sc.ExtremalVerifyResponse:
    inst = extremal_coloring(req.k, req.n, req.i)
    report = verify_extremal(inst, budget=req.budget_nodes)
    return sc.ExtremalVerifyResponse(
        N=inst.N,
        forbidden_length=inst.forbidden_length,
        parity_ok=report.parity_ok,
        red_component_parity_ok=report.red_component_parity_ok,
        mono_cycle=(
            {"color": report.mono_cycle.color, "vertices": list(report.mono_cycle.vertices)}
            if report.mono_cycle
            else None
        ),
        nodes=report.nodes,
    )


@app.post("/ramsey", response_model=sc.RamseyResponse)
def ramsey(req: sc.RamseyRequest) -> sc.RamseyResponse:
    res = ramsey_search(
        req.pattern, req.k, req.m, req.n_max,
        cap=req.cap, budget=req.budget_nodes, workers=req.workers,
    )
    return sc.RamseyResponse(
        pattern=res.pattern,
        value=res.value,
        bounds=list(res.bounds),
        witness_below=(
            sc.GraphModel.from_graph(res.witness_below) if res.witness_below else None
        ),
        examined=res.colorings_examined,
        method=res.method,
    )


@app.post("/mu", response_model=sc.MuResponse)
def mu(req: sc.MuRequest) -> sc.MuResponse:
    res = mu_exact(
        req.k, req.n, sc.parse_fraction(req.beta), req.mode, workers=req.workers, cap=req.cap
    )
    return sc.MuResponse(
        value=sc.frac_str(res.value),
        beta=sc.frac_str(res.beta),
        n=res.n,
        k=res.k,
        mode=res.mode,
        arg_min=sc.GraphModel.from_graph(res.arg_min),
        examined=res.examined,
        floor_binding=res.floor_binding,
        note=res.note,
    )
