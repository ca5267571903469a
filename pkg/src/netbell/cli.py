"""Command-line front end: ``netbell <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import boxworld, experiment, network, oracle
from .chained import chained_bounds
from .network import named_graph


class UsageError(Exception):
    pass


def _label(edge) -> str:
    return f"{edge[0] + 1}{edge[1] + 1}"


def _parse_edge(text: str) -> tuple[int, int]:
    """``"1-2"`` or ``"12"`` (one-based) to a zero-based edge."""
    parts = text.split("-") if "-" in text else list(text)
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise UsageError(f"cannot parse edge {text!r}; use e.g. 1-2")
    i, j = (int(p) - 1 for p in parts)
    return (min(i, j), max(i, j))


def _graph(name: str) -> network.NetworkGraph:
    try:
        return named_graph(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _k(k: int) -> int:
    if k < 2:
        raise UsageError(f"--k must be >= 2, got {k}")
    return k


def cmd_bounds(args) -> tuple[dict, str]:
    b = chained_bounds(_k(args.k))
    d = {"k": args.k, **b.to_dict()}
    text = f"k={args.k}  B_L={b.local:g}  B_S={b.svetlichny:g}  B_Q={b.quantum:.6f}  B_N={b.noise:g}"
    return d, text


def cmd_visibility(args) -> tuple[dict, str]:
    g = _graph(args.graph)
    b = chained_bounds(_k(args.k))
    v = network.critical_visibility(g, b)
    d = {
        "graph": args.graph,
        "k": args.k,
        "critical_visibility": v,
        "witnessable": v < 1,
        "foil_bound": network.svetlichny_bound(g, b),
        "quantum_total": network.quantum_total(g, b, 1.0),
    }
    note = "" if v < 1 else "  (exceeds 1: not witnessable)"
    return d, f"{args.graph}, k={args.k}: critical visibility {v:.4f}{note}"


def cmd_optimize_k(args) -> tuple[dict, str]:
    g = _graph(args.graph)
    if args.kmax < 2:
        raise UsageError(f"--kmax must be >= 2, got {args.kmax}")
    k, v = network.optimize_k(g, (2, args.kmax))
    return {"graph": args.graph, "k": k, "v": v}, f"{args.graph}: best k = {k}, critical visibility {v:.4f}"


def _report_text(rep: experiment.RunReport) -> str:
    lines = [f"mode: {rep.mode}   k = {rep.k}"]
    for r in rep.per_edge:
        err = f" +- {r.stderr:.4f}" if r.stderr else ""
        lines.append(f"  S^{_label(r.edge)} = {r.score:.4f}{err}")
    err = f" +- {rep.total_error:.4f}" if rep.total_error else ""
    lines.append(f"  total = {rep.total:.4f}{err}   bound = {rep.bound:g}   ratio = {rep.ratio:.4f}")
    if rep.sigma is not None:
        lines.append(f"  violation: {rep.sigma:.1f} standard deviations")
    lines.append("  witnessing: " + ("yes" if rep.witnessing else "no"))
    return "\n".join(lines)


def _load_config(args) -> experiment.ExperimentConfig:
    if args.config:
        cfg = experiment.ExperimentConfig.from_json(Path(args.config).read_text())
    else:
        cfg = experiment.ExperimentConfig.homogeneous(args.graph, _k(args.k), args.v, args.lam)
    overrides = {}
    if args.events is not None:
        overrides["events_per_input"] = args.events
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        d = cfg.to_dict()
        d["monte_carlo"].update(overrides)
        cfg = experiment.ExperimentConfig.from_dict(d)
    return cfg


def cmd_simulate(args) -> tuple[dict, str]:
    rep = experiment.simulate(_load_config(args), workers=args.workers)
    return rep.to_dict(), _report_text(rep)


def cmd_fit(args) -> tuple[dict, str]:
    if args.score:
        scores = {}
        for item in args.score:
            edge, _, val = item.partition("=")
            scores[_parse_edge(edge)] = float(val)
    else:
        data = experiment.load_transcribed()
        scores = {tuple(c["edge"]): c["score"] for c in data["chsh"]}
    try:
        fit = experiment.fit_visibilities(scores, _graph(args.graph), range(2, args.kmax + 1))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    lines = ["white-noise fit (lambda = 0):"]
    lines += [f"  v_{_label(e)} = {v:.4f}" for e, v in sorted(fit.visibilities.items())]
    for k, rep in fit.by_k.items():
        verdict = "witnessing" if rep.witnessing else "no violation"
        lines.append(f"  k={k}: total {rep.total:.3f} vs bound {rep.bound:g} -> {verdict}")
    return fit.to_dict(), "\n".join(lines)


def cmd_oracle(args) -> tuple[dict, str]:
    if args.expr:
        expr = oracle.ExpressionTable.from_json(Path(args.expr).read_text())
    else:
        expr = oracle.ExpressionTable.chained(_graph(args.graph), _k(args.k))
    try:
        res = oracle.oracle_max(expr, workers=args.workers)
        loc = oracle.local_max(expr)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    d = res.to_dict()
    d["local_max"] = float(loc)
    text = (
        f"foil-model maximum {res.bound} (excluded party {res.excluded_vertex + 1}); "
        f"local maximum {loc}"
    )
    return d, text


def cmd_decompose_check(args) -> tuple[dict, str]:
    cert = boxworld.verify_paper_decomposition(args.w)
    lines = [f"w = {cert.w:.7f}   max reconstruction error = {cert.max_reconstruction_error:.2e}"]
    for c in cert.components:
        lines.append(
            f"  weight {c.weight:.6f}: PR12({c.left_v:g}) x PR23({c.right_v:g}); "
            f"pair {_label(c.communicating_pair)} communicates, edge {_label(c.local_edge)} local={c.local_edge_is_local}"
        )
    lines.append("certificate: " + ("OK" if cert.ok else "FAILED: " + "; ".join(cert.failures)))
    return cert.to_dict(), "\n".join(lines)


def cmd_reproduce(args) -> tuple[dict, str]:
    rep = experiment.reproduce()
    lines = ["Triangle, chained games (svet/ratio columns transcribed, not computed)", ""]
    lines.append(f"{'k':>2} {'bound':>6} {'svet':>8} {'ratio(t)':>9} {'ratio(c)':>9} {'sigma(c)':>9} {'sigma(q)':>9}")
    for r in rep["table"]:
        sq = "" if r["sigma_quoted"] is None else str(r["sigma_quoted"])
        lines.append(
            f"{r['k']:>2} {r['bound']:>6g} {r['svet_transcribed']:>8.3f} {r['ratio_transcribed']:>9.4f} "
            f"{r['ratio_recomputed']:>9.4f} {r['sigma_recomputed']:>9.1f} {sq:>9}"
        )
    lines.append("")
    lines.append("critical visibilities:")
    for name, v in rep["headline_visibilities"].items():
        lines.append(f"  {name:<14} {v:.4f}")
    lines.append(f"decomposition certificate: {'OK' if rep['decomposition']['ok'] else 'FAILED'}")
    lines.append("oracle vs closed form:")
    for r in rep["oracle_vs_closed_form"]:
        lines.append(f"  {r['graph']:<8} k={r['k']}: oracle {r['oracle']:g}, closed form {r['closed_form']:g}, local {r['local']:g}")
    if rep["flags"]:
        lines.append("flags:")
        lines += [f"  - {f}" for f in rep["flags"]]
    return rep, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netbell", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
        p.set_defaults(func=func)
        return p

    p = add("bounds", cmd_bounds, "local/Svetlichny/quantum/noise bounds of the chained game")
    p.add_argument("--k", type=int, required=True)

    p = add("visibility", cmd_visibility, "critical visibility of a graph for the chained game")
    p.add_argument("--graph", default="triangle")
    p.add_argument("--k", type=int, required=True)

    p = add("optimize-k", cmd_optimize_k, "number of settings minimising the critical visibility")
    p.add_argument("--graph", default="triangle")
    p.add_argument("--kmax", type=int, default=10)

    p = add("simulate", cmd_simulate, "exact or sampled network simulation")
    p.add_argument("--config", help="ExperimentConfig JSON file")
    p.add_argument("--graph", default="triangle")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--v", type=float, default=1.0, help="homogeneous visibility when no --config")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0, help="coloured-noise weight")
    p.add_argument("--events", type=int, help="events per input pair (0 = exact)")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = add("fit", cmd_fit, "white-noise visibilities from CHSH scores")
    p.add_argument("--score", action="append", metavar="EDGE=S", help="e.g. 1-2=2.643; default: transcribed values")
    p.add_argument("--graph", default="triangle")
    p.add_argument("--kmax", type=int, default=5)

    p = add("oracle", cmd_oracle, "brute-force foil-model maximum on a 3-node graph")
    p.add_argument("--graph", default="triangle")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--expr", help="ExpressionTable JSON file")
    p.add_argument("--workers", type=int, default=1)

    p = add("decompose-check", cmd_decompose_check, "verify the parallel-Tsirelson decomposition")
    p.add_argument("--w", type=float, default=boxworld.DECOMPOSITION_WEIGHT)

    add("reproduce", cmd_reproduce, "recompute the triangle results table and check transcribed values")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data, text = args.func(args)
    except (UsageError, experiment.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(data, indent=2, default=str) if args.json else text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
