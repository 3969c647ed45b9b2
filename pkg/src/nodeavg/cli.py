"""Command line: generate graphs, run experiments, verify constructions, sweep sizes, re-read reports.

Exit codes: 0 ok, 1 a validator or check failed, 2 bad input.
Set NODEAVG_THREADS to run trials in parallel; output order never changes.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import algorithms as algos
from . import generators as gens
from .cluster import (BUDGET_EXCEEDED, ClusterGraph, build_base_graph, build_skeleton,
                      cycle_stats, independence_number_exact, lift_graph, random_lift, validate_family)
from .errors import ContractViolation, InputError, RounderContractError
from .graph import canonical_view_hash, radius_view
from .io import load_graph, read_rows, write_graph, write_rows
from .iso import find_isomorphism, iter_treelike_pairs, verify_isomorphism
from .metrics import report

OK, FAILED, BAD_INPUT = 0, 1, 2
SWEEP_FIELDS = ["n", "size", "algorithm", "avg_v", "avg_e", "worst"]


# ---------------------------------------------------------------- graph sources

def _parse_params(text):
    params = {}
    for item in filter(None, text.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"expected key=value, got {item!r}")
        params[key.strip()] = val.strip()
    return params


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise InputError(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise InputError(f"{key} must be an integer") from None


def _float(params, key):
    try:
        return float(Fraction(params[key]))
    except KeyError:
        raise InputError(f"missing parameter {key!r}") from None
    except ValueError:
        raise InputError(f"{key} must be a number") from None


def make_ct(k, beta, lift=1, seed=0, strict=True):
    cg = build_base_graph(build_skeleton(k, beta), strict=strict)
    return random_lift(cg, lift, seed) if lift != 1 else cg


def generate(source):
    """Graph from ``model:key=value,...`` (gnp, regular, ct, path, cycle, complete, bipartite, star)."""
    model, _, rest = source.partition(":")
    p = _parse_params(rest)
    seed = _int(p, "seed", 0)
    if model == "gnp":
        return gens.gnp(_int(p, "n"), _float(p, "p"), seed)
    if model == "regular":
        return gens.random_regular(_int(p, "n"), _int(p, "d"), seed)
    if model == "ct":
        return make_ct(_int(p, "k"), _int(p, "beta"), _int(p, "lift", 1), seed, not _int(p, "loose", 0))
    if model == "path":
        return gens.path_graph(_int(p, "n"))
    if model == "cycle":
        return gens.cycle_graph(_int(p, "n"))
    if model == "complete":
        return gens.complete_graph(_int(p, "n"))
    if model == "bipartite":
        return gens.complete_bipartite(_int(p, "a"), _int(p, "b"))
    if model == "star":
        return gens.star_graph(_int(p, "leaves"))
    raise InputError(f"unknown graph model {model!r}")


def load_source(args):
    if getattr(args, "graph", None):
        return load_graph(args.graph), os.path.basename(args.graph)
    if getattr(args, "gen", None):
        return generate(args.gen), args.gen
    raise InputError("give --graph FILE or --gen MODEL:PARAMS")


def _plain(obj):
    return obj.graph if isinstance(obj, ClusterGraph) else obj


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


# ---------------------------------------------------------------- gen

def cmd_gen(args):
    if args.model == "ct":
        obj = make_ct(args.k, args.beta, args.lift, args.seed, not args.loose)
    elif args.model == "gnp":
        obj = gens.gnp(args.n, float(Fraction(args.p)), args.seed)
    else:
        obj = gens.random_regular(args.n, args.d, args.seed)
    fh, close = _open_out(args.out)
    try:
        write_graph(obj, fh)
    finally:
        if close:
            fh.close()
    g = _plain(obj)
    print(f"wrote {g.n} nodes, {g.m} edges", file=sys.stderr)
    return OK


# ---------------------------------------------------------------- run

def _threads():
    try:
        return max(1, int(os.environ.get("NODEAVG_THREADS", "1")))
    except ValueError:
        raise InputError("NODEAVG_THREADS must be an integer") from None


def run_trials(cfg, g, seeds, engine=algos.KERNEL):
    def one(seed):
        return algos.execute(cfg, g, seed, engine)
    workers = _threads()
    if workers == 1:
        return [one(s) for s in seeds]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(one, seeds))


def _removal_fractions(trace):
    hist = trace.info.get("history") or []
    out = []
    for h in hist:
        before, removed = (h["edges"], h["removed"]) if isinstance(h, dict) else h
        if before:
            out.append(Fraction(removed, before))
    return out


def extra_columns(obj, cfg, trace):
    extra = {}
    fracs = _removal_fractions(trace) if cfg.variant in ("luby-mis", "ruling22", "rand-mm", "det-mm") else []
    if fracs:
        extra["iterations"] = len(fracs)
        extra["removal_fractions"] = ";".join(f"{float(x):.9f}" for x in fracs)
        extra["min_removal_fraction"] = min(fracs)
    if isinstance(obj, ClusterGraph) and cfg.variant in ("luby-mis", "linial-mis"):
        s0 = obj.members(0)
        inside = sum(trace.node_output[v] == 1 for v in s0.tolist())
        extra["s0_fraction"] = Fraction(int(inside), max(s0.size, 1))
    if trace.timed_out:
        extra["timed_out"] = 1
    return extra


def _trace_json(trace):
    return json.dumps({"seed": trace.seed, "kind": trace.problem_kind,
                       "rounds_elapsed": trace.rounds_elapsed, "timed_out": trace.timed_out,
                       "node_round": trace.node_round.tolist(), "edge_round": trace.edge_round.tolist(),
                       "node_output": trace.node_output, "edge_output": trace.edge_output},
                      separators=(",", ":"))


def _config(args):
    return algos.AlgorithmConfig(args.algo, r=args.r, mode=args.mode,
                                 rounder=algos.ROUNDERS[args.rounder]).check()


def cmd_run(args):
    if args.trials < 1:
        raise InputError("trials must be at least 1")
    cfg = _config(args)
    obj, graph_id = load_source(args)
    g = _plain(obj)
    seeds = list(range(args.seed, args.seed + args.trials))
    traces = run_trials(cfg, g, seeds, args.engine)
    status = OK
    rows = []
    for t in traces:
        problems = algos.check(cfg, g, t)
        if problems:
            status = FAILED
            print(f"seed {t.seed}: {problems[0]}", file=sys.stderr)
    complete = [t for t in traces if not t.timed_out]
    for t in traces:
        row = {"graph_id": graph_id, "algorithm": cfg.variant, "seed": t.seed, "n": g.n, "m": g.m}
        if not t.timed_out:
            r = report([t], g)
            row.update(avg_v=r.avg_v, avg_e=r.avg_e, worst=r.worst, exp_v_max=r.exp_v_max)
        row.update(extra_columns(obj, cfg, t))
        rows.append(row)
    if complete:
        agg = report(complete, g)
        rows.append({"graph_id": graph_id, "algorithm": cfg.variant, "seed": "all", "n": g.n, "m": g.m,
                     "avg_v": agg.avg_v, "avg_e": agg.avg_e, "worst": agg.worst,
                     "exp_v_max": agg.exp_v_max, "trials": agg.trials})
    fh, close = _open_out(args.out)
    try:
        write_rows(rows, fh)
    finally:
        if close:
            fh.close()
    if args.traces:
        with open(args.traces, "w", encoding="utf-8") as tf:
            for t in traces:
                tf.write(_trace_json(t) + "\n")
    return status


# ---------------------------------------------------------------- verify

def _need_cluster(obj):
    if not isinstance(obj, ClusterGraph):
        raise InputError("this check needs a cluster graph (ct model or a file with clusters)")
    return obj


def verify_family(args):
    cg = _need_cluster(load_source(args)[0])
    rep = validate_family(cg)
    for entry in rep[:20]:
        print(json.dumps(entry))
    print(f"family: {'pass' if not rep else 'FAIL'} ({len(rep)} violations, n={cg.n})")
    return OK if not rep else FAILED


def verify_iso(args):
    cg = _need_cluster(load_source(args)[0])
    found = 0
    status = OK
    for v0, v1 in iter_treelike_pairs(cg, args.k, args.seed):
        phi = find_isomorphism(cg, args.k, v0, v1)
        ok = verify_isomorphism(cg, args.k, v0, v1, phi)
        same = canonical_view_hash(radius_view(cg, v0, args.k)) == canonical_view_hash(radius_view(cg, v1, args.k))
        print(f"pair ({v0}, {v1}): size {len(phi)}, verified {ok}, hashes equal {same}")
        status = status if ok and same else FAILED
        found += 1
        if found >= args.pairs:
            break
    if not found:
        print("iso: no tree-like pair found")
        return FAILED
    print(f"iso: {'pass' if status == OK else 'FAIL'} ({found} pairs)")
    return status


def verify_cycles(args):
    obj = load_source(args)[0]
    base = _plain(obj)
    if args.lifts:
        fracs = [cycle_stats(lift_graph(base, args.q, args.seed + i), args.ell) for i in range(args.lifts)]
        q = args.q
    else:
        fracs = [cycle_stats(base, args.ell)]
        q = obj.lift_order if isinstance(obj, ClusterGraph) else 1
    mean = sum(fracs, Fraction(0)) / len(fracs)
    bound = Fraction(base.max_degree ** args.ell, q)
    sd = float(np.std([float(x) for x in fracs]))
    print(f"cycles: mean fraction {float(mean):.9f} over {len(fracs)} graph(s), sd {sd:.6f}")
    print(f"reference Delta^ell/q = {float(bound):.9f}")
    if isinstance(obj, ClusterGraph):
        print(f"reference 1/beta = {1 / obj.skeleton.beta:.9f}")
    ok = mean <= bound
    print(f"cycles: {'pass' if ok else 'FAIL'}")
    return OK if ok else FAILED


def clique_pair_components(cg, c):
    """Connected components of g[S(c)], in order of their smallest node."""
    members = set(cg.members(c).tolist())
    seen, comps = set(), []
    for s in sorted(members):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [s], [s]
        while stack:
            x = stack.pop()
            for y in cg.graph.adj[x]:
                if y in members and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def alpha_check(cg, c, samples, budget=200_000):
    """Exact alpha of sampled components of g[S(c)] against size / beta^psi.

    Returns a list of (component size, alpha or BUDGET_EXCEEDED, bound).
    """
    node = cg.skeleton.nodes[c]
    if node.psi is None:
        raise InputError("S(c0) is an independent set; pick another cluster")
    clique = cg.skeleton.beta ** node.psi
    out = []
    for comp in clique_pair_components(cg, c)[:samples]:
        alpha = independence_number_exact(cg.graph, comp, budget)
        out.append((len(comp), alpha, Fraction(len(comp), clique)))
    return out


def verify_alpha(args):
    cg = _need_cluster(load_source(args)[0])
    clusters = [args.cluster] if args.cluster is not None else [x.id for x in cg.skeleton.nodes if x.psi is not None]
    status = OK
    for c in clusters:
        results = alpha_check(cg, c, args.samples)
        for size, alpha, bound in results:
            if alpha is BUDGET_EXCEEDED:
                print(f"cluster {c}: component of {size}: budget exceeded, structural bound {bound}")
                continue
            ok = alpha <= bound
            status = status if ok else FAILED
            print(f"cluster {c}: component of {size}: alpha {alpha} <= {bound}: {ok}; ratio {float(alpha / bound):.6f}")
    print(f"alpha: {'pass' if status == OK else 'FAIL'}")
    return status


# ---------------------------------------------------------------- sweep

def sweep_graph(model, size, seed, args):
    if model == "gnp":
        return gens.gnp(size, args.avg_degree / size, seed)
    if model == "regular":
        return gens.random_regular(size, args.d, seed)
    if model == "ct":
        return random_lift(build_base_graph(build_skeleton(args.k, args.beta)), size, seed)
    raise InputError(f"unknown sweep model {model!r}")


def cmd_sweep(args):
    sizes = [int(x) for x in args.sizes.split(",")]
    rows = []
    status = OK
    for size in sizes:
        for algo in args.algo:
            cfg = algos.AlgorithmConfig(algo, r=args.r, mode=args.mode).check()
            traces = []
            for i in range(args.trials):
                obj = sweep_graph(args.model, size, args.seed + i, args)
                g = _plain(obj)
                t = algos.execute(cfg, g, args.seed + i)
                if algos.check(cfg, g, t):
                    status = FAILED
                traces.append((g, t))
            reps = [report([t], g) for g, t in traces]
            k = len(reps)
            rows.append({"n": traces[0][0].n, "size": size, "algorithm": algo,
                         "avg_v": sum((r.avg_v for r in reps), Fraction(0)) / k,
                         "avg_e": sum((r.avg_e for r in reps), Fraction(0)) / k,
                         "worst": max(r.worst for r in reps)})
    fh, close = _open_out(args.out)
    try:
        write_rows(rows, fh, SWEEP_FIELDS)
    finally:
        if close:
            fh.close()
    if args.svg:
        plot_sweep(rows, args.svg)
    return status


def plot_sweep(rows, path):
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "nodeavg"
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for algo in sorted({r["algorithm"] for r in rows}):
        pts = [(r["n"], float(r["avg_v"])) for r in rows if r["algorithm"] == algo]
        ax.plot(*zip(*pts), marker="o", label=algo)
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("avg_v")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------- report

def cmd_report(args):
    with open(args.csv, encoding="utf-8") as fh:
        rows = read_rows(fh)
    groups = {}
    for r in rows:
        groups.setdefault((r.get("graph_id", ""), r.get("algorithm", "")), []).append(r)
    status = OK
    for (gid, algo), rs in groups.items():
        trials = [r for r in rs if r.get("seed") != "all" and isinstance(r.get("avg_v"), Fraction)]
        agg = [r for r in rs if r.get("seed") == "all"]
        if not trials:
            continue
        avg_v = sum((r["avg_v"] for r in trials), Fraction(0)) / len(trials)
        avg_e = sum((r["avg_e"] for r in trials), Fraction(0)) / len(trials)
        worst = max(int(r["worst"]) for r in trials)
        line = f"{gid} {algo}: trials {len(trials)}, avg_v {float(avg_v):.6f}, avg_e {float(avg_e):.6f}, worst {worst}"
        if agg:
            a = agg[0]
            same = a["avg_v"] == avg_v and a["avg_e"] == avg_e and int(a["worst"]) == worst
            line += f", aggregate row {'matches' if same else 'DIFFERS'}"
            status = status if same else FAILED
        print(line)
    return status


# ---------------------------------------------------------------- parser

def _source_args(p):
    p.add_argument("--graph", help="graph file")
    p.add_argument("--gen", help="generator, e.g. gnp:n=1000,p=0.01,seed=1 or ct:k=1,beta=10,lift=5,seed=7")


def _algo_args(p):
    p.add_argument("--r", type=int, default=3, help="sinkless orientation parameter (>= 3)")
    p.add_argument("--mode", default=algos.LOG_DELTA, choices=algos.MODES, help="det-ruling iteration count")


def build_parser():
    ap = argparse.ArgumentParser(prog="nodeavg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a graph file")
    p.add_argument("model", choices=["ct", "gnp", "regular"])
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--beta", type=int, default=6)
    p.add_argument("--lift", type=int, default=1)
    p.add_argument("--loose", action="store_true", help="skip the 4(k+1) < beta requirement")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", default="0.05")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run trials, validate, write a CSV report")
    _source_args(p)
    p.add_argument("--algo", required=True, choices=list(algos.ALGORITHMS))
    _algo_args(p)
    p.add_argument("--rounder", default="greedy", choices=list(algos.ROUNDERS))
    p.add_argument("--engine", default=algos.KERNEL, choices=algos.ENGINES)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", help="CSV path (default stdout)")
    p.add_argument("--traces", help="write traces as JSON lines")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check constructions")
    vsub = p.add_subparsers(dest="check", required=True)
    v = vsub.add_parser("family", help="exact family membership")
    _source_args(v)
    v.set_defaults(func=verify_family)
    v = vsub.add_parser("iso", help="isomorphism of tree-like views")
    _source_args(v)
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--pairs", type=int, default=1)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=verify_iso)
    v = vsub.add_parser("cycles", help="fraction of nodes on short cycles")
    _source_args(v)
    v.add_argument("--ell", type=int, default=4)
    v.add_argument("--lifts", type=int, default=0, help="average over this many random lifts of the input")
    v.add_argument("--q", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=verify_cycles)
    v = vsub.add_parser("alpha", help="independence numbers inside clusters")
    _source_args(v)
    v.add_argument("--cluster", type=int)
    v.add_argument("--samples", type=int, default=5)
    v.set_defaults(func=verify_alpha)

    p = sub.add_parser("sweep", help="averaged complexity across sizes")
    p.add_argument("--algo", action="append", required=True, choices=list(algos.ALGORITHMS))
    _algo_args(p)
    p.add_argument("--model", default="gnp", choices=["gnp", "regular", "ct"])
    p.add_argument("--sizes", required=True, help="comma-separated n (lift orders for ct)")
    p.add_argument("--avg-degree", type=float, default=10.0)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--beta", type=int, default=12)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.add_argument("--svg", help="also draw avg_v against n")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="re-aggregate a run CSV")
    p.add_argument("csv")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (ContractViolation, RounderContractError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
