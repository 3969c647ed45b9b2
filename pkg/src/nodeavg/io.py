"""Plain-text graph files and report CSVs.

Graph file::

    graph v1
    nodes <n>
    edges <m>
    lift <q>                      (cluster graphs only)
    skeleton <k> <beta>           (cluster graphs only)
    node <id> <kind> <parent|-> <psi|-> <depth>
    arc <src> <dst> <coef> <exp>
    end
    cluster <node> <skeleton node>
    e <u> <v> [<exp> <self 0|1>]

Edge lines list u < v; the exponent is the label read from u. The label
read from v follows from the clusters and the skeleton.
"""
import csv
from fractions import Fraction

import numpy as np

from .cluster import ClusterGraph, ClusterTreeSkeleton, SkeletonEdge, SkeletonNode
from .errors import InputError
from .graph import Graph

MAGIC = "graph v1"

FIELDS = ["graph_id", "algorithm", "seed", "n", "m", "avg_v", "avg_e", "worst", "exp_v_max"]
RATIONAL = ("avg_v", "avg_e", "exp_v_max")


def write_graph(obj, fh):
    cg = obj if isinstance(obj, ClusterGraph) else None
    g = cg.graph if cg is not None else obj
    w = fh.write
    w(f"{MAGIC}\nnodes {g.n}\nedges {g.m}\n")
    if cg is not None:
        sk = cg.skeleton
        w(f"lift {cg.lift_order}\n")
        w(f"skeleton {sk.k} {sk.beta}\n")
        for x in sk.nodes:
            parent = "-" if x.parent is None else x.parent
            psi = "-" if x.psi is None else x.psi
            w(f"node {x.id} {x.kind} {parent} {psi} {x.depth}\n")
        for e in sk.edges:
            w(f"arc {e.src} {e.dst} {e.coef} {e.exp}\n")
        w("end\n")
        w("".join(f"cluster {v} {c}\n" for v, c in enumerate(cg.cluster_of.tolist())))
        rows = zip(g.edges[:, 0].tolist(), g.edges[:, 1].tolist(), cg.exp_fwd.tolist(),
                   cg.self_flag.astype(int).tolist())
        w("".join(f"e {u} {v} {x} {s}\n" for u, v, x, s in rows))
    else:
        w("".join(f"e {u} {v}\n" for u, v in g.edges.tolist()))


def _opt(tok):
    return None if tok == "-" else int(tok)


def read_graph(fh):
    """Parse a graph file; returns a ClusterGraph when clusters are present, else a Graph."""
    lines = (ln.split() for ln in fh)
    first = next(lines, None)
    if first is None or " ".join(first) != MAGIC:
        raise InputError("not a 'graph v1' file")
    n = m = None
    q = 1
    sk_head, sk_nodes, sk_edges = None, [], []
    clusters = {}
    edges, exps, selfs = [], [], []
    in_skeleton = False
    for no, tok in enumerate(lines, start=2):
        if not tok or tok[0].startswith("#"):
            continue
        try:
            key = tok[0]
            if in_skeleton:
                if key == "node":
                    sk_nodes.append(SkeletonNode(int(tok[1]), tok[2], _opt(tok[3]), _opt(tok[4]), int(tok[5])))
                elif key == "arc":
                    sk_edges.append(SkeletonEdge(*(int(x) for x in tok[1:5])))
                elif key == "end":
                    in_skeleton = False
                else:
                    raise InputError(f"unexpected {key!r} inside skeleton block")
            elif key == "nodes":
                n = int(tok[1])
            elif key == "edges":
                m = int(tok[1])
            elif key == "lift":
                q = int(tok[1])
            elif key == "skeleton":
                sk_head = (int(tok[1]), int(tok[2]))
                in_skeleton = True
            elif key == "cluster":
                clusters[int(tok[1])] = int(tok[2])
            elif key == "e":
                edges.append((int(tok[1]), int(tok[2])))
                if len(tok) >= 5:
                    exps.append(int(tok[3]))
                    selfs.append(int(tok[4]))
            else:
                raise InputError(f"unknown record {key!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise InputError(f"line {no}: {exc}") from None
            raise InputError(f"line {no}: malformed record {' '.join(tok)!r}") from None
    if n is None:
        raise InputError("missing 'nodes' line")
    if m is not None and m != len(edges):
        raise InputError(f"header says {m} edges, file has {len(edges)}")
    g = Graph(n, edges)
    if not clusters:
        return g
    if sk_head is None:
        raise InputError("cluster lines need a skeleton block")
    if len(clusters) != n:
        raise InputError(f"{n - len(clusters)} nodes have no cluster")
    sk = ClusterTreeSkeleton(sk_head[0], sk_head[1], sk_nodes, sk_edges)
    cluster_of = np.array([clusters[v] for v in range(n)], dtype=np.int64)
    cg = ClusterGraph(g, sk, cluster_of, q)
    if exps:
        order = {(min(a, b), max(a, b)): i for i, (a, b) in enumerate(edges)}
        for e, (u, v) in enumerate(g.edges.tolist()):
            i = order[(u, v)]
            a, b = edges[i]
            # the file's exponent is read from its first endpoint
            want = cg.exp_fwd[e] if a == u else cg.exp_bwd[e]
            if exps[i] != want or bool(selfs[i]) != bool(cg.self_flag[e]):
                raise InputError(f"edge ({a}, {b}) label does not match the skeleton")
    return cg


def save_graph(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        write_graph(obj, fh)


def load_graph(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return read_graph(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _decimal(x):
    return f"{float(x):.9f}"


def to_csv_row(row):
    out = {}
    for key, val in row.items():
        if isinstance(val, Fraction):
            out[key] = _decimal(val)
            out[f"{key}_num"] = val.numerator
            out[f"{key}_den"] = val.denominator
        else:
            out[key] = val
    return out


def write_rows(rows, fh, fields=FIELDS):
    """CSV with the given columns first, then any extra columns in sorted order.

    Every rational gets a 9-digit decimal column followed by exact
    ``_num`` and ``_den`` columns.
    """
    keys = list(fields) + sorted({k for r in rows for k in r} - set(fields))
    exact = set(RATIONAL) | {k for r in rows for k, v in r.items() if isinstance(v, Fraction)}
    header = []
    for k in keys:
        header += [k, f"{k}_num", f"{k}_den"] if k in exact else [k]
    writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(to_csv_row(r) for r in rows)


def read_rows(fh):
    """Parse a CSV written by :func:`write_rows`; rationals come back exact."""
    rows = []
    for raw in csv.DictReader(fh):
        row = {}
        for key, val in raw.items():
            if key.endswith("_num") or key.endswith("_den"):
                continue
            if f"{key}_num" in raw and raw[f"{key}_num"] != "":
                row[key] = Fraction(int(raw[f"{key}_num"]), int(raw[f"{key}_den"]))
            else:
                row[key] = val
        rows.append(row)
    return rows
