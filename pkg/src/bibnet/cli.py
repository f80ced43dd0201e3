"""Command-line interface: ``bibnet <command> INPUT [options]``.

Every command prints a JSON analysis report (or writes it to ``--out``).
Exit status: 0 success, 1 computation or input error, 2 usage error.
Relative ``--out`` paths are resolved against ``$BIBNET_OUTPUT_DIR`` when
that variable is set.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from bibnet import __version__, coauthor, journalrank, mapping, paths, similarity, textnet
from bibnet.errors import BibnetError
from bibnet.formats import (
    AnalysisReport,
    export_graph,
    read_affiliation,
    read_edge_list,
    read_lines,
    read_matrix_csv,
    read_stopwords,
)
from bibnet.netcore import SimilarityMatrix, WeightVector

OUTPUT_DIR_ENV = "BIBNET_OUTPUT_DIR"


def _matrix(m: SimilarityMatrix) -> dict:
    return {"labels": list(m.labels), "values": m.dense()}


def _vector(v: WeightVector) -> dict:
    return {"labels": list(v.labels), "values": v.values}


def _bipartite_input(args):
    if args.affiliation:
        return read_affiliation(args.input)
    return read_edge_list(args.input).as_affiliation()


def _progress(args, msg: str):
    if not args.quiet:
        print(f"bibnet: {msg}", file=sys.stderr)


# -- commands ---------------------------------------------------------------


def cmd_coupling(args):
    aff = _bipartite_input(args)
    b = similarity.bibliographic_coupling(aff, weighted=args.weighted)
    if args.mask_diagonal:
        b = b.masked_diagonal()
    return {"matrix": _matrix(b), "pairs": b.masked_diagonal().pairs()}


def cmd_cocite(args):
    aff = _bipartite_input(args)
    c = similarity.cocitation(aff, weighted=args.weighted)
    result = {}
    if args.significance is not None:
        sig = similarity.cocitation_significance(c, aff.shape[0], args.significance)
        result["significant"] = [
            {"a": p.a, "b": p.b, "observed": p.observed, "expected": p.expected, "p_value": p.p_value}
            for p in sig
        ]
    if args.mask_diagonal:
        c = c.masked_diagonal()
    result.update({"matrix": _matrix(c), "pairs": c.masked_diagonal().pairs()})
    return result


def cmd_similarity(args):
    aff = _bipartite_input(args)
    overlap = similarity.bibliographic_coupling(aff.binarized()) if args.mode == "coupling" else \
        similarity.cocitation(aff.binarized())
    m = similarity.jaccard_matrix(overlap) if args.index == "jaccard" else similarity.salton_matrix(overlap)
    return {"matrix": _matrix(m), "pairs": m.masked_diagonal().pairs()}


def cmd_reader(args):
    g = read_edge_list(args.input)
    state = paths.start_state(g, args.start)
    step = paths.forward_navigation_step if args.forward else paths.reader_step
    for _ in range(args.steps):
        state = step(g, state)
    rr = paths.random_reader(g, args.start, args.steps, forward=args.forward)
    return {
        "counts": state.vector.as_dict(nonzero=True),
        "distribution": rr.vector.as_dict(nonzero=True),
        "absorbed": rr.absorbed,
        "step": rr.step,
    }


def cmd_paths(args):
    g = read_edge_list(args.input)
    m = paths.path_count_matrix(g, args.k).dense()
    entries = [
        [g.labels[i], g.labels[j], int(m[i, j])]
        for i in range(g.n) for j in range(g.n) if m[i, j]
    ]
    return {"k": args.k, "paths": entries}


def cmd_mainpath(args):
    g = read_edge_list(args.input)
    res = paths.main_path(g)
    weights = [[u, v, w] for (u, v), w in sorted(res.edge_weights.items(), key=lambda kv: _edge_key(g, kv[0]))]
    return {"scheme": res.scheme, "path": res.path, "total_paths": res.total_paths, "edge_weights": weights}


def _edge_key(g, edge):
    def pos(x):
        if x == paths.SOURCE:
            return -1
        if x == paths.SINK:
            return g.n
        return g.index(x)

    return pos(edge[0]), pos(edge[1])


def cmd_rank(args):
    include_self = not args.exclude_self
    if args.method == "pagerank":
        src = read_edge_list(args.input) if str(args.input).endswith(".tsv") else read_matrix_csv(args.input)
        tol = {} if args.tolerance is None else {"tolerance": args.tolerance}
        res = journalrank.pagerank(src, damping=args.damping, include_self=include_self, **tol)
    else:
        A = read_matrix_csv(args.input)
        fn = journalrank.influence_weights if args.method == "influence" else journalrank.geller_weights
        tol = journalrank.DEFAULT_TOL if args.tolerance is None else args.tolerance
        res = fn(A, tolerance=tol, include_self=include_self)
    return {
        "method": args.method,
        "weights": _vector(res.weights),
        "iterations": res.iterations,
        "residual": res.residual,
        "scaling": res.scaling,
    }


def cmd_importexport(args):
    A = read_matrix_csv(args.input)
    v = journalrank.import_export(A, include_self=not args.exclude_self)
    return {"ratios": _vector(v), "sum": v.total}


def cmd_ego(args):
    A = read_matrix_csv(args.input)
    impact, base = journalrank.ego_environments(A, args.seed)
    return {
        "seed": args.seed,
        "impact_environment": {"labels": list(impact.journals), "values": impact.counts},
        "knowledge_base": {"labels": list(base.journals), "values": base.counts},
    }


def cmd_coauthor(args):
    g = coauthor.coauthor_graph(read_affiliation(args.input))
    report = coauthor.connected_components(g)
    result = {"nodes": g.n, "edges": g.edge_count, "metric": args.metric}
    if args.metric == "components":
        result.update(components=[list(c) for c in report.components], main_share=report.main_share)
    elif args.metric == "diameter":
        result.update(diameter=coauthor.diameter(g, report.main), main_component_size=len(report.main))
    elif args.metric == "avgpath":
        main = report.main
        value = coauthor.average_path_length(g, main) if len(main) > 1 else 0.0
        result.update(average_path_length=value, main_component_size=len(main))
    elif args.metric == "degree":
        d = coauthor.degree_distribution(g)
        result.update(histogram=d.histogram, max_degree=d.max_degree, mean_degree=d.mean_degree)
    else:
        result.update(betweenness=_vector(coauthor.betweenness(g, normalized=args.normalized)))
    return result


def _corpus(args):
    stop = read_stopwords(args.stopwords) if args.stopwords else None
    lines = read_lines(args.input)
    docs = [(f"d{i}", line) for i, line in enumerate(lines, start=1) if line.strip()]
    return textnet.build_term_document(
        [d for _, d in docs], stopwords=stop, min_frequency=args.min_frequency, labels=[lab for lab, _ in docs]
    )


def cmd_lsa(args):
    td = _corpus(args)
    emb = textnet.lsa_embed(td, args.k, weighting=args.weighting)
    return {
        "singular_values": emb.singular_values,
        "documents": {"labels": list(emb.documents), "coordinates": emb.document_coords},
        "terms": {"labels": list(emb.terms), "coordinates": emb.term_coords},
        "document_similarity": _matrix(emb.document_similarity()),
    }


def cmd_coword(args):
    td = _corpus(args)
    m = textnet.coword_matrix(td, mode=args.mode)
    return {"matrix": _matrix(m), "pairs": m.masked_diagonal().pairs()}


def cmd_cluster(args):
    aff = _bipartite_input(args)
    c = similarity.cocitation(aff.binarized())
    kept = mapping.threshold_nodes(c, args.threshold)
    if args.index == "salton":
        s = similarity.salton_matrix(kept)
    elif args.index == "jaccard":
        s = similarity.jaccard_matrix(kept)
    else:
        s = kept
    s = s.masked_diagonal()
    clustering = mapping.cluster_similarity(s, args.linkage, args.cut)
    net = mapping.aggregate_clusters(s, clustering, args.aggregate)
    return {
        "nodes_kept": list(kept.labels),
        "clusters": [list(m) for m in net.members],
        "cluster_labels": list(net.labels),
        "cluster_edges": [[a, b, w] for a, b, w in net.edges],
    }


COMMANDS = {
    "coupling": cmd_coupling,
    "cocite": cmd_cocite,
    "similarity": cmd_similarity,
    "reader": cmd_reader,
    "paths": cmd_paths,
    "mainpath": cmd_mainpath,
    "rank": cmd_rank,
    "importexport": cmd_importexport,
    "ego": cmd_ego,
    "coauthor": cmd_coauthor,
    "lsa": cmd_lsa,
    "coword": cmd_coword,
    "cluster": cmd_cluster,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--quiet", action="store_true", help="no progress messages on standard error")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte-identical output)")

    parser = argparse.ArgumentParser(prog="bibnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"bibnet {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_text, input_help):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input", help=input_help)
        return p

    edges_help = "citation edge list (TSV)"
    for name, text in (("coupling", "bibliographic coupling counts"), ("cocite", "co-citation counts")):
        p = add(name, text, edges_help)
        p.add_argument("--affiliation", action="store_true", help="input is a rows x columns affiliation TSV")
        p.add_argument("--weighted", action="store_true", help="allow non-binary weights (scalar products)")
        p.add_argument("--mask-diagonal", action="store_true", help="zero self-couplings in the matrix")
        if name == "cocite":
            p.add_argument("--significance", type=float, metavar="ALPHA",
                           help="list pairs above independence at this level")

    p = add("similarity", "Jaccard or Salton indices", edges_help)
    p.add_argument("--index", choices=("jaccard", "salton"), required=True)
    p.add_argument("--mode", choices=("coupling", "cocitation"), default="coupling")
    p.add_argument("--affiliation", action="store_true")

    p = add("reader", "reader / random reader walk", edges_help)
    p.add_argument("--start", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--forward", action="store_true", help="follow citations forward in time")

    p = add("paths", "count citation paths of length k", edges_help)
    p.add_argument("--k", type=int, required=True)

    add("mainpath", "SPC main path", edges_help)

    p = add("rank", "journal weights", "journal matrix (CSV); edge list TSV also accepted for pagerank")
    p.add_argument("--method", choices=("influence", "geller", "pagerank"), required=True)
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--tolerance", type=float, help="convergence tolerance (default 1e-10; 1e-12 for pagerank)")
    p.add_argument("--exclude-self", action="store_true", help="drop journal self-citations")

    p = add("importexport", "import/export ratios", "journal matrix (CSV)")
    p.add_argument("--exclude-self", action="store_true")

    p = add("ego", "citation environments of one journal", "journal matrix (CSV)")
    p.add_argument("--seed", required=True)

    p = add("coauthor", "co-authorship metrics", "authors x papers affiliation (TSV)")
    p.add_argument("--metric", choices=("components", "diameter", "avgpath", "degree", "betweenness"),
                   required=True)
    p.add_argument("--normalized", action="store_true", help="normalize betweenness")

    for name, text in (("lsa", "latent semantic analysis"), ("coword", "co-word matrix")):
        p = add(name, text, "corpus, one document per line")
        p.add_argument("--stopwords", help="stop word file, one token per line (default: bundled English list)")
        p.add_argument("--min-frequency", type=int, default=1)
        if name == "lsa":
            p.add_argument("--k", type=int, required=True)
            p.add_argument("--weighting", choices=("counts", "tfidf"), default="counts")
        else:
            p.add_argument("--mode", choices=("binary", "counts"), default="binary")

    p = add("cluster", "co-citation map: threshold, cluster, aggregate", edges_help)
    p.add_argument("--threshold", type=float, default=0, help="minimum citation count per node")
    p.add_argument("--cut", type=float, required=True)
    p.add_argument("--linkage", choices=mapping.LINKAGES, default="single")
    p.add_argument("--index", choices=("salton", "jaccard", "raw"), default="salton")
    p.add_argument("--aggregate", choices=mapping.AGGREGATES, default="mean")
    p.add_argument("--affiliation", action="store_true")

    p = sub.add_parser("export", parents=[common], help="export a graph as DOT or GraphML")
    p.add_argument("input", help="citation edge list (TSV) or, with --affiliation, authors x papers TSV")
    p.add_argument("--format", choices=("dot", "graphml"), required=True)
    p.add_argument("--affiliation", action="store_true", help="export the co-authorship graph")
    return parser


def _resolve_out(out: str) -> Path:
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(args, text: str):
    if args.out:
        path = _resolve_out(args.out)
        path.write_text(text, encoding="utf-8")
        _progress(args, f"wrote {path}")
    else:
        sys.stdout.write(text)


def _parameters(args) -> dict:
    skip = {"command", "input", "out", "quiet", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        start = time.perf_counter()
        if args.command == "export":
            if args.affiliation:
                obj = coauthor.coauthor_graph(read_affiliation(args.input))
            else:
                obj = read_edge_list(args.input)
            _emit(args, export_graph(obj, args.format))
            return 0
        result = COMMANDS[args.command](args)
        timing = {"seconds": time.perf_counter() - start} if args.timing else None
        report = AnalysisReport(args.command, [str(args.input)], _parameters(args), result, timing)
        _emit(args, report.to_json())
        _progress(args, f"{args.command} done")
        return 0
    except (BibnetError, ValueError, OSError) as exc:
        print(f"bibnet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
