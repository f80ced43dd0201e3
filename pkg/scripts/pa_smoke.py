"""Component share and distances on a synthetic preferential-attachment network.

Corpus-scale co-authorship figures cannot be recomputed without the original
data; this run only exercises the metrics at a comparable network size.
"""

from __future__ import annotations

import argparse
import time
from dataclasses import asdict, dataclass

import networkx as nx

from bibnet.coauthor import average_path_length, connected_components, degree_distribution, diameter, graph_from_edges


@dataclass(frozen=True)
class Config:
    nodes: int = 10_000
    edges_per_node: int = 2
    seed: int = 0
    with_diameter: bool = False


def run(cfg: Config) -> dict:
    pa = nx.barabasi_albert_graph(cfg.nodes, cfg.edges_per_node, seed=cfg.seed)
    g = graph_from_edges([(str(u), str(v)) for u, v in pa.edges()], nodes=[str(i) for i in range(cfg.nodes)])
    t0 = time.perf_counter()
    comps = connected_components(g)
    out = {
        "main_share": comps.main_share,
        "average_path_length": average_path_length(g, comps.main),
        "max_degree": degree_distribution(g).max_degree,
    }
    if cfg.with_diameter:
        out["diameter"] = diameter(g, comps.main)
    out["seconds"] = round(time.perf_counter() - t0, 2)
    return out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(Config()).items():
        flag = "--" + name.replace("_", "-")
        if isinstance(value, bool):
            p.add_argument(flag, action="store_true")
        else:
            p.add_argument(flag, type=type(value), default=value)
    cfg = Config(**vars(p.parse_args()))
    for k, v in run(cfg).items():
        print(f"{k:>20}: {v}")


if __name__ == "__main__":
    main()
