"""Print values computed from the bundled fixtures next to their reference values."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from bibnet import fixture_path
from bibnet.coauthor import connected_components, undirected
from bibnet.formats import read_edge_list, read_matrix_csv
from bibnet.journalrank import import_export, influence_weights
from bibnet.paths import main_path, path_count_matrix, random_reader
from bibnet.similarity import bibliographic_coupling, cocitation


@dataclass(frozen=True)
class Config:
    citation_fixture: str = "nrays12.tsv"
    journal_fixture: str = "journals5.csv"
    reader_start: str = "12"
    reader_steps: int = 2


def report(label: str, got, expected) -> None:
    mark = "ok " if got == expected else "DIFF"
    print(f"[{mark}] {label}: {got}  (reference {expected})")


def run(cfg: Config) -> None:
    g = read_edge_list(fixture_path(cfg.citation_fixture))
    rr = random_reader(g, cfg.reader_start, cfg.reader_steps)
    dist = {k: Fraction(v) for k, v in rr.vector.as_dict(nonzero=True).items()}
    report("random reader", dist, {"7": Fraction(1, 4), "8": Fraction(1, 2), "9": Fraction(1, 4)})
    report("walks 12 -> 8 of length 2", int(path_count_matrix(g, 2).get("12", "8")), 2)

    aff = g.as_affiliation()
    b, c = bibliographic_coupling(aff), cocitation(aff)
    report("coupling (3, 4)", int(b.get("3", "4")), 2)
    report("co-citation (8, 9)", int(c.get("8", "9")), 3)
    report("component sizes", connected_components(undirected(g)).sizes, [8, 4])
    print(f"       SPC main path: {main_path(g).path}")

    A = read_matrix_csv(fixture_path(cfg.journal_fixture))
    report("first-step weight sum", round(import_export(A).total, 2), 4.76)
    w = influence_weights(A).weights
    report("influence weights", [round(float(x), 2) for x in w.values], [0.76, 1.33, 1.03, 0.64, 1.25])


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--start", default=Config.reader_start)
    p.add_argument("--steps", type=int, default=Config.reader_steps)
    args = p.parse_args()
    run(Config(reader_start=args.start, reader_steps=args.steps))


if __name__ == "__main__":
    main()
