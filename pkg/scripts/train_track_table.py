"""Exponent table for the train track maps in the bundled corpus."""
import argparse
from dataclasses import dataclass
from fractions import Fraction

from splitfold.errors import SplitfoldError
from splitfold.fixture import corpus_files, corpus_text, parse_fixture
from splitfold.traintrack import (TrainTrackMap, analyze, crossing_filling_check, is_primitive,
                                  natural_edges, tile_nesting_trace, transition_matrix,
                                  validate_tt)


@dataclass
class TableConfig:
    nu: Fraction = Fraction(1)
    nesting: bool = False


def eg_maps():
    for f in corpus_files():
        for name, entry in parse_fixture(corpus_text(f)).maps.items():
            F = entry.morphism
            try:
                tt = validate_tt(F)
            except SplitfoldError:
                continue
            if isinstance(tt, TrainTrackMap) and is_primitive(transition_matrix(F)):
                yield f"{f}:{name}", F


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nu", type=Fraction, default=Fraction(1))
    ap.add_argument("--nesting", action="store_true", help="also print tile nesting traces")
    cfg = TableConfig(**vars(ap.parse_args()))
    print(f"{'map':<22} {'n':>2} {'lambda':>10} {'kappa':>5} {'omega':>5} {'tau_lower':>10} crossing-filling")
    for label, F in eg_maps():
        rep = analyze(F)
        cf = crossing_filling_check(F, rep.kappa, rep.omega).ok
        print(f"{label:<22} {F.domain.rank:>2} {float(rep.lam.lower):>10.6f} {rep.kappa:>5} {rep.omega:>5} "
              f"{str(rep.tau_lower(cfg.nu)):>10} {cf}")
        if cfg.nesting:
            for E in natural_edges(F):
                try:
                    tr = tile_nesting_trace(F, E)
                except SplitfoldError as err:
                    print(f"    {E}: {err}")
                    continue
                print(f"    {E[0][0]}: power={tr.power} kurosh={tr.kurosh}")


if __name__ == "__main__":
    main()
