"""Run the randomized oracle suites over several seeds and tabulate violations."""
import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from splitfold.oracles import SUITES


@dataclass
class SuiteConfig:
    seeds: list = field(default_factory=lambda: [7])
    kinds: list = field(default_factory=lambda: sorted(SUITES))
    count: int = 100
    out: str = ""


def run(cfg: SuiteConfig) -> list:
    rows = []
    for seed in cfg.seeds:
        for kind in cfg.kinds:
            t0 = time.perf_counter()
            res = SUITES[kind](seed, count=cfg.count)
            rows.append({"seed": seed, "kind": kind, "instances": res.instances,
                         "violations": len(res.violations), "stats": res.stats,
                         "seconds": round(time.perf_counter() - t0, 2)})
            print(f"seed={seed:<4} {kind:<13} n={res.instances:<4} "
                  f"violations={len(res.violations):<3} {res.stats} {rows[-1]['seconds']}s")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[7])
    ap.add_argument("--kinds", nargs="+", choices=sorted(SUITES), default=sorted(SUITES))
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--out", default="", help="write a JSON summary here")
    cfg = SuiteConfig(**vars(ap.parse_args()))
    rows = run(cfg)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)
    raise SystemExit(1 if any(r["violations"] for r in rows) else 0)


if __name__ == "__main__":
    main()
