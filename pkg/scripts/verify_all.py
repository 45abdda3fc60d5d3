"""Run every registered equivalence suite; exit 1 if any disagrees.

    python3 scripts/verify_all.py --trials 50 --n 48
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from lwslab.harness.verify import SUITES, verify


@dataclass
class VerifyConfig:
    n: int = 32
    seed: int = 7
    trials: int = 25
    out_dir: str = "."


def main() -> int:
    cfg = VerifyConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=cfg.n)
    p.add_argument("--seed", type=int, default=cfg.seed)
    p.add_argument("--trials", type=int, default=cfg.trials)
    p.add_argument("--out-dir", default=cfg.out_dir)
    args = p.parse_args()
    cfg = VerifyConfig(args.n, args.seed, args.trials, args.out_dir)
    failed = 0
    for reduction, suite in SUITES.items():
        start = time.perf_counter()
        result = verify(reduction, cfg.n, cfg.seed, cfg.trials, out=f"{cfg.out_dir}/counterexample-{reduction}.json")
        print(f"{result.summary():<60} {time.perf_counter() - start:6.2f}s  {suite.about}")
        failed += not result.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
