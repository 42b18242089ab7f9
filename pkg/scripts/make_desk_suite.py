#!/usr/bin/env python3
"""Regenerate the committed desk-scale benchmark suite and its CSV.

Fifty backward chain-of-SCCs instances with cross jumps, stratified over
chain length, cycle size and jump density.  The instance files and the
benchmark CSV are committed as reproducibility artifacts; op-count columns
are deterministic, wall times are whatever this machine produced.

Usage: python3 scripts/make_desk_suite.py [--suite-dir bench/suite] [--csv bench/desk_suite.csv]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mecdec.bench import load_suite, run_suite, write_csv
from mecdec.generate import chain_of_sccs
from mecdec.model import serialize_mdp


def suite_instances():
    specs = []
    for num_sccs in (5, 8, 12, 16, 20, 28, 36, 48, 60, 80):
        for cycle_len, jump_div in ((2, 4), (3, 2), (4, 3)):
            specs.append((num_sccs, cycle_len, num_sccs // jump_div))
    # 30 combos so far; densify the mid range with extra seeds
    for num_sccs in (10, 14, 18, 24, 32, 40, 52, 64, 72, 90):
        for seed in (1, 2):
            specs.append((num_sccs, 3, num_sccs // 3, seed))
    out = []
    for combo in specs[:50]:
        num_sccs, cycle_len, jumps = combo[0], combo[1], combo[2]
        seed = combo[3] if len(combo) > 3 else 0
        name = f"chain-k{num_sccs:03d}-c{cycle_len}-j{jumps:02d}-s{seed}"
        mdp = chain_of_sccs(
            num_sccs, cycle_len, forward=False, cross_jumps=jumps, seed=seed
        )
        out.append((name, mdp))
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--suite-dir", default="bench/suite")
    parser.add_argument("--csv", default="bench/desk_suite.csv")
    parser.add_argument("--timeout-s", type=float, default=240.0)
    args = parser.parse_args()

    suite_dir = Path(args.suite_dir)
    suite_dir.mkdir(parents=True, exist_ok=True)
    for old in suite_dir.glob("*.mdp"):
        old.unlink()
    instances = suite_instances()
    for name, mdp in instances:
        (suite_dir / f"{name}.mdp").write_text(serialize_mdp(mdp))
    print(f"wrote {len(instances)} instances to {suite_dir}")

    records = run_suite(load_suite(suite_dir), timeout_s=args.timeout_s)
    write_csv(records, args.csv)
    ok = sum(1 for r in records if r.status == "ok")
    print(f"wrote {len(records)} rows ({ok} ok) to {args.csv}")

    ratios = []
    by_key = {(r.instance, r.algo, r.backend): r for r in records}
    for name, _ in instances:
        basic = by_key[(name, "basic", "bitset")]
        inter = by_key[(name, "interleave", "bitset")]
        if basic.symbolic_ops and inter.symbolic_ops:
            ratios.append(basic.symbolic_ops / inter.symbolic_ops)
    ratios.sort()
    median = ratios[len(ratios) // 2]
    print(f"median basic/interleave symbolic-op ratio: {median:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
