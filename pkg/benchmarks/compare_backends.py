"""Compare the compiled LL/IC kernels against the pure-Python fallback.

    python benchmarks/compare_backends.py --threads 1,2,4 --ops 20000
"""

import argparse
import sys

from basketq._backend import native
from basketq.bench import LLIC_IMPLS, BenchConfig, run_llic_bench


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--threads", default="1,2,4")
    p.add_argument("--ops", type=int, default=20_000)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--padding", action="store_true")
    args = p.parse_args(argv)
    if native is None:
        print("native core not built; only the python backend is available", file=sys.stderr)
        return 1
    print(f"{'impl':<6} {'threads':>7} {'native s':>10} {'python s':>10} {'speedup':>8}")
    for impl in LLIC_IMPLS:
        for t in (int(x) for x in args.threads.split(",")):
            means = {}
            for backend in ("native", "python"):
                cfg = BenchConfig(impl=impl, threads=t, ops_per_thread=args.ops,
                                  runs=args.runs, padding=args.padding, backend=backend)
                means[backend] = run_llic_bench(cfg).mean
            ratio = means["python"] / means["native"] if means["native"] else float("inf")
            print(f"{impl:<6} {t:>7} {means['native']:>10.5f} {means['python']:>10.5f} {ratio:>7.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
