"""Print dim A(empty)_m and primitive dimensions with timings.

    python3 scripts/dimension_table.py --max-degree 5 [--cache DIR]
"""

import argparse
import time

from aarhus.enumerate import EnumerationConfig
from aarhus.relations import dimension, primitive_dimension, set_cache_dir


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=5)
    ap.add_argument("--cache", default=None)
    args = ap.parse_args()
    if args.cache:
        set_cache_dir(args.cache)
    cfg = EnumerationConfig(aempty_cap=max(6, args.max_degree))
    print(f"{'m':>2} {'dim':>5} {'prim':>5} {'sec':>8}")
    for m in range(args.max_degree + 1):
        t0 = time.time()
        d = dimension("Aempty", m, (), cfg)
        p = primitive_dimension(m, cfg)
        print(f"{m:>2} {d:>5} {p:>5} {time.time() - t0:>8.1f}", flush=True)


if __name__ == "__main__":
    main()
