"""Print the detected structure statistics of the problem registry.

For each (problem, n) the columns are: number of elements q, largest
element domain, number of variable groups r, number of element-disjoint
collections t, and the largest group size.  With ``--problem`` the full
group and collection layout of one instance is shown as well.
"""

import argparse

from cpsdfo.structure import analyze
from cpsdfo.suite import REGISTRY, instantiate


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--problem", default=None, help="detail one problem name")
    ap.add_argument("--n", type=int, default=None, help="dimension for --problem")
    args = ap.parse_args()

    if args.problem is not None:
        name = args.problem.upper()
        n = args.n if args.n is not None else REGISTRY[name].dims[0]
        sa = analyze(instantiate(name, n))
        print(f"{name} n={n}: {sa.summary()}")
        for k, (group, elems) in enumerate(zip(sa.groups, sa.group_elements)):
            print(f"  group {k}: variables {group!r} elements {elems!r}")
        for h, coll in enumerate(sa.collections):
            print(f"  collection {h}: groups {coll!r}")
        return 0

    print(f"{'problem':10s} {'n':>6s} {'q':>6s} {'max|X|':>6s} {'r':>6s} {'t':>3s} {'max|I|':>6s}")
    for name in sorted(REGISTRY):
        for n in REGISTRY[name].dims:
            sa = analyze(instantiate(name, n))
            q, max_dom, t, max_group = sa.stats_table()
            print(f"{name:10s} {n:6d} {q:6d} {max_dom:6d} {sa.r:6d} {t:3d} {max_group:6d}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
