"""Write the bundled partial census of cubic semisymmetric graphs."""

import argparse

from hamsym.autiso import is_semisymmetric
from hamsym.zoo import census_dir, census_fixture_graphs, write_census


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(census_dir()))
    args = ap.parse_args()
    for order, g in census_fixture_graphs().items():
        res = is_semisymmetric(g)
        assert res.answer, f"order {order}: {res.reason}"
    manifest = write_census(args.out)
    print(f"wrote {len(manifest['graphs'])} graphs to {args.out}")


if __name__ == "__main__":
    main()
