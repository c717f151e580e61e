"""Write the deterministic test corpus to a directory."""
import argparse

from grpquant.corpus import build_corpus, write_corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", nargs="?", default="corpus")
    ap.add_argument("--max-order", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    c = build_corpus(args.max_order, args.seed)
    for p in write_corpus(c, args.out):
        print(p)
    print(f"{len(c.maps)} maps, {len(c.pairs())} composable pairs")


if __name__ == "__main__":
    main()
