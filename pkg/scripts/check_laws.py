"""Check the comparison-map laws on the corpus over a chosen field and summarize failures."""
import argparse
from collections import Counter

from grpquant.corpus import build_corpus
from grpquant.linalg import Field
from grpquant.nakayama import check_nakayama_laws


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--field", default="q")
    ap.add_argument("--max-order", type=int, default=4)
    args = ap.parse_args()
    F = Field.parse(args.field)
    c = build_corpus(args.max_order, field=F)
    inst = list(c.rotated_instances())
    report = check_nakayama_laws(inst, F)
    bad = Counter(r.law for r in report.failures())
    print(f"{len(inst)} instances over {F!r}: {dict(bad) or 'all pass'}")


if __name__ == "__main__":
    main()
