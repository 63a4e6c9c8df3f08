"""Run every bundled corpus command and write the combined JSON report.

    python3 scripts/run_corpus.py --seed 0 --out corpus_report.json
"""

import argparse
import hashlib
import json
import sys

from restrict_lr.cli import run_corpus


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    args = ap.parse_args()
    text = run_corpus(seed=args.seed, samples=args.samples)
    runs = json.loads(text)["runs"]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        for r in runs:
            print(f"{r['exit_code']}  {' '.join(r['argv'])}")
        print(f"sha256 {hashlib.sha256(text.encode()).hexdigest()}")
    else:
        print(text)
    return 2 if any(r["exit_code"] == 2 for r in runs) else 0


if __name__ == "__main__":
    sys.exit(main())
