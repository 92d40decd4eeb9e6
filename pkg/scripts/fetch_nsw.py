#!/usr/bin/env python3
"""Rebuild data/nsw_dw.csv from the causaldata package distribution.

The file is the Dehejia-Wahba experimental subset of the NSW job-training
program (445 units, 185 treated), with earnings rescaled to thousands of
dollars.  The repository ships the file; this script regenerates it from
the published source and verifies the pinned checksum, so the provenance
of the committed data stays auditable.

Usage:  python3 scripts/fetch_nsw.py [--out data/nsw_dw.csv]
"""

import argparse
import hashlib
import sys
from pathlib import Path

EXPECTED_SHA256 = "98b9b675eb3a70000f1bdee066ebcfb81f2bc1e6546db17a432b8ae0dc4e83a3"

COLUMNS = ["id", "treat", "age", "education", "black", "hispanic",
           "married", "nodegree", "re74", "re75", "re78"]
EARNINGS = {"re74", "re75", "re78"}


def build_rows():
    from causaldata import nsw_mixtape

    df = nsw_mixtape.load_pandas().data
    if len(df) != 445:
        raise SystemExit(f"expected 445 rows, got {len(df)}")
    source_name = {"education": "educ", "hispanic": "hisp", "married": "marr"}
    rows = []
    for i, rec in enumerate(df.itertuples(index=False), start=1):
        row = {"id": i}
        for col in COLUMNS[1:]:
            # source columns use narrow integer dtypes; go through float
            value = float(getattr(rec, source_name.get(col, col)))
            if col in EARNINGS:
                value /= 1000.0
            row[col] = value
        rows.append(row)
    return rows


def fmt(col, value):
    if col in EARNINGS:
        return "%.10g" % value
    return "%d" % value


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parent.parent / "data" / "nsw_dw.csv")
    args = parser.parse_args()

    lines = [",".join(COLUMNS)]
    for row in build_rows():
        lines.append(",".join(fmt(col, row[col]) for col in COLUMNS))
    text = "\n".join(lines) + "\n"

    digest = hashlib.sha256(text.encode("ascii")).hexdigest()
    if digest != EXPECTED_SHA256:
        print(f"checksum mismatch:\n  got      {digest}\n  expected {EXPECTED_SHA256}",
              file=sys.stderr)
        return 1

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(text, encoding="ascii")
    print(f"wrote {args.out} ({len(lines) - 1} rows, sha256 verified)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
