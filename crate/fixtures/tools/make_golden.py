#!/usr/bin/env python3
"""Derive the golden formatter outputs from the raw fixtures.

Independent of the Rust formatter: quote-aware CSV read, then per field
drop double quotes and asterisks, turn ", " and "," into "-", pad header
dates to MM/DD/YYYY, merge the first two columns with "~", and blank out
daily cells that are "0" or empty.
"""
import csv
import sys
from pathlib import Path


def clean(field):
    return field.replace('"', "").replace("*", "").replace(", ", "-").replace(",", "-")


def pad_date(tok):
    m, d, y = tok.split("/")
    if len(y) == 2:
        y = "20" + y
    return f"{int(m):02d}/{int(d):02d}/{y}"


def main(raw_dir, out_dir):
    for series in ("confirmed", "deaths"):
        stem = f"time_series_covid19_{series}_global"
        with open(Path(raw_dir) / f"{stem}.csv", newline="") as f:
            rows = list(csv.reader(f))
        head, body = rows[0], rows[1:]
        out_head = [clean(head[0]) + "~" + clean(head[1]), clean(head[2]), clean(head[3])]
        out_head += [pad_date(t) for t in head[4:]]
        lines = []
        for r in body:
            key = clean(r[0]) + "~" + clean(r[1])
            vals = ["" if clean(v) in ("", "0") else clean(v) for v in r[4:]]
            lines.append(",".join([key, clean(r[2]), clean(r[3])] + vals))
        body_text = "".join(l + "\n" for l in lines)
        (Path(out_dir) / f"{stem}-sparse-with-formatted-column-names.csv").write_text(
            ",".join(out_head) + "\n" + body_text)
        (Path(out_dir) / f"{stem}-sparse.csv").write_text(body_text)


if __name__ == "__main__":
    here = Path(__file__).resolve().parents[1]
    main(here / "raw", here / "golden")
