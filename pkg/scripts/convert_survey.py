#!/usr/bin/env python3
"""One-off converter: wide survey export -> normcast ingestion CSV.

Survey platforms typically export one row per participant with one column
per question. This script melts that layout into the long format normcast
ingests (header ``user_id,element_id,answer``), skipping blank cells,
which mean the participant was not shown or did not answer the question.

Example:
    python3 scripts/convert_survey.py --input responses.csv \
        --output data/survey_responses.csv --id-column participant \
        --drop age --drop gender --scale 1:5
"""

from __future__ import annotations

import argparse
import csv
import sys


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", required=True, help="wide-format survey CSV")
    parser.add_argument("--output", required=True, help="long-format CSV to write")
    parser.add_argument("--id-column", default=None,
                        help="participant id column (default: first column)")
    parser.add_argument("--drop", action="append", default=[], metavar="COLUMN",
                        help="non-question column to ignore (repeatable)")
    parser.add_argument("--scale", default=None,
                        help="lo:hi answer range to enforce, e.g. 1:5")
    args = parser.parse_args(argv)

    bounds = None
    if args.scale:
        lo, _, hi = args.scale.partition(":")
        bounds = (float(lo), float(hi))

    n_rows = 0
    n_answers = 0
    n_skipped = 0
    with open(args.input, newline="", encoding="utf-8-sig") as src:
        reader = csv.DictReader(src)
        if not reader.fieldnames:
            print("error: input file has no header", file=sys.stderr)
            return 1
        id_column = args.id_column or reader.fieldnames[0]
        if id_column not in reader.fieldnames:
            print(f"error: no column named {id_column!r}", file=sys.stderr)
            return 1
        questions = [
            c for c in reader.fieldnames if c != id_column and c not in args.drop
        ]
        with open(args.output, "w", newline="", encoding="utf-8") as dst:
            writer = csv.writer(dst, lineterminator="\n")
            writer.writerow(["user_id", "element_id", "answer"])
            for row in reader:
                n_rows += 1
                user = (row[id_column] or "").strip()
                if not user:
                    print(f"error: empty id in data row {n_rows}", file=sys.stderr)
                    return 1
                for question in questions:
                    cell = (row.get(question) or "").strip()
                    if not cell:
                        continue
                    try:
                        answer = float(cell)
                    except ValueError:
                        n_skipped += 1
                        continue
                    if bounds and not (bounds[0] <= answer <= bounds[1]):
                        print(
                            f"error: answer {answer} for ({user}, {question}) "
                            f"outside [{bounds[0]}, {bounds[1]}]",
                            file=sys.stderr,
                        )
                        return 1
                    writer.writerow([user, question, cell])
                    n_answers += 1
    print(f"{n_rows} participants, {len(questions)} questions, "
          f"{n_answers} answers written ({n_skipped} non-numeric cells skipped)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
