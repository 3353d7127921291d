#!/usr/bin/env python3
"""Convert the UCI Concrete_Data.xls spreadsheet to the CSV layout pbreg expects."""

import sys

import pandas as pd

COLUMNS = ["cement", "slag", "fly_ash", "water", "superplasticizer",
           "coarse_agg", "fine_agg", "age_days", "strength"]


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: concrete_to_csv.py Concrete_Data.xls concrete.csv", file=sys.stderr)
        return 2
    frame = pd.read_excel(sys.argv[1])
    if frame.shape[1] != len(COLUMNS):
        print(f"expected {len(COLUMNS)} columns, found {frame.shape[1]}", file=sys.stderr)
        return 2
    frame.columns = COLUMNS
    frame.to_csv(sys.argv[2], index=False)
    return 0


if __name__ == "__main__":
    sys.exit(main())
