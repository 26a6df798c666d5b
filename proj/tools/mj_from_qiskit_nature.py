#!/usr/bin/env python3
# Copyright 2026 The pepfold Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert an upper-triangular whitespace contact matrix to pepfold CSV.

The input is the layout shipped with qiskit-nature (mj_matrix.txt): a header
of 20 one-letter codes, then 20 rows holding the upper triangle with zeros
below the diagonal. The output is a full symmetric matrix with row labels.
"""

import argparse
import csv
import sys


def read_upper(path):
    with open(path) as f:
        lines = [ln.split() for ln in f if ln.strip()]
    codes = lines[0]
    if len(codes) != 20 or len(lines) != 21:
        sys.exit(f"{path}: expected a 20-code header and 20 rows")
    body = [[float(x) for x in row] for row in lines[1:]]
    for i, row in enumerate(body):
        if len(row) != 20:
            sys.exit(f"{path}: row {i + 1} has {len(row)} values")
    return codes, body


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("input")
    ap.add_argument("output", nargs="?", default="-")
    args = ap.parse_args()

    codes, body = read_upper(args.input)
    full = [[body[min(i, j)][max(i, j)] for j in range(20)] for i in range(20)]

    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["residue"] + codes)
    for code, row in zip(codes, full):
        w.writerow([code] + [repr(v) for v in row])
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
