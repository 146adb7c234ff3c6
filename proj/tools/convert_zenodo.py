#!/usr/bin/env python3
# Copyright 2026 The Tactile SNN Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Converts published Braille recordings into the tactile CSV layout.

Input is a pickle holding either a pandas DataFrame or a list of dicts, one
record per recording, with a letter column and a taxel column whose value is
an array of shape [n_frames, n_taxels] (or [n_taxels, n_frames] with
--taxel-major). Output is the CSV read by `tactile --data file.csv`:

    sample,label,taxel_0,...,taxel_{n-1}

Values are rounded and clipped to [0, 255].
"""

import argparse
import csv
import pickle
import sys


def records(obj, letter_col, taxel_col):
    if hasattr(obj, "iterrows"):  # pandas DataFrame
        for _, row in obj.iterrows():
            yield row[letter_col], row[taxel_col]
    elif isinstance(obj, dict) and letter_col in obj and taxel_col in obj:
        yield from zip(obj[letter_col], obj[taxel_col])
    else:
        for rec in obj:
            yield rec[letter_col], rec[taxel_col]


def to_frames(data, taxel_major):
    rows = [list(r) for r in data]
    if taxel_major:
        rows = [list(col) for col in zip(*rows)]
    return [[min(255, max(0, int(round(float(v))))) for v in r] for r in rows]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input", help="pickle file")
    ap.add_argument("output", help="CSV file to write")
    ap.add_argument("--letter-column", default="letter")
    ap.add_argument("--taxel-column", default="taxel_data")
    ap.add_argument("--taxel-major", action="store_true",
                                    help="arrays are [n_taxels, n_frames]")
    ap.add_argument("--letters", default="",
                                    help="comma-separated subset to keep, e.g. 'A,B,Space'")
    args = ap.parse_args(argv)

    with open(args.input, "rb") as f:
        obj = pickle.load(f)
    keep = {s.strip() for s in args.letters.split(",") if s.strip()}

    n_taxels = None
    n_written = 0
    with open(args.output, "w", newline="") as out:
        w = csv.writer(out)
        for letter, data in records(obj, args.letter_column, args.taxel_column):
            letter = str(letter)
            if keep and letter not in keep:
                continue
            frames = to_frames(data, args.taxel_major)
            if not frames:
                continue
            if n_taxels is None:
                n_taxels = len(frames[0])
                w.writerow(["sample", "label"] + [f"taxel_{i}" for i in range(n_taxels)])
            if any(len(fr) != n_taxels for fr in frames):
                sys.exit(f"recording {n_written}: inconsistent taxel count")
            for fr in frames:
                w.writerow([n_written, letter] + fr)
            n_written += 1
    print(f"wrote {n_written} recordings with {n_taxels} taxels to {args.output}")


if __name__ == "__main__":
    main()
