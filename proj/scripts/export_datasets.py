#!/usr/bin/env python3
"""Export the scikit-learn evaluation datasets to CSV for the CLI and tests.

Writes digits.csv, wine.csv, and breast_cancer.csv into the target
directory (default: data/ next to this script). Each file has a header row,
feature columns, and a trailing integer `target` column.

The wifi localization dataset is not bundled with scikit-learn; if you have
wifi.csv (7 signal-strength columns plus a room label) place it in the same
directory by hand and the benchmarks will pick it up.
"""

import argparse
import os

import numpy as np
from sklearn import datasets


def export(loader, path):
    bunch = loader()
    X = np.asarray(bunch.data, dtype=float)
    y = np.asarray(bunch.target, dtype=int)
    names = [str(n).replace(" ", "_") for n in getattr(bunch, "feature_names", [])]
    if len(names) != X.shape[1]:
        names = [f"f{i}" for i in range(X.shape[1])]
    header = ",".join(names + ["target"])
    rows = np.column_stack([X, y])
    fmt = ["%.17g"] * X.shape[1] + ["%d"]
    np.savetxt(path, rows, fmt=fmt, delimiter=",", header=header, comments="")
    print(f"wrote {path}: {X.shape[0]} x {X.shape[1]}")


def main():
    default_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=default_dir)
    args = parser.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    export(datasets.load_digits, os.path.join(args.out_dir, "digits.csv"))
    export(datasets.load_wine, os.path.join(args.out_dir, "wine.csv"))
    export(datasets.load_breast_cancer, os.path.join(args.out_dir, "breast_cancer.csv"))


if __name__ == "__main__":
    main()
