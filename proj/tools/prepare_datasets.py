#!/usr/bin/env python3
"""Write wells.csv and spam7.csv in the layout the acceptance suite reads.

Both tables come from the `rdatasets` package (pip install rdatasets), which
bundles the R datasets carData::Wells and DAAG::spam7.
"""

import argparse
from pathlib import Path

import rdatasets


def wells():
    df = rdatasets.data("carData", "Wells")
    return df.assign(
        y=(df["switch"] == "yes").astype(int),
        arsen=df["arsenic"],
        dist=df["distance"],
        edu=df["education"],
        assoc=(df["association"] == "yes").astype(int),
    )[["y", "arsen", "dist", "edu", "assoc"]]


def spam7():
    df = rdatasets.data("DAAG", "spam7")
    features = ["crl.tot", "dollar", "bang", "money", "n000", "make"]
    return df.assign(y=(df["yesno"] == "y").astype(int))[["y"] + features]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", type=Path, help="destination directory")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, frame in (("wells", wells()), ("spam7", spam7())):
        path = args.out_dir / f"{name}.csv"
        frame.to_csv(path, index=False)
        print(f"{path}: {len(frame)} rows")


if __name__ == "__main__":
    main()
