#!/usr/bin/env python3
"""Fetch the California Housing dataset and write data/california_housing.csv.

The dataset is not bundled with this repository. This helper tries, in order:
  1. scikit-learn's fetch_california_housing (downloads ~400 KB from its
     documented mirror and caches under ~/scikit_learn_data), or
  2. the raw StatLib archive at --url, if you have a local mirror.

Output schema (header row, 20640 data rows):
  MedInc,HouseAge,AveRooms,AveBedrms,Population,AveOccup,Latitude,Longitude,MedHouseVal
"""
import argparse
import os
import sys

COLUMNS = ["MedInc", "HouseAge", "AveRooms", "AveBedrms", "Population",
           "AveOccup", "Latitude", "Longitude", "MedHouseVal"]
DEFAULT_OUT = os.path.join("data", "california_housing.csv")


def via_sklearn():
    from sklearn.datasets import fetch_california_housing
    bunch = fetch_california_housing(as_frame=False)
    import numpy as np
    return np.column_stack([bunch.data, bunch.target])


def via_url(url):
    """cal_housing.data ordering: longitude, latitude, housingMedianAge,
    totalRooms, totalBedrooms, population, households, medianIncome,
    medianHouseValue. Derive the per-household averages and rescale the
    target to $100,000s, matching the scikit-learn loader."""
    import io
    import tarfile
    import urllib.request
    import numpy as np

    raw = urllib.request.urlopen(url, timeout=60).read()
    if url.endswith((".tgz", ".tar.gz")):
        with tarfile.open(fileobj=io.BytesIO(raw)) as tar:
            member = next(m for m in tar.getmembers() if m.name.endswith("cal_housing.data"))
            raw = tar.extractfile(member).read()
    a = np.loadtxt(io.BytesIO(raw), delimiter=",")
    longitude, latitude, age, rooms, bedrooms, pop, households, income, value = a.T
    return np.column_stack([
        income, age, rooms / households, bedrooms / households, pop,
        pop / households, latitude, longitude, value / 100000.0,
    ])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=DEFAULT_OUT)
    ap.add_argument("--url", default=None,
                    help="optional mirror of cal_housing.tgz / cal_housing.data")
    args = ap.parse_args()

    try:
        data = via_url(args.url) if args.url else via_sklearn()
    except Exception as e:
        print(f"fetch failed: {e}", file=sys.stderr)
        print("no network? pass --url pointing at a local mirror of cal_housing.tgz",
              file=sys.stderr)
        return 1

    if data.shape != (20640, 9):
        print(f"unexpected shape {data.shape}, refusing to write", file=sys.stderr)
        return 1

    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w") as f:
        f.write(",".join(COLUMNS) + "\n")
        for row in data:
            f.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"wrote {args.out} ({data.shape[0]} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
