"""Build a1a-style binary train/test files from the UCI census-income data.

Continuous attributes are cut into quantile bins, categorical attributes are
one-hot encoded, giving 123 binary features.  Missing values (``?``) set no
feature.  A seeded random 1,605 rows form the training set and the remaining
30,956 rows the test set.

Usage::

    python3 scripts/make_adult_a1a.py /path/to/adult.data data/
"""

import argparse
import csv
import gzip
from pathlib import Path

import numpy as np

CATEGORIES = {
    "workclass": "Private, Self-emp-not-inc, Self-emp-inc, Federal-gov, "
    "Local-gov, State-gov, Without-pay, Never-worked",
    "education": "Bachelors, Some-college, 11th, HS-grad, Prof-school, "
    "Assoc-acdm, Assoc-voc, 9th, 7th-8th, 12th, Masters, 1st-4th, 10th, "
    "Doctorate, 5th-6th, Preschool",
    "marital-status": "Married-civ-spouse, Divorced, Never-married, Separated, "
    "Widowed, Married-spouse-absent, Married-AF-spouse",
    "occupation": "Tech-support, Craft-repair, Other-service, Sales, "
    "Exec-managerial, Prof-specialty, Handlers-cleaners, Machine-op-inspct, "
    "Adm-clerical, Farming-fishing, Transport-moving, Priv-house-serv, "
    "Protective-serv, Armed-Forces",
    "relationship": "Wife, Own-child, Husband, Not-in-family, Other-relative, "
    "Unmarried",
    "race": "White, Asian-Pac-Islander, Amer-Indian-Eskimo, Other, Black",
    "sex": "Female, Male",
    "native-country": "United-States, Cambodia, England, Puerto-Rico, Canada, "
    "Germany, Outlying-US(Guam-USVI-etc), India, Japan, Greece, South, China, "
    "Cuba, Iran, Honduras, Philippines, Italy, Poland, Jamaica, Vietnam, "
    "Mexico, Portugal, Ireland, France, Dominican-Republic, Laos, Ecuador, "
    "Taiwan, Haiti, Columbia, Hungary, Guatemala, Nicaragua, Scotland, "
    "Thailand, Yugoslavia, El-Salvador, Trinadad&Tobago, Peru, Hong, "
    "Holand-Netherlands",
}
CATEGORIES = {k: [c.strip() for c in v.split(",")] for k, v in CATEGORIES.items()}

# column order of adult.data; an int is the number of quantile bins
COLUMNS = [
    ("age", 5), ("workclass", None), ("fnlwgt", 5), ("education", None),
    ("education-num", 5), ("marital-status", None), ("occupation", None),
    ("relationship", None), ("race", None), ("sex", None),
    ("capital-gain", 2), ("capital-loss", 2), ("hours-per-week", 5),
    ("native-country", None),
]
N_TRAIN = 1605


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [[f.strip() for f in r] for r in csv.reader(fh) if len(r) == 15]
    return rows


def _bin_edges(values, bins):
    if bins == 2:
        # zero / non-zero, these columns are mostly zero
        return np.array([0.5])
    return np.quantile(values, np.linspace(0, 1, bins + 1)[1:-1])


def encode(rows):
    """Return (labels, list of sorted 1-based feature indices per row)."""
    offset = 0
    encoders = []
    for col, (name, bins) in enumerate(COLUMNS):
        if bins is None:
            lookup = {c: offset + j for j, c in enumerate(CATEGORIES[name])}
            encoders.append((col, lookup, None))
            offset += len(lookup)
        else:
            values = np.array([float(r[col]) for r in rows])
            encoders.append((col, offset, _bin_edges(values, bins)))
            offset += bins
    features = []
    for r in rows:
        idx = []
        for col, base, edges in encoders:
            if edges is None:
                if r[col] in base:
                    idx.append(base[r[col]] + 1)
            else:
                idx.append(base + int(np.searchsorted(edges, float(r[col]), "right")) + 1)
        features.append(sorted(idx))
    labels = [1 if r[14].startswith(">50K") else -1 for r in rows]
    return labels, features, offset


def write(path, labels, features, order):
    # mtime=0 keeps the compressed bytes reproducible
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
        for i in order:
            line = ("+1" if labels[i] > 0 else "-1") + "".join(
                f" {j}:1" for j in features[i])
            gz.write((line + "\n").encode())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("adult_data")
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rows = read_rows(args.adult_data)
    labels, features, width = encode(rows)
    order = np.random.default_rng(args.seed).permutation(len(rows))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "a1a.gz", labels, features, order[:N_TRAIN])
    write(out / "a1a.t.gz", labels, features, order[N_TRAIN:])
    print(f"{len(rows)} rows, {width} features: "
          f"{N_TRAIN} train / {len(rows) - N_TRAIN} test")


if __name__ == "__main__":
    main()
