"""Regenerates the CSV files bundled under data/.

housing_synth.csv: 506 x 13 synthetic regression data with the column
layout of the classic housing benchmark. Values come from a fixed-seed
generator; the target is a nonlinear function of a few columns plus noise.

wine.csv: the UCI wine recognition data (178 x 13, 3 classes) as shipped
with scikit-learn.
"""

import pathlib

import numpy as np
from sklearn.datasets import load_wine

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def housing(n: int = 506, seed: int = 20240501) -> None:
    rng = np.random.default_rng(seed)
    crim = np.round(rng.lognormal(-0.5, 1.5, n), 5)
    zn = np.round(np.where(rng.random(n) < 0.7, 0.0, rng.uniform(10, 100, n)), 1)
    indus = np.round(rng.uniform(0.5, 28, n), 2)
    chas = (rng.random(n) < 0.07).astype(int)
    nox = np.round(0.38 + 0.012 * indus + rng.normal(0, 0.04, n), 3)
    rm = np.round(rng.normal(6.3, 0.7, n), 3)
    age = np.round(np.clip(rng.normal(68, 28, n), 3, 100), 1)
    dis = np.round(np.clip(12 - 0.09 * age + rng.normal(0, 1.5, n), 1.1, 12.1), 4)
    rad = rng.choice([1, 2, 3, 4, 5, 6, 7, 8, 24], n)
    tax = np.round(190 + 20 * rad + rng.normal(0, 40, n)).astype(int)
    ptratio = np.round(rng.uniform(12.6, 22, n), 1)
    b = np.round(np.clip(396.9 - rng.exponential(20, n), 0.3, 396.9), 2)
    lstat = np.round(np.clip(35 - 4.2 * (rm - 4) + rng.normal(0, 4, n), 1.7, 38), 2)
    medv = (
        22
        + 6.0 * np.tanh(rm - 6.3)
        - 0.45 * (lstat - 12)
        + 0.01 * (lstat - 12) ** 2
        - 2.5 * (nox > 0.6)
        - 0.6 * np.log1p(crim)
        + 2.5 * chas
        - 0.35 * (ptratio - 18)
        + rng.normal(0, 2.5, n)
    )
    medv = np.round(np.clip(medv, 5, 50), 1)
    cols = dict(CRIM=crim, ZN=zn, INDUS=indus, CHAS=chas, NOX=nox, RM=rm, AGE=age, DIS=dis,
                RAD=rad, TAX=tax, PTRATIO=ptratio, B=b, LSTAT=lstat, MEDV=medv)
    write(OUT / "housing_synth.csv", cols)


def wine() -> None:
    data = load_wine()
    cols = {name: np.round(data.data[:, i], 4) for i, name in enumerate(data.feature_names)}
    cols["class"] = np.array([f"class_{c}" for c in data.target])
    write(OUT / "wine.csv", cols)


def write(path: pathlib.Path, cols: dict) -> None:
    names = list(cols)
    n = len(cols[names[0]])
    lines = [",".join(names)]
    for i in range(n):
        lines.append(",".join(str(cols[c][i]) for c in names))
    path.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    housing()
    wine()
