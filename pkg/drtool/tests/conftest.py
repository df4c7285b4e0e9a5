import csv

import numpy as np
import pytest


@pytest.fixture(scope="session")
def dataset_csv(tmp_path_factory):
    """Three separable Gaussian blobs in 6-D, with a withheld label column."""
    rng = np.random.default_rng(11)
    rows = []
    for label, center in enumerate(((0.0,) * 6, (6.0,) * 6, (0.0, 6.0, 0.0, 6.0, 0.0, 6.0))):
        pts = rng.normal(center, 0.5, size=(40, 6))
        rows.extend([*map(float, p), label] for p in pts)
    rng.shuffle(rows)
    path = tmp_path_factory.mktemp("data") / "blobs.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(6)] + ["label"])
        writer.writerows(rows)
    return path
