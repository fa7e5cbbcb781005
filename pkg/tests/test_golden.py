import csv

import numpy as np
import pytest

from golden import DATA, FAMILIES

TOL = 1e-6


def _load(path):
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if "lambda" in rows[0]:
        return np.array([float(r["lambda"]) for r in rows]), np.array([float(r["D"]) for r in rows])
    lam = np.array([complex(float(r["re_lambda"]), float(r["im_lambda"])) for r in rows])
    return lam, np.array([complex(float(r["re_D"]), float(r["im_D"])) for r in rows])


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_matches_golden(family):
    for name, data in FAMILIES[family]().items():
        lam_ref, d_ref = _load(DATA / f"{name}.csv")
        if isinstance(data, list):
            lam = np.array([s.lam for s in data])
            d = np.array([s.value for s in data])
        else:
            lam, d = data.lambdas, data.values
        np.testing.assert_array_equal(lam, lam_ref)
        scale = max(1.0, float(np.max(np.abs(d_ref))))
        assert np.max(np.abs(d - d_ref)) <= TOL * scale, name
