from pathlib import Path

import pytest

from polopt import ColumnSchema, load_dataset
from polopt.cate_ra import ModelSpec, estimate_cate

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
NSW_PATH = DATA_DIR / "nsw_dw.csv"

NSW_SCHEMA = ColumnSchema(
    outcome_col="re78",
    treatment_col="treat",
    covariate_cols=(
        "re74", "re75", "age", "education",
        "nodegree", "married", "black", "hispanic",
    ),
    id_col="id",
)

# the control set used throughout the empirical application
NSW_MODEL = ModelSpec.parse(
    ["re74", "re75", "age", "age^2", "nodegree", "married", "black", "hispanic"]
)


@pytest.fixture(scope="session")
def nsw():
    with open(NSW_PATH, encoding="utf-8") as fh:
        return load_dataset(fh, NSW_SCHEMA)


@pytest.fixture(scope="session")
def nsw_estimates(nsw):
    return estimate_cate(nsw, NSW_MODEL)
