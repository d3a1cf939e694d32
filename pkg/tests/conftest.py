from pathlib import Path

import numpy as np
import pytest

SEED = 20240611


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def triangle_pair():
    """The taxicab triangle pair: y = (6, 8) regressed on x = (4, 2)."""
    return np.array([6.0, 8.0]), np.array([4.0, 2.0])


@pytest.fixture
def flipped_pair():
    """Same y, regressor with a flipped second sign."""
    return np.array([6.0, 8.0]), np.array([4.0, -2.0])


@pytest.fixture
def write_csv(tmp_path):
    """Writes rows (or raw text) to a file under tmp_path and returns its path."""
    def write(name: str, rows, delimiter: str = ",") -> Path:
        path = tmp_path / name
        if isinstance(rows, str):
            path.write_text(rows)
        else:
            path.write_text("".join(delimiter.join(repr(float(v)) for v in row) + "\n" for row in rows))
        return path
    return write
