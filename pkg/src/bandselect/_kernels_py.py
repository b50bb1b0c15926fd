"""Pure-numpy implementations of the hot kernels.

Same contracts as the compiled module ``bandselect._kernels``; selected as
a fallback when the extension is unavailable.  Counting is integer-exact,
so both backends produce identical joint tables.
"""

import numpy as np

BACKEND_NAME = "python"


def joint_counts(a: np.ndarray, b: np.ndarray, n_a: int, n_b: int) -> np.ndarray:
    """Co-occurrence counts of two aligned symbol vectors.

    ``a`` and ``b`` are 1-D int32 arrays with values in [0, n_a) / [0, n_b).
    Returns an (n_a, n_b) int64 table.
    """
    flat = a.astype(np.int64) * np.int64(n_b) + b.astype(np.int64)
    return np.bincount(flat, minlength=n_a * n_b).reshape(n_a, n_b)


def nn_classify(train_x: np.ndarray, train_y: np.ndarray, test_x: np.ndarray) -> np.ndarray:
    """Label each test row with its Euclidean-nearest train row's label.

    Ties go to the lowest train-row index (argmin keeps the first minimum).
    Arrays: train_x (n, d) float64, train_y (n,) int64, test_x (m, d) float64.
    """
    n = train_x.shape[0]
    m = test_x.shape[0]
    out = np.empty(m, dtype=np.int64)
    # Chunk the test rows so the (chunk, n) distance block stays small.
    chunk = max(1, 4_000_000 // max(1, n))
    for start in range(0, m, chunk):
        block = test_x[start : start + chunk]
        d2 = ((block[:, None, :] - train_x[None, :, :]) ** 2).sum(axis=2)
        out[start : start + chunk] = train_y[np.argmin(d2, axis=1)]
    return out
