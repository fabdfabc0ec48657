"""Small dense matrix helpers: pseudoinverse, rank and norms.

Everything here works on plain 2-D ``numpy`` arrays. Sizes in this package
are tiny (n is at most a few dozen), so the singular value decomposition is
used everywhere for robustness rather than speed.
"""

import csv
import io

import numpy as np

from .exceptions import InvalidInputError

EPS = np.finfo(float).eps


def as_matrix(A, name="matrix"):
    """Return ``A`` as a finite 2-D float array, or raise InvalidInputError."""
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return A


def default_rtol(shape):
    return EPS * max(shape)


def pseudoinverse(A, rtol=None):
    """
    Moore-Penrose pseudoinverse through the SVD.

    Singular values at or below ``rtol * sigma_max`` are treated as zero.

    Parameters
    ----------
    A : array_like, shape (n, m)
    rtol : float, optional
        Relative cutoff. Defaults to ``eps * max(n, m)``.

    Returns
    -------
    ndarray, shape (m, n)
    """
    A = as_matrix(A)
    if rtol is None:
        rtol = default_rtol(A.shape)
    U, sigma, Vt = np.linalg.svd(A, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros(A.shape[::-1])
    keep = sigma > rtol * sigma[0]
    inv = np.zeros_like(sigma)
    with np.errstate(over="ignore"):
        inv[keep] = 1.0 / sigma[keep]
    if not np.all(np.isfinite(inv)):
        raise InvalidInputError("pseudoinverse overflows: singular values are subnormal")
    return (Vt.T * inv) @ U.T


def numerical_rank(A, rtol=None):
    """Count singular values above ``rtol * sigma_max``."""
    A = as_matrix(A)
    if rtol is None:
        rtol = default_rtol(A.shape)
    if rtol <= 0:
        raise InvalidInputError("rtol must be positive")
    sigma = np.linalg.svd(A, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rtol * sigma[0]))


def spectral_norm(A):
    """Largest singular value of ``A``."""
    A = as_matrix(A)
    return float(np.linalg.svd(A, compute_uv=False)[0])


def frobenius_norm(A):
    A = as_matrix(A)
    scale = np.abs(A).max()
    if scale == 0.0:
        return 0.0
    # scale first so tiny or huge entries do not under/overflow when squared
    B = A / scale
    return float(scale * np.sqrt(np.sum(B * B)))


def is_full_column_rank(A, rtol=None):
    A = as_matrix(A)
    return numerical_rank(A, rtol) == A.shape[1]


def is_full_row_rank(A, rtol=None):
    A = as_matrix(A)
    return numerical_rank(A, rtol) == A.shape[0]


def penrose_residuals(A, P):
    """Residuals of the four Penrose conditions, in order."""
    A = np.asarray(A, dtype=float)
    P = np.asarray(P, dtype=float)
    AP = A @ P
    PA = P @ A
    return (
        np.abs(AP @ A - A).max(),
        np.abs(PA @ P - P).max(),
        np.abs(AP.T - AP).max(),
        np.abs(PA.T - PA).max(),
    )


# Matrix CSV: one row per line, no header.

def matrix_to_csv(A):
    A = as_matrix(A)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in A:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def matrix_from_csv(text):
    """Parse matrix CSV text. Ragged rows or bad literals raise InvalidInputError."""
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            rows.append([float(cell) for cell in row])
        except ValueError as exc:
            raise InvalidInputError(f"line {lineno}: {exc}") from None
    if not rows:
        raise InvalidInputError("empty matrix file")
    if len({len(r) for r in rows}) != 1:
        raise InvalidInputError("rows have different lengths")
    return as_matrix(np.array(rows))


def read_matrix(path):
    with open(path, newline="") as fh:
        return matrix_from_csv(fh.read())


def write_matrix(path, A):
    with open(path, "w", newline="") as fh:
        fh.write(matrix_to_csv(A))
