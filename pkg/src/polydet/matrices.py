"""Dense complex matrix helpers shared by every engine.

Matrices are plain ``numpy.ndarray`` values of dtype complex128 with shape
(n, n).  All functions are pure; nothing here holds global state apart from
the per-call PRNG created by :func:`random_matrix`.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SingularMatrixError",
    "as_matrix",
    "validate_matrix_tuple",
    "det",
    "trace",
    "dagger",
    "inverse",
    "identity",
    "random_matrix",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix_file",
]

#: relative tolerance used for floating comparisons throughout the package
REL_TOL = 1e-9
#: absolute floor below which two values are considered equal regardless of scale
ABS_TOL = 1e-12

RANDOM_KINDS = ("general", "unitary", "special-unitary", "traceless-hermitian")


class SingularMatrixError(ValueError):
    """Raised when inverting a matrix whose determinant is below the floor."""


def as_matrix(m, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex128 array and reject non-finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be square with n >= 1, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def validate_matrix_tuple(mats: Iterable) -> tuple[int, tuple[np.ndarray, ...]]:
    """Validate an argument tuple: n matrices, each n x n, all finite.

    Returns (n, matrices) with every matrix coerced to complex128.
    """
    out = tuple(as_matrix(m, name=f"matrix {i}") for i, m in enumerate(mats))
    if not out:
        raise ValueError("matrix tuple is empty")
    n = out[0].shape[0]
    if len(out) != n:
        raise ValueError(f"tuple of {len(out)} matrices does not match dimension {n}")
    for i, m in enumerate(out):
        if m.shape[0] != n:
            raise ValueError(f"matrix {i} has dimension {m.shape[0]}, expected {n}")
    return n, out


def _det_cofactor(a: np.ndarray) -> complex:
    n = a.shape[0]
    if n == 1:
        return complex(a[0, 0])
    if n == 2:
        return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    if n == 3:
        return complex(
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
    raise ValueError(f"cofactor determinant only implemented for n <= 3, got n={n}")


def det(m, method: str = "auto") -> complex:
    """Determinant of a complex square matrix.

    method:
        "auto"      closed-form cofactor expansion for n <= 3, LU for n >= 4
        "cofactor"  explicit closed form, n <= 3 only
        "lu"        LU factorization with partial pivoting (LAPACK) for any n
    """
    a = as_matrix(m)
    n = a.shape[0]
    if method == "cofactor":
        return _det_cofactor(a)
    if method == "lu":
        return complex(np.linalg.det(a))
    if method == "auto":
        return _det_cofactor(a) if n <= 3 else complex(np.linalg.det(a))
    raise ValueError(f"unknown determinant method {method!r}")


def trace(m) -> complex:
    """Sum of diagonal entries."""
    return complex(np.trace(as_matrix(m)))


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def inverse(m) -> np.ndarray:
    """Matrix inverse via LU, guarded by the singularity floor.

    A matrix is treated as singular when |det| < 1e-12 * (max row norm)^n,
    where the row norm is the maximum absolute row sum.
    """
    a = as_matrix(m)
    n = a.shape[0]
    row_norm = float(np.max(np.sum(np.abs(a), axis=1)))
    d = det(a)
    if abs(d) < ABS_TOL * max(row_norm, 1.0) ** n:
        raise SingularMatrixError(f"matrix is numerically singular (|det|={abs(d):.3e})")
    return np.linalg.inv(a)


def random_matrix(n: int, seed: int, kind: str = "general") -> np.ndarray:
    """Deterministic random n x n complex matrix.

    The generator is numpy's ``default_rng`` (PCG64), freshly seeded per call,
    so a given (n, seed, kind) always yields the same matrix.

    kind:
        "general"             re and im of every entry uniform on [-1, 1]
        "unitary"             QR orthonormalization of a general sample with
                              the R-diagonal phases absorbed into Q
        "special-unitary"     unitary sample rescaled by det^(-1/n)
        "traceless-hermitian" Hermitian part of a general sample with the
                              trace projected out
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    kind = kind.replace("_", "-")
    if kind not in RANDOM_KINDS:
        raise ValueError(f"unknown matrix kind {kind!r}; expected one of {RANDOM_KINDS}")
    rng = np.random.default_rng(seed)
    g = rng.uniform(-1.0, 1.0, (n, n)) + 1j * rng.uniform(-1.0, 1.0, (n, n))
    if kind == "general":
        return g
    if kind in ("unitary", "special-unitary"):
        q, r = np.linalg.qr(g)
        d = np.diagonal(r).copy()
        d[d == 0] = 1.0
        u = q * (d / np.abs(d))
        if kind == "special-unitary":
            u = u * complex(np.linalg.det(u)) ** (-1.0 / n)
        return u
    h = (g + g.conj().T) / 2.0
    return h - (np.trace(h) / n) * np.eye(n)


def matrix_to_json(m) -> str:
    """Serialize to the CLI's JSON matrix format."""
    a = as_matrix(m)
    payload = {
        "n": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }
    return json.dumps(payload)


def matrix_from_json(obj) -> np.ndarray:
    """Parse the JSON matrix format (a dict or a JSON string).

    Schema: {"n": 3, "re": [[...], ...], "im": [[...], ...]}; "im" may be
    omitted and then defaults to zero.  Row index first.
    """
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise ValueError('matrix JSON must be an object with "n" and "re" fields')
    n = int(obj["n"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros((n, n))), dtype=float)
    if re.shape != (n, n) or im.shape != (n, n):
        raise ValueError(f'"re"/"im" must be {n}x{n} arrays, got {re.shape} and {im.shape}')
    return as_matrix(re + 1j * im)


def load_matrix_file(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def close(a: complex, b: complex, rel: float = REL_TOL, abs_floor: float = ABS_TOL) -> bool:
    """Tolerance comparison: |a-b| <= max(abs_floor, rel * max(|a|, |b|))."""
    return abs(a - b) <= max(abs_floor, rel * max(abs(a), abs(b)))


def max_deviation(pairs: Sequence[tuple[complex, complex]]) -> float:
    """Largest relative deviation over (value, reference) pairs, floored absolutely."""
    worst = 0.0
    for a, b in pairs:
        scale = max(abs(a), abs(b), ABS_TOL / REL_TOL)
        worst = max(worst, float(abs(a - b) / scale))
    return worst
