"""Classic analytic test functions."""
import numpy as np

from ..core import SearchProblem

__all__ = [
    "goldstein_price",
    "michalewicz",
    "sphere",
    "GOLDSTEIN_PRICE_MIN",
    "MICHALEWICZ_2D_MIN",
    "goldstein_price_problem",
    "michalewicz_problem",
    "sphere_problem",
]

GOLDSTEIN_PRICE_MIN = 3.0
# attained near (2.2029, 1.5708) for m = 10
MICHALEWICZ_2D_MIN = -1.8013034100985532


def goldstein_price(x):
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise ValueError(f"goldstein_price takes a length-2 vector, got shape {x.shape}")
    x1, x2 = x
    a = 1 + (x1 + x2 + 1) ** 2 * (19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2)
    b = 30 + (2 * x1 - 3 * x2) ** 2 * (
        18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2)
    return float(a * b)


def michalewicz(x, m=10):
    """``-sum_i sin(x_i) * sin(i * x_i**2 / pi)**(2m)`` on ``[0, pi]^n``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("michalewicz takes a nonempty 1-D vector")
    if np.any(x < 0) or np.any(x > np.pi):
        raise ValueError("michalewicz is defined on [0, pi]^n")
    i = np.arange(1, x.size + 1)
    return float(-np.sum(np.sin(x) * np.sin(i * x**2 / np.pi) ** (2 * m)))


def sphere(x):
    x = np.asarray(x, dtype=float)
    return float(x @ x)


def goldstein_price_problem():
    return SearchProblem(np.full(2, -2.0), np.full(2, 2.0), goldstein_price, name="goldstein_price")


def michalewicz_problem(dimension=2, m=10):
    return SearchProblem(np.zeros(dimension), np.full(dimension, np.pi),
                         lambda x: michalewicz(x, m), name="michalewicz")


def sphere_problem(dimension=3, lower=0.0, upper=1.0):
    return SearchProblem(np.full(dimension, float(lower)), np.full(dimension, float(upper)),
                         sphere, name="sphere")
