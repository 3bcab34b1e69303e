"""Validated numerics for the sign of d(t) = int G_-^t - G_+^t built from cosine sums with 0/1 coefficients."""

__version__ = "0.1.0"
