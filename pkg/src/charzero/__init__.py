"""charzero: desk-scale numerics for Dirichlet characters, L-function zeros,
mean values of multiplicative functions, and the spectral kernel governing
sums of quadratic characters."""

__version__ = "0.1.0"
