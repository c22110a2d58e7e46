"""Evans functions, boundary maps and eigenvalue counting for Schrodinger-type operators."""

__version__ = "0.1.0"
