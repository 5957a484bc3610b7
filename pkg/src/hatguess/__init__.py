"""Strong degeneracy, hat-guessing certificates and exact hat-guessing games."""

__version__ = "0.1.0"
