"""wittlab: exact truncated Witt-vector calculus, deformed Artin-Hasse
exponential series, and symmetric 2-cocycle verification over exact
coefficient rings."""

__version__ = "0.1.0"
