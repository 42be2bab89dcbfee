"""torusres: rectangle-resonance counting and dispersive L^4 verification on T^2."""

__version__ = "0.1.0"
