"""Sharp constants and groundstate representations for Stein-Weiss inequalities."""

__version__ = "1.0.0"
