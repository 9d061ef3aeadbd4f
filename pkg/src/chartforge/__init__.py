"""chartforge: synthetic chart dataset generation.

Generates dataset records pairing a numeric data table with plotting code,
a rendered JPEG, two natural-language descriptions, and oracle-verified
question/answer pairs. Fully deterministic for a given seed and config.
"""

__version__ = "0.1.0"
