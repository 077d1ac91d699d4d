"""Document quality prediction: readability, topics, POS, sentiment and
citation-graph features with a cross-validated ablation harness."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
