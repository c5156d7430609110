"""smartbullets: danmaku comment-quality filter.

Corpus parsers, a preprocessing pipeline, a from-scratch convolutional
sentence classifier, and a concurrent HTTP filtering service.
"""

__version__ = "0.1.0"
