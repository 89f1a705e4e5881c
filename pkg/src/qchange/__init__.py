"""Change-point and failure detection with projected quantum features and uLSIF."""

__version__ = "0.1.0"
