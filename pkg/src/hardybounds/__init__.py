"""Hardy-inequality constants for planar simply connected domains."""

__version__ = "0.1.0"
