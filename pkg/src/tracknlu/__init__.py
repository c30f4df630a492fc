"""tracknlu: schema-guided natural-language data capture for self-tracking."""

__version__ = "0.1.0"
