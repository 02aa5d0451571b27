"""Band and ball realizations of intersection graphs of real line arrangements."""

__version__ = "0.1.0"
