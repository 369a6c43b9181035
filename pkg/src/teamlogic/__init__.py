"""Team temporal logics over multisets of lasso traces."""

__version__ = "0.1.0"
