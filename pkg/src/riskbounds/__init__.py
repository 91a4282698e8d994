"""Distribution-free risk bounds, tolerance limits and sampling plans for small samples."""
__version__ = "0.1.0"
