"""floerforge: exact algebra for link Floer and Khovanov detection arguments."""
__version__ = "0.1.0"
