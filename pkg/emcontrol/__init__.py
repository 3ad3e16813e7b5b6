"""Planning with expectation models for control"""

__version__ = "0.1.0"
