"""deplab: a desk-scale lab for program-dependence extraction and learned
dependence prediction on a C subset."""

__version__ = "0.1.0"
