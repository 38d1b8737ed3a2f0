"""Symbolic workbench for regular scattered orders, order trees and Bernoulli jumps."""

__version__ = "0.1.0"
