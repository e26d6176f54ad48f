"""
Utils module for constants, errors and quadrature.
Contains shared infrastructure used across every numerical module.
"""
