"""
abq-forms
Main source package: Aharonov-Bohm Green functions, quadratic forms,
self-adjoint extensions and spectral studies.
"""
