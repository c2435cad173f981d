"""Strong regularity of linear ODE systems and Painleve-type functions from
integral operators.

Subpackages:

* :mod:`merostat.exact` -- exact rational matrices, polynomials, rational functions
* :mod:`merostat.singular` -- Laurent recurrences, shearing, classification
* :mod:`merostat.spectral` -- spectral-parameter systems and canonical systems
* :mod:`merostat.operator_identity` -- Hamiltonians from convolution kernels
* :mod:`merostat.fredholm` -- Nystrom discretization, Fredholm determinants, sigma functions
* :mod:`merostat.special` -- sinc, Bessel J, Airy functions
"""

__version__ = "0.1.0"
