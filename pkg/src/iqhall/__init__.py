"""Exact Hall-algebra computations for quivers with involution.

The package builds the fixed-point algebra of a doubled quiver, computes
its module theory over finite prime fields with exact linear algebra,
realizes the twisted modified Ringel-Hall algebra on the basis of
path-algebra module classes times torus exponents, and verifies the
defining relations of the associated coideal-subalgebra presentations.
Generic structure constants are Laurent polynomials in v, recovered by
interpolating over several primes with a held-out verification prime.
"""

__version__ = "0.1.0"
