"""Difference sets avoiding shifted primes p - 1: exact arithmetic on periodic
functions, Dirichlet characters, approximants to the von Mangoldt function,
damping constructions, certified cosine polynomials and the LP for gamma(N)."""

__version__ = "0.1.0"
